#include "ivdiff/driver.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ivdiff/consolidate.hpp"
#include "ivdiff/diff.hpp"
#include "ivdiff/engine.hpp"
#include "ivdiff/minilang.hpp"
#include "ivdiff/mvicfg.hpp"
#include "ivdiff/oracle.hpp"

namespace ivdiff {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

IneqSpec parse_ineq_spec(const std::string& s) {
  static const std::pair<const char*, Rel> rels[] = {
      {">=", Rel::Ge}, {"<=", Rel::Le}, {"==", Rel::Eq},
      {"!=", Rel::Ne}, {">", Rel::Gt},  {"<", Rel::Lt}};
  for (auto [tok, rel] : rels) {
    size_t pos = s.find(tok);
    if (pos == std::string::npos) continue;
    IneqSpec spec;
    auto trim = [](std::string t) {
      size_t b = t.find_first_not_of(" \t");
      size_t e = t.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    spec.lhs = trim(s.substr(0, pos));
    spec.rhs = trim(s.substr(pos + std::string(tok).size()));
    spec.rel = rel;
    if (spec.lhs.empty() || spec.rhs.empty())
      throw UsageError("malformed inequality candidate: '" + s + "'");
    return spec;
  }
  throw UsageError("malformed inequality candidate (no relation): '" + s + "'");
}

std::vector<Rel> parse_rel_list(const std::string& s) {
  std::vector<Rel> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == ">")
      out.push_back(Rel::Gt);
    else if (item == "<")
      out.push_back(Rel::Lt);
    else if (item == ">=")
      out.push_back(Rel::Ge);
    else if (item == "<=")
      out.push_back(Rel::Le);
    else if (item == "==" || item == "=")
      out.push_back(Rel::Eq);
    else if (item == "!=")
      out.push_back(Rel::Ne);
    else
      throw UsageError("unknown relation '" + item + "' in --ineq-rels");
  }
  if (out.empty()) throw UsageError("--ineq-rels must name at least one relation");
  return out;
}

class PhaseTimer {
 public:
  explicit PhaseTimer(std::map<std::string, long long>& sink) : sink_(sink) {}
  template <typename F>
  auto time(const std::string& phase, F&& f) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(phase, start);
    } else {
      auto r = f();
      record(phase, start);
      return r;
    }
  }

 private:
  void record(const std::string& phase, std::chrono::steady_clock::time_point start) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    sink_[phase] += ms;
  }
  std::map<std::string, long long>& sink_;
};

void write_output(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write file: " + path);
  out << content;
}

}  // namespace

int run_driver(const DriverOptions& options, std::ostream& out, std::ostream& err) {
  Report report;
  report.tool_version = kToolVersion;
  PhaseTimer timer(report.timing_ms);
  try {
    if (options.version_files.empty())
      throw UsageError("at least one version file is required");
    if (options.version_files.size() > 64)
      throw UsageError("at most 64 versions are supported");
    const int n = static_cast<int>(options.version_files.size());

    VersionSet interest;
    if (options.versions.empty()) {
      interest = VersionSet::all(n);
    } else {
      for (int v : options.versions) {
        if (v < 1 || v > n)
          throw UsageError("version " + std::to_string(v) + " out of range 1.." +
                           std::to_string(n));
        interest.add(v);
      }
    }

    // Parse the versions.
    std::vector<SourceUnit> units;
    timer.time("parse", [&] {
      for (int i = 0; i < n; ++i)
        units.push_back(parse(read_file(options.version_files[i]), i + 1));
    });

    // Line diffs between consecutive versions.
    std::vector<EditScript> diffs;
    timer.time("diff", [&] {
      if (!options.use_diff_files.empty() &&
          options.use_diff_files.size() != static_cast<size_t>(n - 1))
        throw UsageError("--use-diff needs exactly one file per consecutive version pair");
      for (int i = 0; i + 1 < n; ++i) {
        EditScript s;
        if (!options.use_diff_files.empty()) {
          s = parse_unified(read_file(options.use_diff_files[i]), units[i].lines);
          if (apply_script(s, units[i].lines) != units[i + 1].lines)
            throw UsageError("external diff " + options.use_diff_files[i] +
                             " does not transform version " + std::to_string(i + 1) +
                             " into version " + std::to_string(i + 2));
        } else {
          s = diff_lines(units[i].lines, units[i + 1].lines);
        }
        s.from_version = i + 1;
        s.to_version = i + 2;
        diffs.push_back(std::move(s));
      }
    });

    std::vector<Cfg> cfgs;
    timer.time("cfg", [&] {
      for (const auto& u : units) cfgs.push_back(build_cfg(u));
    });

    Mvicfg g = timer.time("mvicfg", [&] { return build_mvicfg(units, cfgs, diffs); });
    for (const auto& d : g.diagnostics) report.diagnostics.push_back(d);

    if (!options.emit_cfg_prefix.empty()) {
      for (const auto& cfg : cfgs)
        write_output(options.emit_cfg_prefix + ".v" + std::to_string(cfg.version_index) + ".dot",
                     cfg_to_dot(cfg), out);
    }
    if (!options.emit_mvicfg_path.empty())
      write_output(options.emit_mvicfg_path, mvicfg_to_dot(g), out);
    if (!options.emit_diff_prefix.empty()) {
      for (const auto& d : diffs) {
        std::string name = options.emit_diff_prefix + "." + std::to_string(d.from_version) +
                           "-" + std::to_string(d.to_version) + ".diff";
        write_output(name,
                     render_unified(d, units[d.from_version - 1].lines,
                                    options.version_files[d.from_version - 1],
                                    options.version_files[d.to_version - 1]),
                     out);
      }
    }

    // Engine configuration.
    EngineConfig config;
    config.points = options.points;
    config.versions = interest;
    config.tmpl_const = options.tmpl_const;
    config.tmpl_linear = options.tmpl_linear;
    config.linear_max_arity = options.linear_max_arity;
    for (const auto& s : options.ineq) {
      IneqSpec spec = parse_ineq_spec(s);
      if (spec.rel == Rel::Ne && !options.allow_ne)
        throw UsageError("'!=' templates are disabled by default; pass --allow-ne");
      config.ineq_explicit.push_back(spec);
    }
    config.ineq_all = options.ineq_all;
    config.ineq_rels = parse_rel_list(options.ineq_rels);
    config.allow_ne = options.allow_ne;
    config.var_filter = options.vars;
    config.budget = options.budget;
    if (const char* env = std::getenv("IVDIFF_BUDGET")) config.budget = std::atoll(env);

    std::ofstream trace_file;
    if (options.trace) {
      if (!options.trace_path.empty()) {
        trace_file.open(options.trace_path, std::ios::binary);
        if (!trace_file) throw UsageError("cannot write file: " + options.trace_path);
        config.trace = &trace_file;
      } else {
        config.trace = &err;
      }
    }

    AnalysisResult analysis = timer.time("analysis", [&] { return run(g, config); });
    for (const auto& d : analysis.diagnostics) report.diagnostics.push_back(d);

    if (options.oracle) {
      OracleResult oracle =
          timer.time("oracle", [&] { return oracle_run(g, config, options.path_budget); });
      auto mismatches = compare_engine_oracle(analysis, oracle);
      if (!mismatches.empty()) {
        err << "oracle mismatch (" << mismatches.size() << "):\n";
        for (const auto& m : mismatches) err << "  " << m << "\n";
        return kExitOracleMismatch;
      }
    }

    timer.time("consolidate", [&] {
      report.version_invariants = computing_vi(analysis, interest);
      std::vector<std::pair<int, int>> pairs = options.pairs;
      if (pairs.empty()) {
        auto ms = interest.members();
        for (size_t i = 0; i + 1 < ms.size(); ++i) pairs.emplace_back(ms[i], ms[i + 1]);
      } else {
        for (auto [a, b] : pairs)
          if (!interest.contains(a) || !interest.contains(b))
            throw UsageError("churn pair " + std::to_string(a) + ":" + std::to_string(b) +
                             " not within the versions of interest");
      }
      report.invariant_churns = computing_ic(analysis, g, pairs);
    });

    // Configuration echo.
    {
      std::string files;
      for (const auto& f : options.version_files) files += (files.empty() ? "" : ",") + f;
      report.config["files"] = files;
      std::string points;
      for (const auto& p : options.points) points += (points.empty() ? "" : ",") + p;
      report.config["points"] = points;
      report.config["versions"] = interest.render();
      std::string templates;
      if (options.tmpl_const) templates += "const";
      if (options.tmpl_linear) templates += std::string(templates.empty() ? "" : ",") + "linear";
      if (!config.ineq_explicit.empty() || options.ineq_all)
        templates += std::string(templates.empty() ? "" : ",") + "ineq";
      report.config["templates"] = templates;
      if (!options.vars.empty()) {
        std::string vars;
        for (const auto& v : options.vars) vars += (vars.empty() ? "" : ",") + v;
        report.config["vars"] = vars;
      }
    }

    if (!options.timings) report.timing_ms.clear();
    report.sort();
    std::string rendered =
        options.format == "json" ? render_json(report) : render_text(report);
    write_output(options.out_path, rendered, out);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const PathBudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ivdiff
