// ivdiff — compute version invariants and invariant churns across program
// versions written in the .mini language.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ivdiff/driver.hpp"

int main(int argc, char** argv) {
  ivdiff::DriverOptions options;
  CLI::App app{"ivdiff: invariant diffs across program versions"};
  app.set_version_flag("--version", std::string(ivdiff::kToolVersion));

  app.add_option("files", options.version_files,
                 ".mini files, one per version in version order")
      ->check(CLI::ExistingFile);
  app.add_option("--point", options.points,
                 "program points of interest (anchor names; default: exit)");
  app.add_option("--versions", options.versions, "versions of interest (default: all)")
      ->delimiter(',');

  std::vector<std::string> template_names;
  app.add_option("--templates", template_names,
                 "template families to raise: const, linear (default: const,linear)")
      ->delimiter(',');
  app.add_option("--linear-arity", options.linear_max_arity,
                 "max arity of linear templates (default 2)");
  app.add_option("--ineq", options.ineq,
                 "explicit inequality candidate, e.g. 'b>a1' (repeatable)");
  app.add_flag("--ineq-all", options.ineq_all, "raise inequalities over all variable pairs");
  app.add_option("--ineq-rels", options.ineq_rels,
                 "relations for --ineq-all, comma separated (default: >)");
  app.add_flag("--allow-ne", options.allow_ne, "enable '!=' templates");
  app.add_option("--vars", options.vars, "restrict queried variables")->delimiter(',');

  std::vector<std::string> pair_names;
  app.add_option("--pairs", pair_names,
                 "churn version pairs as from:to (default: consecutive)")
      ->delimiter(',');
  app.add_option("--budget", options.budget,
                 "transfer budget (env IVDIFF_BUDGET overrides)");
  app.add_option("--path-budget", options.path_budget, "oracle path budget (default 4096)");
  app.add_option("--format", options.format, "output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", options.out_path, "write the report to a file");
  app.add_flag("--trace", options.trace, "stream one line per query transfer");
  app.add_option("--trace-out", options.trace_path, "write the trace to a file");
  app.add_flag("--oracle", options.oracle,
               "cross-check against the exhaustive oracle; exit 4 on mismatch");
  app.add_flag("--timings", options.timings, "include per-phase timings in the report");
  app.add_option("--emit-cfg", options.emit_cfg_prefix,
                 "write per-version CFGs as DOT files with this prefix");
  app.add_option("--emit-mvicfg", options.emit_mvicfg_path,
                 "write the multiversion CFG as a DOT file");
  app.add_option("--emit-diff", options.emit_diff_prefix,
                 "write unified diffs with this prefix");
  app.add_option("--use-diff", options.use_diff_files,
                 "use external unified diff files (one per consecutive pair)")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ivdiff::kExitUsage;
  }

  if (options.version_files.empty()) {
    std::cerr << app.help();
    return ivdiff::kExitUsage;
  }
  if (!template_names.empty()) {
    options.tmpl_const = false;
    options.tmpl_linear = false;
    for (const auto& t : template_names) {
      if (t == "const") {
        options.tmpl_const = true;
      } else if (t == "linear") {
        options.tmpl_linear = true;
      } else if (t == "ineq") {
        // inequalities come from --ineq / --ineq-all; accepted for symmetry
      } else {
        std::cerr << "error: unknown template family '" << t << "'\n";
        return ivdiff::kExitUsage;
      }
    }
  }
  for (const auto& p : pair_names) {
    auto colon = p.find(':');
    if (colon == std::string::npos) {
      std::cerr << "error: --pairs entries must look like from:to\n";
      return ivdiff::kExitUsage;
    }
    try {
      options.pairs.emplace_back(std::stoi(p.substr(0, colon)), std::stoi(p.substr(colon + 1)));
    } catch (const std::exception&) {
      std::cerr << "error: --pairs entries must look like from:to\n";
      return ivdiff::kExitUsage;
    }
  }
  if (options.trace_path.empty() == false) options.trace = true;

  return ivdiff::run_driver(options, std::cout, std::cerr);
}
