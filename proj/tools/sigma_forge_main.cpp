#include <CLI11.hpp>
#include <cstddef>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmaforge/report.hpp"
#include "sigmaforge/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sigma-forge: numerical verification suites for the weighted sigma_k curvature "
               "calculus on manifolds with density"};
  app.require_subcommand(1);

  sigmaforge::suites::Config cfg;
  std::string out_path;
  std::string format = "jsonl";
  std::string write_config_path;
  int jobs = 1;

  app.set_config("--config", "", "configuration file with key = value lines");
  app.add_option("--backend", cfg.backend, "model geometry")
      ->check(CLI::IsMember({"euclidean", "torus", "sphere"}))
      ->capture_default_str();
  app.add_option("--n", cfg.n, "dimension")->capture_default_str();
  app.add_option("--k", cfg.k, "maximum curvature order")->capture_default_str();
  app.add_option("--tau", cfg.tau, "scale parameter")->capture_default_str();
  app.add_option("--mode", cfg.mode, "soliton mode fixing lambda")
      ->check(CLI::IsMember({"shrinking", "steady", "expanding"}))
      ->capture_default_str();
  auto* lambda_opt =
      app.add_option("--lambda", cfg.lambda, "explicit lambda override (ignores --mode)");
  app.add_option("--quad-order", cfg.quad_order, "quadrature order per axis")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid, "torus grid points per axis")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample count for randomized checks")
      ->capture_default_str();
  app.add_option("--tol-scale", cfg.tol_scale, "multiplier applied to every tolerance")
      ->capture_default_str();
  app.add_option("--model", cfg.model, "soliton model (soliton suite)")
      ->check(CLI::IsMember({"gaussian", "sphere"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write the report to this path instead of stdout");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  app.add_option("--jobs", jobs, "suite-level parallelism for the all subcommand")
      ->capture_default_str();
  app.add_option("--write-config", write_config_path,
                 "write the effective configuration to this path and exit");

  for (const std::string& name : sigmaforge::suites::suite_names())
    app.add_subcommand(name, name + " verification suite")->fallthrough();
  app.add_subcommand("all", "run every suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.lambda_override = lambda_opt->count() > 0;

  if (!write_config_path.empty()) {
    try {
      sigmaforge::report::write_text(write_config_path, app.config_to_str(true, true));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }

  std::string chosen;
  for (const CLI::App* sub : app.get_subcommands()) chosen = sub->get_name();

  try {
    std::vector<sigmaforge::report::Record> records =
        chosen == "all" ? sigmaforge::suites::run_all(cfg, jobs)
                        : sigmaforge::suites::run_suite(chosen, cfg);
    std::string payload = format == "csv" ? sigmaforge::report::to_csv(records)
                                          : sigmaforge::report::to_jsonl(records);
    if (out_path.empty()) {
      std::cout << payload;
    } else {
      sigmaforge::report::write_text(out_path, payload);
    }
    std::size_t passed = 0;
    for (const auto& r : records) passed += r.pass ? 1 : 0;
    std::cerr << chosen << ": " << passed << "/" << records.size() << " checks passed\n";
    return sigmaforge::report::all_pass(records) ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
