#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmolb/experiment.hpp"

namespace {

// CLI flag values start from the config file (when given) so that flags set
// on the command line override file keys.
struct RunArgs {
  std::string config_path;
  std::string game;
  int game_d = -1;
  int game_cols = -1;
  std::string game_file;
  std::string game_seed, rounds, delta, noise, sigma, seeds, t_min, output_dir, solver_tol,
      workers, algorithms;
  bool diagnostics = false;
};

int cmd_run(const RunArgs& args) {
  pmolb::ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = pmolb::config_from_file(args.config_path);
  if (const char* env = std::getenv("PMOLB_OUTPUT_DIR"); env && *env) cfg.output_dir = env;

  auto set = [&](const std::string& key, const std::string& value) {
    if (!value.empty()) pmolb::apply_config_key(cfg, key, value);
  };
  set("game", args.game);
  if (args.game_d >= 0) cfg.game.d = args.game_d;
  if (args.game_cols >= 0) cfg.game.cols = args.game_cols;
  set("game_file", args.game_file);
  set("game_seed", args.game_seed);
  set("algorithms", args.algorithms);
  set("rounds", args.rounds);
  set("delta", args.delta);
  set("noise", args.noise);
  set("sigma", args.sigma);
  set("seeds", args.seeds);
  set("t_min_fit", args.t_min);
  set("output_dir", args.output_dir);
  set("solver_tol", args.solver_tol);
  set("workers", args.workers);
  if (args.diagnostics) cfg.diagnostics = true;

  const pmolb::RunOutputs out = pmolb::run_experiment(cfg);
  std::cout << "wrote " << out.trace_files.size() << " trace files, "
            << out.aggregate_files.size() << " aggregates, " << out.summary_file << ", "
            << out.svg_file << "\n";
  for (const auto& s : out.summaries) {
    std::cout << pmolb::algorithm_name(s.algorithm) << ": ";
    if (s.has_fit)
      std::cout << "fitted slope " << s.fit.slope << " (theory " << s.theory << "), r^2 "
                << s.fit.r_squared;
    else
      std::cout << "no fit (too few epochs past t_min), theory " << s.theory;
    std::cout << ", final mean gap " << s.final_epoch_mean_gap << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-game bandit learning experiments"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an experiment and write traces, summary and plot");
  run->add_option("--config", run_args.config_path, "key=value config file");
  run->add_option("--game", run_args.game,
                  "generator kind (uniform_random, skew_symmetric_random, psne_diagonal, "
                  "epsilon_example, rock_paper_scissors, matching_pennies, from_file)");
  run->add_option("--game-d", run_args.game_d, "rows (and columns unless --game-cols)");
  run->add_option("--game-cols", run_args.game_cols, "columns, 0 = square");
  run->add_option("--game-file", run_args.game_file, "matrix CSV for from_file");
  run->add_option("--game-seed", run_args.game_seed, "generator seed");
  run->add_option("--algorithms", run_args.algorithms, "comma list of pmo_lb,falcon,ne_uniform");
  run->add_option("--rounds", run_args.rounds, "total rounds T");
  run->add_option("--delta", run_args.delta, "confidence parameter in (0,1)");
  run->add_option("--noise", run_args.noise, "bernoulli_pm1, clipped_gaussian or deterministic");
  run->add_option("--sigma", run_args.sigma, "clipped_gaussian width");
  run->add_option("--seeds", run_args.seeds, "comma list of run seeds");
  run->add_option("--t-min-fit", run_args.t_min, "first round used by the slope fit");
  run->add_option("--output-dir", run_args.output_dir, "output directory");
  run->add_option("--solver-tol", run_args.solver_tol, "saddle solver tolerance");
  run->add_option("--workers", run_args.workers, "parallel (algorithm, seed) jobs");
  run->add_flag("--diagnostics", run_args.diagnostics, "enable per-epoch inline checks");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a matrix CSV and report its value");
  validate->add_option("path", validate_path, "matrix CSV")->required();

  std::string fit_path;
  std::uint64_t fit_t_min = 1000;
  auto* fit = app.add_subcommand("fit", "re-fit a slope from a trace or aggregate CSV");
  fit->add_option("path", fit_path, "trace or aggregate CSV")->required();
  fit->add_option("--t-min", fit_t_min, "first round used by the fit");

  std::string report_path;
  int report_d = 0;
  double report_delta = 0.1;
  auto* report = app.add_subcommand("report", "stability/concentration report from a trace CSV");
  report->add_option("path", report_path, "pmo_lb trace CSV")->required();
  report->add_option("--d", report_d, "d = max(rows, cols) of the game")->required();
  report->add_option("--delta", report_delta, "confidence parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (validate->parsed()) {
      std::cout << pmolb::format_validation(pmolb::validate_matrix_file(validate_path)) << "\n";
      return 0;
    }
    if (fit->parsed()) {
      const pmolb::SlopeFit f = pmolb::fit_csv_file(fit_path, fit_t_min);
      std::cout << "slope " << f.slope << ", intercept " << f.intercept << ", r^2 "
                << f.r_squared << ", points " << f.n_points << " (t_min " << f.t_min << ", "
                << f.excluded_nonpositive << " non-positive gaps dropped)\n";
      return 0;
    }
    if (report->parsed()) {
      pmolb::RunTrace trace = pmolb::parse_trace_csv_file(report_path);
      trace.algorithm = pmolb::Algorithm::PmoLb;
      std::cout << pmolb::format_lemma_report(pmolb::lemma_report(trace, report_d, report_delta));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
