#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmolb/analysis.hpp"
#include "pmolb/learners.hpp"

namespace pmolb {

struct GameSpec {
  std::string kind = "uniform_random";
  int d = 4;
  int cols = 0;  // 0 means square
  double epsilon = 0.1;
  double margin = 0.2;
  std::uint64_t game_seed = 1;
  std::string path;  // for kind == from_file
};

struct ExperimentConfig {
  GameSpec game;
  std::vector<Algorithm> algorithms{Algorithm::PmoLb, Algorithm::NeUniform};
  std::uint64_t total_rounds = std::uint64_t{1} << 20;
  double delta = 0.1;
  NoiseKind noise = NoiseKind::BernoulliPm1;
  double sigma = 0.25;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t t_min_fit = 1000;
  std::string output_dir = "out";
  bool diagnostics = false;
  double solver_tol = 1e-9;
  int workers = 1;
};

// Flat key=value text with # comments.
ExperimentConfig config_from_file(const std::string& path);
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const ExperimentConfig& cfg);  // throws naming the offending key

GameMatrix build_game(const GameSpec& spec);

// Trace CSV, exact column order:
// seed,epoch,t_start,t_end,gamma_or_alpha,duality_gap,solver_residual,
// solver_iterations,stability_row,stability_col,concentration_ok
// Doubles are emitted in shortest round-trip form, so parse(emit(t)) == t.
std::string emit_trace_csv(const RunTrace& trace);
RunTrace parse_trace_csv(std::istream& in);
RunTrace parse_trace_csv_file(const std::string& path);

std::string emit_aggregate_csv(const AggregateTrace& agg);
AggregateTrace parse_aggregate_csv(std::istream& in);
AggregateTrace parse_aggregate_csv_file(const std::string& path);

double theory_slope(Algorithm a);  // -0.5, -0.5, -0.25

struct AlgoCurve {
  std::string name;
  std::vector<AggregateRecord> records;
  bool has_fit = false;
  double fitted_slope = 0.0;
  double theory = 0.0;
};

// Log-log duality-gap curves with slope annotations. Pure function of its
// inputs; the orchestrator feeds it rows parsed back from the emitted
// aggregate CSVs so the plot is a view of those files.
std::string render_svg(const std::string& title, const std::vector<AlgoCurve>& curves);

struct AlgorithmSummary {
  Algorithm algorithm;
  bool has_fit = false;
  SlopeFit fit;
  double theory = 0.0;
  double final_epoch_mean_gap = 0.0;
};

struct RunOutputs {
  std::vector<std::string> trace_files;
  std::vector<std::string> aggregate_files;
  std::string summary_file;
  std::string svg_file;
  std::vector<AlgorithmSummary> summaries;
};

// Runs every (algorithm, seed) job, in parallel when workers > 1, and writes
// traces, per-algorithm aggregates, summary.csv and plot.svg under
// output_dir. Output bytes are independent of the worker count.
RunOutputs run_experiment(const ExperimentConfig& cfg);

struct ValidationReport {
  int rows = 0;
  int cols = 0;
  double min_entry = 0.0;
  double max_entry = 0.0;
  bool skew_symmetric = false;
  double value = 0.0;  // minimax value at tol 1e-6
};

ValidationReport validate_matrix_file(const std::string& path);
std::string format_validation(const ValidationReport& rep);

// Re-fit a slope from an existing trace or aggregate CSV (sniffs the header).
SlopeFit fit_csv_file(const std::string& path, std::uint64_t t_min);

std::string format_lemma_report(const LemmaReport& rep);

}  // namespace pmolb
