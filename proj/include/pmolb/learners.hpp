#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmolb/barrier_solver.hpp"
#include "pmolb/environment.hpp"
#include "pmolb/game.hpp"

namespace pmolb {

enum class Algorithm { PmoLb, Falcon, NeUniform };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

// Epoch learning rates. Natural logarithms throughout; for rectangular
// games d = max(rows, cols).
double gamma_pmo_lb(int s, int d, double delta);   // 128 d 2^{-s/2} sqrt(log(8 d^2 s^2 / delta))
double gamma_falcon(int s, int d, double delta);   // 40 2^{-s/2} sqrt(log(8 d s^2 / delta))
double alpha_ne_uniform(int s, int d);             // min(1, sqrt(d) 2^{-(s-1)/4})

struct EpochRecord {
  int epoch = 0;
  std::uint64_t t_start = 0;
  std::uint64_t t_end = 0;
  double gamma_or_alpha = 0.0;
  double duality_gap = 0.0;
  double solver_residual = 0.0;
  std::int64_t solver_iterations = 0;
  double stability_row = 1.0;  // max_i x_{s,i} / x_{s-1,i}, 1 for the first epoch
  double stability_col = 1.0;
  bool concentration_ok = true;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::PmoLb;
  std::uint64_t seed = 0;
  std::uint64_t total_rounds = 0;
  double delta = 0.1;
  int rows = 0;
  int cols = 0;
  std::string config_key;  // run configuration without the seed, for aggregation checks
  std::vector<EpochRecord> records;
  std::vector<StrategyPair> played;   // per-epoch pair, kept in memory only
  std::vector<std::string> notes;     // inline diagnostics findings, if enabled
};

struct LearnerOptions {
  Algorithm algorithm = Algorithm::PmoLb;
  std::uint64_t total_rounds = 1;
  double delta = 0.1;
  FeedbackModel noise;
  std::uint64_t seed = 1;
  double solver_tol = 1e-9;
  bool diagnostics = false;
  // Test hook replacing gamma_* / alpha_* for epoch s; not exposed on the CLI.
  std::function<double(int)> schedule_override;
};

struct LearnerState {
  int epoch = 1;
  EstimatedGame estimate;
  std::optional<StrategyPair> prev_pair;
  SplitMix64 rng;
  std::uint64_t rounds_played = 0;
};

LearnerState make_initial_state(const GameMatrix& game, const LearnerOptions& opts);

// Runs one epoch: computes the epoch strategy from the current estimate,
// plays it, refreshes the estimate, and reports diagnostics. The true game
// drives rewards and the evaluation columns only; decisions read the
// estimate alone.
EpochRecord step_epoch(LearnerState& state, const GameMatrix& game, const GameMatrix& eval_game,
                       const LearnerOptions& opts, StrategyPair* played_out = nullptr,
                       std::vector<std::string>* notes = nullptr);

RunTrace run_learner(const GameMatrix& game, const LearnerOptions& opts);

// Same dynamics, but duality gaps and concentration checks are evaluated
// against eval_game. Strategies depend only on (game, opts).
RunTrace run_learner_with_eval(const GameMatrix& game, const GameMatrix& eval_game,
                               const LearnerOptions& opts);

}  // namespace pmolb
