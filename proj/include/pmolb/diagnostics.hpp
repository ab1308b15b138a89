#pragma once

#include <string>
#include <vector>

#include "pmolb/environment.hpp"
#include "pmolb/game.hpp"

namespace pmolb {

// Per-action regret gaps against a loss estimate, with the true-loss version
// alongside for evaluation-only comparisons.
struct RegretEstimates {
  std::vector<double> estimated;    // loss_estimate_i - min_j loss_estimate_j
  std::vector<double> true_regret;  // same under the true loss
};

RegretEstimates regret_estimates(const std::vector<double>& loss_estimate,
                                 const std::vector<double>& true_loss);

struct InequalityCheck {
  bool ok = true;
  double worst_slack = 0.0;  // min over instances of rhs - lhs
  int worst_index = 0;
};

// Checks, for x produced by solve_igw(loss_estimate, gamma):
//   estimated regret of x      <= d*gamma                    (low regret)
//   1/x_i <= d + reg_hat(e_i)/gamma  for all i               (low variance)
//   <x,l> - l_i <= d*gamma - gamma/x_i  for all i            (strengthened form)
// and that the strengthened form numerically implies the first two.
struct LowRegretLowVarianceReport {
  double estimated_regret = 0.0;
  InequalityCheck low_regret;
  InequalityCheck low_variance;
  InequalityCheck estimated_regret_bound;
  bool implication_verified = true;
};

LowRegretLowVarianceReport check_low_regret_low_variance(const Strategy& x,
                                                         const std::vector<double>& loss_estimate,
                                                         double gamma, double slack_tol = 1e-8);

// Game analogue for a pair produced by solve_logbarrier_saddle:
//   1/x_i + 1/y_j <= 2d + gap_hat(e_i, e_j)/gamma  for all (i, j),
// with gap_hat evaluated on the estimate. Diagnostic only; the bound speaks
// about the estimated game, not the true one.
struct GameLowVarianceReport {
  InequalityCheck inverse_mass_bound;
  double estimated_gap = 0.0;  // gap_hat of the pair itself
  std::string note;
};

GameLowVarianceReport check_game_low_variance(const StrategyPair& pair,
                                              const EstimatedGame& estimate, double gamma,
                                              double slack_tol = 1e-8);

}  // namespace pmolb
