#include "pmolb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmolb {

namespace {

std::vector<double> gaps_to_min(const std::vector<double>& v) {
  const double lo = *std::min_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lo;
  return out;
}

}  // namespace

RegretEstimates regret_estimates(const std::vector<double>& loss_estimate,
                                 const std::vector<double>& true_loss) {
  if (loss_estimate.size() != true_loss.size() || loss_estimate.empty())
    throw Error("regret_estimates: mismatched or empty loss vectors");
  return RegretEstimates{gaps_to_min(loss_estimate), gaps_to_min(true_loss)};
}

LowRegretLowVarianceReport check_low_regret_low_variance(const Strategy& x,
                                                         const std::vector<double>& loss_estimate,
                                                         double gamma, double slack_tol) {
  const int d = x.size();
  if (static_cast<int>(loss_estimate.size()) != d)
    throw Error("check_low_regret_low_variance: length mismatch");
  if (!(gamma > 0.0)) throw Error("check_low_regret_low_variance: gamma must be positive");

  double dot = 0.0;
  for (int i = 0; i < d; ++i) dot += x[i] * loss_estimate[i];
  const auto reg_hat = gaps_to_min(loss_estimate);
  const double lo = *std::min_element(loss_estimate.begin(), loss_estimate.end());

  LowRegretLowVarianceReport rep;
  rep.estimated_regret = std::max(dot - lo, 0.0);

  rep.low_regret.worst_slack = d * gamma - rep.estimated_regret;
  rep.low_regret.ok = rep.low_regret.worst_slack >= -slack_tol;

  rep.low_variance.worst_slack = std::numeric_limits<double>::infinity();
  rep.estimated_regret_bound.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    const double slack_var = d + reg_hat[i] / gamma - 1.0 / x[i];
    if (slack_var < rep.low_variance.worst_slack) {
      rep.low_variance.worst_slack = slack_var;
      rep.low_variance.worst_index = i;
    }
    const double slack_eq3 = (d * gamma - gamma / x[i]) - (dot - loss_estimate[i]);
    if (slack_eq3 < rep.estimated_regret_bound.worst_slack) {
      rep.estimated_regret_bound.worst_slack = slack_eq3;
      rep.estimated_regret_bound.worst_index = i;
    }
  }
  rep.low_variance.ok = rep.low_variance.worst_slack >= -slack_tol;
  rep.estimated_regret_bound.ok = rep.estimated_regret_bound.worst_slack >= -slack_tol;

  // The strengthened bound implies the other two: dropping its negative term
  // gives the regret bound, rearranging it and bounding -<x,l> by -min l
  // gives the variance bound. Walk both chains numerically.
  rep.implication_verified = true;
  const double tol_scaled = slack_tol * (1.0 + 1.0 / gamma);
  for (int i = 0; i < d; ++i) {
    const double eq3_rhs = d * gamma - gamma / x[i];
    if (dot - loss_estimate[i] > eq3_rhs + slack_tol) {
      rep.implication_verified = false;  // premise itself broken
      continue;
    }
    if (eq3_rhs > d * gamma + slack_tol) rep.implication_verified = false;
    const double via_mix = d + (loss_estimate[i] - dot) / gamma;
    const double via_best = d + reg_hat[i] / gamma;
    if (1.0 / x[i] > via_mix + tol_scaled) rep.implication_verified = false;
    if (via_mix > via_best + tol_scaled) rep.implication_verified = false;
  }
  return rep;
}

GameLowVarianceReport check_game_low_variance(const StrategyPair& pair,
                                              const EstimatedGame& estimate, double gamma,
                                              double slack_tol) {
  const int d1 = estimate.entries.rows();
  const int d2 = estimate.entries.cols();
  if (pair.row.size() != d1 || pair.col.size() != d2)
    throw Error("check_game_low_variance: pair dimensions do not match estimate");
  if (!(gamma > 0.0)) throw Error("check_game_low_variance: gamma must be positive");
  const int d = std::max(d1, d2);

  // gap_hat(e_i, e_j) = max_l A_hat(i, l) - min_k A_hat(k, j)
  std::vector<double> row_max(d1, -std::numeric_limits<double>::infinity());
  std::vector<double> col_min(d2, std::numeric_limits<double>::infinity());
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      row_max[i] = std::max(row_max[i], estimate.entries(i, j));
      col_min[j] = std::min(col_min[j], estimate.entries(i, j));
    }

  GameLowVarianceReport rep;
  rep.inverse_mass_bound.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      const double gap_hat = row_max[i] - col_min[j];
      const double slack = 2.0 * d + gap_hat / gamma - (1.0 / pair.row[i] + 1.0 / pair.col[j]);
      if (slack < rep.inverse_mass_bound.worst_slack) {
        rep.inverse_mass_bound.worst_slack = slack;
        rep.inverse_mass_bound.worst_index = i * d2 + j;
      }
    }
  rep.inverse_mass_bound.ok = rep.inverse_mass_bound.worst_slack >= -slack_tol / std::min(1.0, gamma);
  rep.estimated_gap =
      duality_gap(estimate.entries, pair.row.weights(), pair.col.weights());
  rep.note = "diagnostic only: the bound constrains the estimated game, not the true one";
  return rep;
}

}  // namespace pmolb
