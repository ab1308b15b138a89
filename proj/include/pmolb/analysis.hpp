#pragma once

#include <cstdint>
#include <vector>

#include "pmolb/learners.hpp"

namespace pmolb {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // of log(gap) against log(t)
  double r_squared = 0.0;
  std::uint64_t t_min = 0;
  int n_points = 0;
  int excluded_nonpositive = 0;  // epochs dropped for gap <= 0
};

struct GapPoint {
  double t = 0.0;  // representative round of the epoch (midpoint)
  double gap = 0.0;
};

// Ordinary least squares of log(gap) on log(t), one point per epoch at its
// midpoint round, restricted to midpoints >= t_min. Epochs with
// non-positive gap are excluded and counted.
SlopeFit fit_slope(const std::vector<GapPoint>& epoch_points, std::uint64_t t_min);
SlopeFit fit_slope(const RunTrace& trace, std::uint64_t t_min);

enum class MeanKind { Arithmetic, Geometric };

struct AggregateRecord {
  int epoch = 0;
  std::uint64_t t_start = 0;
  std::uint64_t t_end = 0;
  double mean_gap = 0.0;
  double min_gap = 0.0;
  double max_gap = 0.0;
  std::vector<double> per_seed;
};

struct AggregateTrace {
  Algorithm algorithm = Algorithm::PmoLb;
  std::string config_key;
  std::vector<std::uint64_t> seeds;
  std::vector<AggregateRecord> records;
};

// Pointwise per-epoch mean/min/max over runs that share everything but the
// seed. Geometric mean available as an alternative aggregator.
AggregateTrace aggregate(const std::vector<RunTrace>& traces,
                         MeanKind mean_kind = MeanKind::Arithmetic);
SlopeFit fit_slope(const AggregateTrace& agg, std::uint64_t t_min);

struct LemmaEpochCheck {
  int epoch = 0;
  bool stability_ok = true;       // both ratio columns <= 16 d
  double worst_ratio = 0.0;
  bool concentration_ok = true;
  double solver_residual = 0.0;
};

struct LemmaReport {
  int d = 0;
  double delta = 0.0;
  double stability_bound = 0.0;  // 16 d
  bool all_stability = true;     // over epochs s >= 2
  bool all_concentration = true;
  double worst_ratio = 0.0;
  double worst_concentration_epoch = 0.0;
  std::vector<LemmaEpochCheck> epochs;
};

// Per-epoch stability and concentration summary of a pmo_lb trace.
LemmaReport lemma_report(const RunTrace& trace, int d, double delta);

}  // namespace pmolb
