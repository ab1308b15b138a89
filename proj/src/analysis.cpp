#include "pmolb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmolb {

namespace {

double epoch_midpoint(const EpochRecord& r) {
  return 0.5 * (static_cast<double>(r.t_start) + static_cast<double>(r.t_end));
}

}  // namespace

SlopeFit fit_slope(const std::vector<GapPoint>& epoch_points, std::uint64_t t_min) {
  std::vector<double> lx, ly;
  int excluded = 0;
  for (const auto& p : epoch_points) {
    if (p.t < static_cast<double>(t_min)) continue;
    if (!(p.gap > 0.0)) {
      ++excluded;
      continue;
    }
    lx.push_back(std::log(p.t));
    ly.push_back(std::log(p.gap));
  }
  const int n = static_cast<int>(lx.size());
  if (n < 2)
    throw Error("fit_slope: need at least 2 usable epochs past t_min (" + std::to_string(n) +
                " usable, " + std::to_string(excluded) + " dropped for non-positive gap)");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error("fit_slope: degenerate abscissa, all epochs share one midpoint");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(syy - sxy * sxy / sxx, 0.0);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.t_min = t_min;
  fit.n_points = n;
  fit.excluded_nonpositive = excluded;
  return fit;
}

SlopeFit fit_slope(const RunTrace& trace, std::uint64_t t_min) {
  std::vector<GapPoint> pts;
  pts.reserve(trace.records.size());
  for (const auto& r : trace.records) pts.push_back({epoch_midpoint(r), r.duality_gap});
  return fit_slope(pts, t_min);
}

AggregateTrace aggregate(const std::vector<RunTrace>& traces, MeanKind mean_kind) {
  if (traces.empty()) throw Error("aggregate: no traces");
  const RunTrace& head = traces.front();
  for (const auto& t : traces) {
    if (t.config_key != head.config_key)
      throw Error("aggregate: mismatched configs: '" + t.config_key + "' vs '" + head.config_key +
                  "'");
    if (t.records.size() != head.records.size())
      throw Error("aggregate: traces differ in epoch count");
  }

  AggregateTrace agg;
  agg.algorithm = head.algorithm;
  agg.config_key = head.config_key;
  for (const auto& t : traces) agg.seeds.push_back(t.seed);

  for (std::size_t e = 0; e < head.records.size(); ++e) {
    AggregateRecord rec;
    rec.epoch = head.records[e].epoch;
    rec.t_start = head.records[e].t_start;
    rec.t_end = head.records[e].t_end;
    rec.min_gap = std::numeric_limits<double>::infinity();
    rec.max_gap = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    bool geometric_ok = true;
    for (const auto& t : traces) {
      const double g = t.records[e].duality_gap;
      rec.per_seed.push_back(g);
      rec.min_gap = std::min(rec.min_gap, g);
      rec.max_gap = std::max(rec.max_gap, g);
      if (mean_kind == MeanKind::Arithmetic) {
        acc += g;
      } else if (g > 0.0) {
        acc += std::log(g);
      } else {
        geometric_ok = false;
      }
    }
    const double n = static_cast<double>(traces.size());
    rec.mean_gap = mean_kind == MeanKind::Arithmetic ? acc / n
                   : geometric_ok                    ? std::exp(acc / n)
                                                     : 0.0;
    agg.records.push_back(std::move(rec));
  }
  return agg;
}

SlopeFit fit_slope(const AggregateTrace& agg, std::uint64_t t_min) {
  std::vector<GapPoint> pts;
  pts.reserve(agg.records.size());
  for (const auto& r : agg.records)
    pts.push_back({0.5 * (static_cast<double>(r.t_start) + static_cast<double>(r.t_end)),
                   r.mean_gap});
  return fit_slope(pts, t_min);
}

LemmaReport lemma_report(const RunTrace& trace, int d, double delta) {
  if (trace.records.empty()) throw Error("lemma_report: trace has no epochs");
  if (trace.algorithm != Algorithm::PmoLb)
    throw Error("lemma_report: requires a pmo_lb trace, got " + algorithm_name(trace.algorithm));
  if (d < 1) throw Error("lemma_report: d must be positive");

  LemmaReport rep;
  rep.d = d;
  rep.delta = delta;
  rep.stability_bound = 16.0 * d;
  for (const auto& r : trace.records) {
    LemmaEpochCheck chk;
    chk.epoch = r.epoch;
    chk.worst_ratio = std::max(r.stability_row, r.stability_col);
    chk.stability_ok = r.epoch == 1 || chk.worst_ratio <= rep.stability_bound;
    chk.concentration_ok = r.concentration_ok;
    chk.solver_residual = r.solver_residual;
    if (r.epoch >= 2) {
      rep.all_stability = rep.all_stability && chk.stability_ok;
      rep.all_concentration = rep.all_concentration && chk.concentration_ok;
      rep.worst_ratio = std::max(rep.worst_ratio, chk.worst_ratio);
      if (!chk.concentration_ok) rep.worst_concentration_epoch = r.epoch;
    }
    rep.epochs.push_back(chk);
  }
  return rep;
}

}  // namespace pmolb
