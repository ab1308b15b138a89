#include "pmolb/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace pmolb {

int EpochSchedule::epoch_of_round(std::uint64_t t) {
  if (t == 0) throw Error("EpochSchedule: rounds start at 1");
  return std::bit_width(t);  // floor(log2 t) + 1
}

NoiseKind parse_noise(const std::string& name) {
  if (name == "bernoulli_pm1") return NoiseKind::BernoulliPm1;
  if (name == "clipped_gaussian") return NoiseKind::ClippedGaussian;
  if (name == "deterministic") return NoiseKind::Deterministic;
  throw Error("unknown noise kind '" + name + "'");
}

std::string noise_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::BernoulliPm1: return "bernoulli_pm1";
    case NoiseKind::ClippedGaussian: return "clipped_gaussian";
    case NoiseKind::Deterministic: return "deterministic";
  }
  throw Error("invalid noise kind");
}

namespace {

// Inverse standard normal CDF, Acklam's rational approximation polished by
// one Halley step through erfc. Accurate to ~1e-15 away from the endpoints.
double inv_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double FeedbackModel::draw(double mean, double u) const {
  switch (kind) {
    case NoiseKind::Deterministic:
      return mean;
    case NoiseKind::BernoulliPm1:
      return u <= 0.5 * (1.0 + mean) ? 1.0 : -1.0;
    case NoiseKind::ClippedGaussian: {
      const double w = std::min(sigma, 1.0 - std::abs(mean));
      if (w <= 0.0 || sigma <= 0.0) return mean;
      const double hi = normal_cdf(w / sigma);
      const double lo = 1.0 - hi;
      const double z = sigma * inv_normal_cdf(lo + u * (hi - lo));
      return mean + std::clamp(z, -w, w);
    }
  }
  throw Error("invalid noise kind");
}

std::int64_t PairCounters::total() const {
  std::int64_t n = 0;
  for (auto c : counts.data()) n += c;
  return n;
}

namespace {

constexpr std::uint64_t kChunkRounds = 8192;  // fixed so bits never depend on thread count
constexpr std::uint64_t kDrawsPerRound = 3;   // row action, column action, reward

void accumulate_rounds(PairCounters& pc, const std::vector<double>& cumx,
                       const std::vector<double>& cumy, const Mat& a, const FeedbackModel& model,
                       const SplitMix64& rng, std::uint64_t base, std::uint64_t begin,
                       std::uint64_t end) {
  for (std::uint64_t tau = begin; tau < end; ++tau) {
    const std::uint64_t p = base + kDrawsPerRound * tau;
    const int i = index_from_uniform(cumx, rng.open01_at(p));
    const int j = index_from_uniform(cumy, rng.open01_at(p + 1));
    const double r = model.draw(a(i, j), rng.open01_at(p + 2));
    pc.counts(i, j) += 1;
    pc.reward_sums(i, j) += r;
  }
}

void check_epoch_args(const Strategy& row, const Strategy& col, const GameMatrix& game,
                      std::uint64_t length) {
  if (row.size() != game.rows() || col.size() != game.cols())
    throw Error("run_epoch: strategy dimensions " + std::to_string(row.size()) + "x" +
                std::to_string(col.size()) + " do not match game " + std::to_string(game.rows()) +
                "x" + std::to_string(game.cols()));
  if (length < 1) throw Error("run_epoch: length must be at least 1");
}

}  // namespace

PairCounters run_epoch(const Strategy& row, const Strategy& col, const GameMatrix& game,
                       const FeedbackModel& model, std::uint64_t length, SplitMix64& rng) {
  check_epoch_args(row, col, game, length);
  const auto cumx = row.cumulative();
  const auto cumy = col.cumulative();
  const std::uint64_t base = rng.position();
  const std::int64_t nchunks =
      static_cast<std::int64_t>((length + kChunkRounds - 1) / kChunkRounds);

  std::vector<PairCounters> parts;
  parts.reserve(nchunks);
  for (std::int64_t c = 0; c < nchunks; ++c) parts.emplace_back(game.rows(), game.cols());

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkRounds;
    const std::uint64_t end = std::min(length, begin + kChunkRounds);
    accumulate_rounds(parts[c], cumx, cumy, game.entries(), model, rng, base, begin, end);
  }

  PairCounters out(game.rows(), game.cols());
  for (std::int64_t c = 0; c < nchunks; ++c) {
    for (int i = 0; i < out.counts.rows(); ++i)
      for (int j = 0; j < out.counts.cols(); ++j) {
        out.counts(i, j) += parts[c].counts(i, j);
        out.reward_sums(i, j) += parts[c].reward_sums(i, j);
      }
  }
  rng.skip(kDrawsPerRound * length);
  return out;
}

PairCounters run_epoch_serial(const Strategy& row, const Strategy& col, const GameMatrix& game,
                              const FeedbackModel& model, std::uint64_t length, SplitMix64& rng) {
  check_epoch_args(row, col, game, length);
  const auto cumx = row.cumulative();
  const auto cumy = col.cumulative();
  PairCounters out(game.rows(), game.cols());
  accumulate_rounds(out, cumx, cumy, game.entries(), model, rng, rng.position(), 0, length);
  rng.skip(kDrawsPerRound * length);
  return out;
}

EstimatedGame estimate_game(const PairCounters& counters) {
  EstimatedGame est = EstimatedGame::zeros(counters.counts.rows(), counters.counts.cols());
  for (int i = 0; i < counters.counts.rows(); ++i)
    for (int j = 0; j < counters.counts.cols(); ++j) {
      const std::int64_t n = counters.counts(i, j);
      if (n > 0) {
        est.entries(i, j) =
            std::clamp(counters.reward_sums(i, j) / static_cast<double>(n), -1.0, 1.0);
        est.sampled(i, j) = 1;
      }
    }
  return est;
}

double beta_schedule(int s, int d, double delta, bool single_player) {
  if (s < 2) throw Error("beta_schedule: defined only for s >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("beta_schedule: delta must be in (0, 1)");
  if (d < 1) throw Error("beta_schedule: d must be positive");
  const double cells = single_player ? static_cast<double>(d)
                                     : static_cast<double>(d) * static_cast<double>(d);
  const double arg = 8.0 * cells * static_cast<double>(s) * static_cast<double>(s) / delta;
  return std::sqrt(16.0 * std::log(arg) / std::exp2(static_cast<double>(s - 2)));
}

ConcentrationReport check_concentration_event(const GameMatrix& game, const EstimatedGame& estimate,
                                              const StrategyPair& prev_pair, int s, int d,
                                              double delta, bool single_player) {
  if (!game.entries().same_shape(estimate.entries))
    throw Error("check_concentration_event: estimate shape does not match game");
  if (prev_pair.row.size() != game.rows() || prev_pair.col.size() != game.cols())
    throw Error("check_concentration_event: pair dimensions do not match game");
  if (!prev_pair.row.strictly_positive() || !prev_pair.col.strictly_positive())
    throw Error("check_concentration_event: previous pair has a zero weight, bound undefined");

  ConcentrationReport rep;
  rep.beta = beta_schedule(s, d, delta, single_player);
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.rows(); ++i)
    for (int j = 0; j < game.cols(); ++j) {
      const double bound = rep.beta / std::sqrt(prev_pair.row[i] * prev_pair.col[j]);
      const double slack = bound - std::abs(estimate.entries(i, j) - game.at(i, j));
      if (slack < rep.worst_slack) {
        rep.worst_slack = slack;
        rep.worst_row = i;
        rep.worst_col = j;
      }
    }
  rep.holds = rep.worst_slack >= 0.0;
  return rep;
}

}  // namespace pmolb
