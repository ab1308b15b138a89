#pragma once

#include <cstdint>
#include <string>

#include "pmolb/game.hpp"
#include "pmolb/mat.hpp"
#include "pmolb/rng.hpp"

namespace pmolb {

// Doubling epochs: epoch s covers rounds 2^{s-1} .. 2^s - 1.
struct EpochSchedule {
  static int epoch_of_round(std::uint64_t t);
  static std::uint64_t first_round(int s) { return std::uint64_t{1} << (s - 1); }
  static std::uint64_t last_round(int s) { return (std::uint64_t{1} << s) - 1; }
  static std::uint64_t length(int s) { return std::uint64_t{1} << (s - 1); }
};

enum class NoiseKind { BernoulliPm1, ClippedGaussian, Deterministic };

NoiseKind parse_noise(const std::string& name);
std::string noise_name(NoiseKind kind);

// Reward channel: every draw lies in [-1, 1] and has conditional mean equal
// to the queried matrix entry. clipped_gaussian adds symmetric truncated
// Gaussian noise of half-width min(sigma, 1 - |mean|), which keeps the mean
// exact (resampling a clipped Gaussian would not).
struct FeedbackModel {
  NoiseKind kind = NoiseKind::BernoulliPm1;
  double sigma = 0.25;

  double draw(double mean, double u) const;  // u uniform on (0, 1]
};

struct PairCounters {
  Grid<std::int64_t> counts;
  Mat reward_sums;

  PairCounters(int rows, int cols) : counts(rows, cols), reward_sums(rows, cols) {}
  std::int64_t total() const;
};

struct EstimatedGame {
  Mat entries;                  // empirical means; exactly 0 where unsampled
  Grid<std::uint8_t> sampled;

  static EstimatedGame zeros(int rows, int cols) {
    return EstimatedGame{Mat(rows, cols), Grid<std::uint8_t>(rows, cols)};
  }
};

// Plays `length` rounds of the fixed pair (row, col) against the reward
// channel. Each round consumes exactly three stream draws (row action,
// column action, reward) at fixed positions, so the OpenMP kernel and the
// serial reference see identical per-round data; reward sums are reduced
// over fixed-size chunks in chunk order, making the result independent of
// the thread count. The caller's stream is advanced by 3*length either way.
PairCounters run_epoch(const Strategy& row, const Strategy& col, const GameMatrix& game,
                       const FeedbackModel& model, std::uint64_t length, SplitMix64& rng);

// Naive one-round-at-a-time reference, kept for tests and benchmarks.
PairCounters run_epoch_serial(const Strategy& row, const Strategy& col, const GameMatrix& game,
                              const FeedbackModel& model, std::uint64_t length, SplitMix64& rng);

// Empirical mean per cell; unsampled cells are exactly 0.
EstimatedGame estimate_game(const PairCounters& counters);

// sqrt(16 log(8 d^2 s^2 / delta) / 2^{s-2}), or with d in place of d^2 for
// the single-player variant. Natural log; defined for s >= 2.
double beta_schedule(int s, int d, double delta, bool single_player = false);

struct ConcentrationReport {
  bool holds = true;
  double beta = 0.0;
  int worst_row = 0;   // cell with the least slack
  int worst_col = 0;
  double worst_slack = 0.0;  // bound minus |error|; negative when violated
};

// Per-cell event |estimate - truth| <= beta_s / sqrt(x_{s-1,i} y_{s-1,j})
// where (x_{s-1}, y_{s-1}) is the pair played in the previous epoch.
ConcentrationReport check_concentration_event(const GameMatrix& game, const EstimatedGame& estimate,
                                              const StrategyPair& prev_pair, int s, int d,
                                              double delta, bool single_player = false);

}  // namespace pmolb
