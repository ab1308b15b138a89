#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmolb/mat.hpp"
#include "pmolb/rng.hpp"

namespace pmolb {

inline constexpr double kStrategySumTol = 1e-12;

// Two-player zero-sum game. Entries are the row player's expected loss and
// the column player's expected reward, validated into [-1, 1] on
// construction (out-of-range inputs are rejected, never clipped).
class GameMatrix {
 public:
  explicit GameMatrix(Mat entries, bool skew_symmetric = false);

  int rows() const { return entries_.rows(); }
  int cols() const { return entries_.cols(); }
  double at(int i, int j) const { return entries_(i, j); }
  const Mat& entries() const { return entries_; }
  bool skew_symmetric() const { return skew_; }

  // Exact test: square and entries(i,j) == -entries(j,i) for all i, j.
  static bool is_skew(const Mat& entries);

 private:
  Mat entries_;
  bool skew_ = false;
};

// Mixed strategy on the simplex. Construction rejects negative weights and
// sums farther than 1e-12 from 1, then renormalizes.
class Strategy {
 public:
  explicit Strategy(std::vector<double> weights);
  static Strategy uniform(int d);
  static Strategy point_mass(int index, int d);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  bool strictly_positive() const;

  // Running sums with the last entry forced to exactly 1.
  std::vector<double> cumulative() const;

 private:
  std::vector<double> w_;
};

struct StrategyPair {
  Strategy row;
  Strategy col;
};

// max_j x'Ae_j - min_i e_i'Ay, never negative; zero iff (x, y) is a Nash
// equilibrium. Ties in the max/min scans resolve to the lowest index.
double duality_gap(const Mat& a, const std::vector<double>& x, const std::vector<double>& y);
double duality_gap(const GameMatrix& game, const StrategyPair& pair);

// <x, loss> - min_i loss_i.
double instantaneous_regret(const std::vector<double>& loss, const Strategy& x);

// Inverse-CDF sample from x; consumes one draw. Ties at a cumulative
// boundary go to the lower index.
int index_from_uniform(const std::vector<double>& cumulative, double u);
int sample_action(const Strategy& x, SplitMix64& rng);

using GameParams = std::map<std::string, double>;

// Fixture catalog. kind is one of: uniform_random, skew_symmetric_random,
// psne_diagonal, epsilon_example, rock_paper_scissors, matching_pennies,
// from_file. Rectangular shapes via params["cols"]; epsilon_example takes
// params["epsilon"] in (0,1); psne_diagonal takes params["margin"].
GameMatrix make_game(const std::string& kind, int d, const GameParams& params, SplitMix64& rng,
                     const std::string& path = {});

// Plain CSV of reals, one row per line, no header. Rejects non-rectangular
// input and entries outside [-1, 1], naming the offending cell.
GameMatrix game_from_csv(const std::string& path);

}  // namespace pmolb
