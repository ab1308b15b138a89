#include "pmolb/game.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pmolb {

namespace {

std::string shape_str(int r, int c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

GameMatrix::GameMatrix(Mat entries, bool skew_symmetric)
    : entries_(std::move(entries)), skew_(skew_symmetric) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw Error("GameMatrix: dimensions must be at least 1x1, got " +
                shape_str(entries_.rows(), entries_.cols()));
  for (int i = 0; i < entries_.rows(); ++i)
    for (int j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!(v >= -1.0 && v <= 1.0))
        throw Error("GameMatrix: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    ") = " + std::to_string(v) + " outside [-1, 1]");
    }
  if (skew_ && !is_skew(entries_))
    throw Error("GameMatrix: flagged skew-symmetric but entries are not");
}

bool GameMatrix::is_skew(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j <= i; ++j)
      if (m(i, j) != -m(j, i)) return false;
  return true;
}

Strategy::Strategy(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw Error("Strategy: empty weight vector");
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0)) throw Error("Strategy: negative or NaN weight " + std::to_string(w));
    sum += w;
  }
  if (std::abs(sum - 1.0) > kStrategySumTol)
    throw Error("Strategy: weights sum to " + std::to_string(sum) + ", more than 1e-12 from 1");
  for (double& w : w_) w /= sum;
}

Strategy Strategy::uniform(int d) {
  if (d < 1) throw Error("Strategy::uniform: d must be positive");
  return Strategy(std::vector<double>(d, 1.0 / d));
}

Strategy Strategy::point_mass(int index, int d) {
  if (d < 1 || index < 0 || index >= d) throw Error("Strategy::point_mass: index out of range");
  std::vector<double> w(d, 0.0);
  w[index] = 1.0;
  return Strategy(std::move(w));
}

bool Strategy::strictly_positive() const {
  return std::all_of(w_.begin(), w_.end(), [](double w) { return w > 0.0; });
}

std::vector<double> Strategy::cumulative() const {
  std::vector<double> cum(w_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    run += w_[i];
    cum[i] = run;
  }
  cum.back() = 1.0;
  return cum;
}

double duality_gap(const Mat& a, const std::vector<double>& x, const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != a.rows() || static_cast<int>(y.size()) != a.cols())
    throw Error("duality_gap: pair dimensions " + std::to_string(x.size()) + "x" +
                std::to_string(y.size()) + " do not match game " + std::to_string(a.rows()) +
                "x" + std::to_string(a.cols()));
  double best_col = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < a.cols(); ++j) {
    double u = 0.0;
    for (int i = 0; i < a.rows(); ++i) u += x[i] * a(i, j);
    if (u > best_col) best_col = u;
  }
  double best_row = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.rows(); ++i) {
    double v = 0.0;
    for (int j = 0; j < a.cols(); ++j) v += a(i, j) * y[j];
    if (v < best_row) best_row = v;
  }
  return std::max(best_col - best_row, 0.0);
}

double duality_gap(const GameMatrix& game, const StrategyPair& pair) {
  return duality_gap(game.entries(), pair.row.weights(), pair.col.weights());
}

double instantaneous_regret(const std::vector<double>& loss, const Strategy& x) {
  if (static_cast<int>(loss.size()) != x.size())
    throw Error("instantaneous_regret: loss length " + std::to_string(loss.size()) +
                " does not match strategy length " + std::to_string(x.size()));
  double dot = 0.0;
  double lo = loss[0];
  for (int i = 0; i < x.size(); ++i) {
    dot += x[i] * loss[i];
    lo = std::min(lo, loss[i]);
  }
  return std::max(dot - lo, 0.0);
}

int index_from_uniform(const std::vector<double>& cumulative, double u) {
  for (std::size_t i = 0; i < cumulative.size(); ++i)
    if (cumulative[i] >= u) return static_cast<int>(i);
  return static_cast<int>(cumulative.size()) - 1;
}

int sample_action(const Strategy& x, SplitMix64& rng) {
  return index_from_uniform(x.cumulative(), rng.next_open01());
}

namespace {

Mat random_uniform_mat(int rows, int cols, SplitMix64& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.next_open01() - 1.0;
  return m;
}

// (i, j) is a pure equilibrium iff A(i,j) is the minimum of column j and the
// maximum of row i.
std::vector<std::pair<int, int>> pure_equilibria(const Mat& a) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      bool saddle = true;
      for (int k = 0; k < a.rows() && saddle; ++k)
        if (a(k, j) < a(i, j)) saddle = false;
      for (int l = 0; l < a.cols() && saddle; ++l)
        if (a(i, l) > a(i, j)) saddle = false;
      if (saddle) out.emplace_back(i, j);
    }
  return out;
}

GameMatrix make_psne_diagonal(int rows, int cols, double margin, SplitMix64& rng) {
  if (!(margin > 0.0 && margin < 1.0)) throw Error("make_game: margin must be in (0, 1)");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat m(rows, cols);
    m(0, 0) = 0.0;
    for (int i = 1; i < rows; ++i) m(i, 0) = margin + rng.next_open01() * (1.0 - margin);
    for (int j = 1; j < cols; ++j) m(0, j) = -margin - rng.next_open01() * (1.0 - margin);
    for (int i = 1; i < rows; ++i)
      for (int j = 1; j < cols; ++j) m(i, j) = 2.0 * rng.next_open01() - 1.0;
    auto eq = pure_equilibria(m);
    if (eq.size() == 1 && eq[0] == std::make_pair(0, 0)) return GameMatrix(std::move(m));
  }
  throw Error("make_game: psne_diagonal generation failed to produce a unique pure equilibrium");
}

}  // namespace

GameMatrix make_game(const std::string& kind, int d, const GameParams& params, SplitMix64& rng,
                     const std::string& path) {
  auto param = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const int cols = static_cast<int>(param("cols", d));

  if (kind == "uniform_random") {
    return GameMatrix(random_uniform_mat(d, cols, rng));
  }
  if (kind == "skew_symmetric_random") {
    if (cols != d) throw Error("make_game: skew_symmetric_random requires a square shape");
    Mat b = random_uniform_mat(d, d, rng);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = 0.5 * (b(i, j) - b(j, i));
    return GameMatrix(std::move(m), true);
  }
  if (kind == "psne_diagonal") {
    return make_psne_diagonal(d, cols, param("margin", 0.2), rng);
  }
  if (kind == "epsilon_example") {
    const double eps = param("epsilon", 0.1);
    if (!(eps > 0.0 && eps < 1.0)) throw Error("make_game: epsilon must be in (0, 1)");
    Mat m(3, 3);
    m(0, 0) = 0;  m(0, 1) = -1; m(0, 2) = 0;
    m(1, 0) = 1;  m(1, 1) = 0;  m(1, 2) = -eps;
    m(2, 0) = 0;  m(2, 1) = eps; m(2, 2) = 0;
    return GameMatrix(std::move(m), true);
  }
  if (kind == "rock_paper_scissors") {
    Mat m(3, 3);
    m(0, 0) = 0;  m(0, 1) = -1; m(0, 2) = 1;
    m(1, 0) = 1;  m(1, 1) = 0;  m(1, 2) = -1;
    m(2, 0) = -1; m(2, 1) = 1;  m(2, 2) = 0;
    return GameMatrix(std::move(m), true);
  }
  if (kind == "matching_pennies") {
    Mat m(2, 2);
    m(0, 0) = 1;  m(0, 1) = -1;
    m(1, 0) = -1; m(1, 1) = 1;
    return GameMatrix(std::move(m));
  }
  if (kind == "from_file") {
    if (path.empty()) throw Error("make_game: from_file requires a path");
    return game_from_csv(path);
  }
  throw Error("make_game: unknown kind '" + kind + "'");
}

GameMatrix game_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("game_from_csv: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    int col = 0;
    while (std::getline(ss, tok, ',')) {
      ++col;
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos != tok.size() || tok.empty())
        throw Error("game_from_csv: line " + std::to_string(lineno) + ", column " +
                    std::to_string(col) + ": cannot parse '" + tok + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error("game_from_csv: line " + std::to_string(lineno) + ": expected " +
                  std::to_string(rows.front().size()) + " columns, got " +
                  std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("game_from_csv: '" + path + "' holds no rows");
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double v = rows[i][j];
      if (!(v >= -1.0 && v <= 1.0))
        throw Error("game_from_csv: entry (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ") = " + std::to_string(v) + " outside [-1, 1]");
      m(i, j) = v;
    }
  const bool skew = GameMatrix::is_skew(m);
  return GameMatrix(std::move(m), skew);
}

}  // namespace pmolb
