#include "pmolb/barrier_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace pmolb {

IgwSolution solve_igw_detail(const std::vector<double>& loss_estimate, double gamma, double tol) {
  const int d = static_cast<int>(loss_estimate.size());
  if (d < 1) throw Error("solve_igw: empty loss vector");
  if (!(gamma > 0.0)) throw Error("solve_igw: gamma must be positive");
  if (!(tol > 0.0)) throw Error("solve_igw: tol must be positive");
  for (double l : loss_estimate)
    if (!std::isfinite(l)) throw Error("solve_igw: non-finite loss entry");

  const double minl = *std::min_element(loss_estimate.begin(), loss_estimate.end());
  double lo = gamma - minl;           // sum >= 1 here
  double hi = gamma * d - minl;       // sum <= 1 here
  auto gsum = [&](double lam) {
    double s = 0.0;
    for (double l : loss_estimate) s += gamma / (l + lam);
    return s;
  };

  const double target = std::min(tol, 1e-14);
  double lam = d == 1 ? lo : 0.5 * (lo + hi);
  double gv = gsum(lam);
  int it = 0;
  while (it < 200 && std::abs(gv - 1.0) > target) {
    ++it;
    if (gv > 1.0) lo = lam; else hi = lam;
    if (!(hi - lo > std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lam)))) break;
    double gp = 0.0;
    for (double l : loss_estimate) gp -= gamma / ((l + lam) * (l + lam));
    const double newton = lam - (gv - 1.0) / gp;
    lam = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    gv = gsum(lam);
  }
  if (std::abs(gv - 1.0) > tol)
    throw Error("solve_igw: root find stalled with |sum x - 1| = " + std::to_string(gv - 1.0));

  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) w[i] = gamma / (loss_estimate[i] + lam);
  IgwSolution out{Strategy(std::move(w)), lam, std::abs(gv - 1.0), it};
  return out;
}

Strategy solve_igw(const std::vector<double>& loss_estimate, double gamma, double tol) {
  return solve_igw_detail(loss_estimate, gamma, tol).x;
}

namespace {

struct CoreResult {
  std::vector<double> x, y;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

// Residual of the saddle first-order conditions against the fitted
// multipliers nu_x = x'Ay - g*d1 and nu_y = x'Ay + g*d2.
double fitted_residual(const Mat& a, const std::vector<double>& x, const std::vector<double>& y,
                       double g, std::vector<double>& ay, std::vector<double>& atx) {
  const int d1 = a.rows(), d2 = a.cols();
  std::fill(ay.begin(), ay.end(), 0.0);
  std::fill(atx.begin(), atx.end(), 0.0);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      ay[i] += a(i, j) * y[j];
      atx[j] += a(i, j) * x[i];
    }
  double v = 0.0, sx = 0.0, sy = 0.0;
  for (int i = 0; i < d1; ++i) { v += x[i] * ay[i]; sx += x[i]; }
  for (int j = 0; j < d2; ++j) sy += y[j];
  const double nux = v - g * d1;
  const double nuy = v + g * d2;
  double res = 0.0;
  for (int i = 0; i < d1; ++i) res = std::max(res, std::abs(x[i] * (ay[i] - nux) - g));
  for (int j = 0; j < d2; ++j) res = std::max(res, std::abs(y[j] * (nuy - atx[j]) - g));
  res /= g;
  return std::max({res, std::abs(sx - 1.0), std::abs(sy - 1.0)});
}

// One damped Newton solve at fixed gamma. Mutates (x, y) toward the saddle
// and returns the best fitted residual seen.
double newton_stage(const Mat& a, double g, double tol, std::vector<double>& x,
                    std::vector<double>& y, int& iteration_budget) {
  const int d1 = a.rows(), d2 = a.cols();
  const int n = d1 + d2 + 2;
  std::vector<double> ay(d1), atx(d2);
  std::vector<double> bx = x, by = y;

  auto eval_F = [&](const std::vector<double>& xv, const std::vector<double>& yv, double mx,
                    double my, Eigen::VectorXd& F) {
    std::fill(ay.begin(), ay.end(), 0.0);
    std::fill(atx.begin(), atx.end(), 0.0);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) {
        ay[i] += a(i, j) * yv[j];
        atx[j] += a(i, j) * xv[i];
      }
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < d1; ++i) { F(i) = ay[i] - g / xv[i] - mx; sx += xv[i]; }
    for (int j = 0; j < d2; ++j) { F(d1 + j) = atx[j] + g / yv[j] - my; sy += yv[j]; }
    F(d1 + d2) = sx - 1.0;
    F(d1 + d2 + 1) = sy - 1.0;
  };

  // Fitted multipliers are exact at the solution, a good initial guess.
  double v = 0.0;
  {
    std::vector<double> tmp(d1, 0.0);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) tmp[i] += a(i, j) * y[j];
    for (int i = 0; i < d1; ++i) v += x[i] * tmp[i];
  }
  double mx = v - g * d1;
  double my = v + g * d2;

  const double floor_x = 0.5 * g / (2.0 + g * d1);
  const double floor_y = 0.5 * g / (2.0 + g * d2);

  Eigen::VectorXd F(n), Ft(n), dz(n);
  Eigen::MatrixXd J(n, n);
  double best_res = fitted_residual(a, x, y, g, ay, atx);
  int stall = 0;

  // Iterate to the numeric floor, not just the requested tolerance;
  // success is still judged against tol by the caller.
  const double target = std::min(tol, 1e-13);

  for (int it = 0; it < 100 && iteration_budget > 0; ++it, --iteration_budget) {
    const double res = fitted_residual(a, x, y, g, ay, atx);
    if (res < best_res) { best_res = res; bx = x; by = y; stall = 0; } else { ++stall; }
    if (best_res <= target || stall >= 8) break;

    eval_F(x, y, mx, my, F);
    J.setZero();
    for (int i = 0; i < d1; ++i) {
      J(i, i) = g / (x[i] * x[i]);
      for (int j = 0; j < d2; ++j) J(i, d1 + j) = a(i, j);
      J(i, d1 + d2) = -1.0;
      J(d1 + d2, i) = 1.0;
    }
    for (int j = 0; j < d2; ++j) {
      J(d1 + j, d1 + j) = -g / (y[j] * y[j]);
      for (int i = 0; i < d1; ++i) J(d1 + j, i) = a(i, j);
      J(d1 + j, d1 + d2 + 1) = -1.0;
      J(d1 + d2 + 1, d1 + j) = 1.0;
    }
    dz = Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(-F);
    if (!dz.allFinite()) break;

    double alpha = 1.0;
    for (int i = 0; i < d1; ++i)
      if (dz(i) < 0.0) alpha = std::min(alpha, -0.995 * x[i] / dz(i));
    for (int j = 0; j < d2; ++j)
      if (dz(d1 + j) < 0.0) alpha = std::min(alpha, -0.995 * y[j] / dz(d1 + j));

    const double merit = F.squaredNorm();
    std::vector<double> xt(d1), yt(d2);
    bool accepted = false;
    while (alpha > 1e-14) {
      for (int i = 0; i < d1; ++i) xt[i] = std::max(x[i] + alpha * dz(i), floor_x);
      for (int j = 0; j < d2; ++j) yt[j] = std::max(y[j] + alpha * dz(d1 + j), floor_y);
      const double mxt = mx + alpha * dz(d1 + d2);
      const double myt = my + alpha * dz(d1 + d2 + 1);
      eval_F(xt, yt, mxt, myt, Ft);
      if (Ft.squaredNorm() <= merit * (1.0 - 1e-4 * alpha)) {
        x = xt; y = yt; mx = mxt; my = myt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }

  x = bx;
  y = by;
  return best_res;
}

CoreResult solve_core(const Mat& a, double gamma, double tol, const std::vector<double>* x0,
                      const std::vector<double>* y0) {
  const int d1 = a.rows(), d2 = a.cols();
  CoreResult r;
  int budget = 10000;

  if (x0 && y0) {
    r.x = *x0;
    r.y = *y0;
    r.residual = newton_stage(a, gamma, tol, r.x, r.y, budget);
    r.iterations = 10000 - budget;
    if (r.residual <= tol) {
      r.converged = true;
      return r;
    }
  }

  // Cold start: continue geometrically in gamma from the payoff scale, where
  // the saddle is close to uniform.
  r.x.assign(d1, 1.0 / d1);
  r.y.assign(d2, 1.0 / d2);
  double g_run = std::max(gamma, 2.0 * max_abs(a) + 1.0);
  while (budget > 0) {
    const bool last = g_run <= gamma;
    const double stage_tol = last ? tol : std::max(tol, 1e-10);
    r.residual = newton_stage(a, g_run, stage_tol, r.x, r.y, budget);
    if (last) break;
    g_run = std::max(gamma, g_run / 8.0);
  }
  r.iterations = 10000 - budget;
  r.converged = r.residual <= tol;
  return r;
}

SaddleSolution finish_solution(const CoreResult& core) {
  // Exact renormalization so downstream Strategy validation always holds.
  std::vector<double> x = core.x, y = core.y;
  double sx = 0.0, sy = 0.0;
  for (double v : x) sx += v;
  for (double v : y) sy += v;
  for (double& v : x) v /= sx;
  for (double& v : y) v /= sy;
  return SaddleSolution{StrategyPair{Strategy(std::move(x)), Strategy(std::move(y))},
                        core.residual, core.iterations};
}

void check_saddle_args(const RegularizedGame& game, double tol) {
  if (!(game.gamma > 0.0)) throw Error("solve_logbarrier_saddle: gamma must be positive");
  if (!(tol > 0.0)) throw Error("solve_logbarrier_saddle: tol must be positive");
  if (game.estimate.entries.rows() < 1 || game.estimate.entries.cols() < 1)
    throw Error("solve_logbarrier_saddle: empty estimate");
}

}  // namespace

SaddleSolution solve_logbarrier_saddle(const RegularizedGame& game, double tol) {
  check_saddle_args(game, tol);
  CoreResult core = solve_core(game.estimate.entries, game.gamma, tol, nullptr, nullptr);
  if (!core.converged)
    throw Error("solve_logbarrier_saddle: iteration cap exceeded, residual = " +
                std::to_string(core.residual));
  return finish_solution(core);
}

SaddleSolution solve_logbarrier_saddle(const RegularizedGame& game, double tol,
                                       const StrategyPair& warm_start) {
  check_saddle_args(game, tol);
  if (warm_start.row.size() != game.estimate.entries.rows() ||
      warm_start.col.size() != game.estimate.entries.cols())
    throw Error("solve_logbarrier_saddle: warm start dimensions do not match estimate");
  const std::vector<double>& x0 = warm_start.row.weights();
  const std::vector<double>& y0 = warm_start.col.weights();
  CoreResult core = solve_core(game.estimate.entries, game.gamma, tol, &x0, &y0);
  if (!core.converged)
    throw Error("solve_logbarrier_saddle: iteration cap exceeded, residual = " +
                std::to_string(core.residual));
  return finish_solution(core);
}

MatrixGameSolution solve_matrix_game(const Mat& a, double tol) {
  if (!(tol > 0.0)) throw Error("solve_matrix_game: tol must be positive");
  if (a.rows() < 1 || a.cols() < 1) throw Error("solve_matrix_game: empty matrix");
  for (double v : a.data())
    if (!std::isfinite(v)) throw Error("solve_matrix_game: non-finite entry");

  std::vector<double> x, y;
  int total = 0;
  for (int k = 0; k <= 80; ++k) {
    const double g = std::exp2(static_cast<double>(-k));
    // Best effort at each path point; termination is on the true gap. The
    // KKT residual at tiny gamma bottoms out near the float noise floor.
    CoreResult core = k == 0 ? solve_core(a, g, 1e-12, nullptr, nullptr)
                             : solve_core(a, g, 1e-12, &x, &y);
    x = core.x;
    y = core.y;
    total += core.iterations;
    const double gap = duality_gap(a, x, y);
    if (gap <= tol) {
      double v = 0.0;
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) v += x[i] * a(i, j) * y[j];
      double sx = 0.0, sy = 0.0;
      for (double w : x) sx += w;
      for (double w : y) sy += w;
      for (double& w : x) w /= sx;
      for (double& w : y) w /= sy;
      return MatrixGameSolution{StrategyPair{Strategy(std::move(x)), Strategy(std::move(y))}, v,
                                gap, g, total};
    }
  }
  throw Error("solve_matrix_game: gap tolerance " + std::to_string(tol) +
              " not reached on the gamma path");
}

}  // namespace pmolb
