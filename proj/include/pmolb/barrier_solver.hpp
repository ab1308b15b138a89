#pragma once

#include <vector>

#include "pmolb/environment.hpp"
#include "pmolb/game.hpp"

namespace pmolb {

struct RegularizedGame {
  EstimatedGame estimate;
  double gamma = 1.0;  // > 0
};

struct IgwSolution {
  Strategy x;
  double multiplier = 0.0;  // lambda with x_i = gamma / (loss_i + lambda)
  double residual = 0.0;    // |sum_i x_i - 1| at the accepted root
  int iterations = 0;
};

// Unique minimizer of <x, loss> + gamma * sum_i log(1/x_i) on the simplex.
// Closed form x_i = gamma / (loss_i + lambda) with lambda the root of the
// strictly decreasing map lambda -> sum_i gamma / (loss_i + lambda) on the
// a-priori bracket [gamma - min loss, gamma*d - min loss], found by Newton
// steps safeguarded with bisection.
IgwSolution solve_igw_detail(const std::vector<double>& loss_estimate, double gamma, double tol);
Strategy solve_igw(const std::vector<double>& loss_estimate, double gamma, double tol = 1e-12);

struct SaddleSolution {
  StrategyPair pair;
  double kkt_residual = 0.0;
  int iterations = 0;
};

// Unique saddle point of x'Ay + gamma*sum log(1/x_i) - gamma*sum log(1/y_j)
// over the product of simplices. Damped Newton on the first-order system
// (fraction-to-boundary step clipping plus backtracking on the residual
// norm), with geometric continuation in gamma from the payoff scale when
// cold-starting. The reported residual uses the fitted multipliers
// nu_x = x'Ay - gamma*d1 and nu_y = x'Ay + gamma*d2:
//   max_i |x_i((Ay)_i - nu_x) - gamma| / gamma  and the column analogue.
// Throws if the residual cannot be brought below tol.
SaddleSolution solve_logbarrier_saddle(const RegularizedGame& game, double tol);
SaddleSolution solve_logbarrier_saddle(const RegularizedGame& game, double tol,
                                       const StrategyPair& warm_start);

struct MatrixGameSolution {
  StrategyPair pair;
  double value = 0.0;        // x'Ay at the returned pair
  double duality_gap = 0.0;  // unregularized gap of the returned pair
  double gamma_final = 0.0;  // last barrier weight on the path
  int iterations = 0;
};

// Minimax solution of a plain matrix game via the regularization path:
// barrier saddles at gamma_k = 2^-k, warm-started, until the unregularized
// duality gap of the pair is at most tol. The path limit selects the
// analytic center of the equilibrium set.
MatrixGameSolution solve_matrix_game(const Mat& a, double tol);

}  // namespace pmolb
