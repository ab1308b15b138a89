#include "pmolb/learners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmolb/diagnostics.hpp"

namespace pmolb {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "pmo_lb") return Algorithm::PmoLb;
  if (name == "falcon") return Algorithm::Falcon;
  if (name == "ne_uniform") return Algorithm::NeUniform;
  throw Error("unknown algorithm '" + name + "'");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::PmoLb: return "pmo_lb";
    case Algorithm::Falcon: return "falcon";
    case Algorithm::NeUniform: return "ne_uniform";
  }
  throw Error("invalid algorithm");
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must be in (0, 1)");
}

}  // namespace

double gamma_pmo_lb(int s, int d, double delta) {
  if (s < 1) throw Error("gamma_pmo_lb: s must be at least 1");
  check_delta(delta);
  const double arg = 8.0 * double(d) * double(d) * double(s) * double(s) / delta;
  return 128.0 * d * std::exp2(-0.5 * s) * std::sqrt(std::log(arg));
}

double gamma_falcon(int s, int d, double delta) {
  if (s < 1) throw Error("gamma_falcon: s must be at least 1");
  check_delta(delta);
  const double arg = 8.0 * double(d) * double(s) * double(s) / delta;
  return 40.0 * std::exp2(-0.5 * s) * std::sqrt(std::log(arg));
}

double alpha_ne_uniform(int s, int d) {
  if (s < 1) throw Error("alpha_ne_uniform: s must be at least 1");
  return std::min(1.0, std::sqrt(double(d)) * std::exp2(-0.25 * (s - 1)));
}

namespace {

double stability_ratio(const Strategy& now, const Strategy& before) {
  double worst = 0.0;
  for (int i = 0; i < now.size(); ++i) worst = std::max(worst, now[i] / before[i]);
  return worst;
}

StrategyPair mix_with_uniform(const StrategyPair& pair, double alpha) {
  std::vector<double> x = pair.row.weights();
  std::vector<double> y = pair.col.weights();
  for (double& v : x) v = (1.0 - alpha) * v + alpha / x.size();
  for (double& v : y) v = (1.0 - alpha) * v + alpha / y.size();
  return StrategyPair{Strategy(std::move(x)), Strategy(std::move(y))};
}

std::vector<double> first_column(const Mat& m) {
  std::vector<double> c(m.rows());
  for (int i = 0; i < m.rows(); ++i) c[i] = m(i, 0);
  return c;
}

}  // namespace

LearnerState make_initial_state(const GameMatrix& game, const LearnerOptions& opts) {
  if (opts.total_rounds < 1) throw Error("run_learner: total_rounds must be at least 1");
  check_delta(opts.delta);
  if (!(opts.solver_tol > 0.0)) throw Error("run_learner: solver_tol must be positive");
  if (opts.algorithm == Algorithm::Falcon && game.cols() != 1)
    throw Error("falcon requires a single-column game, got " + std::to_string(game.rows()) +
                "x" + std::to_string(game.cols()));
  return LearnerState{1, EstimatedGame::zeros(game.rows(), game.cols()), std::nullopt,
                      SplitMix64(opts.seed), 0};
}

EpochRecord step_epoch(LearnerState& state, const GameMatrix& game, const GameMatrix& eval_game,
                       const LearnerOptions& opts, StrategyPair* played_out,
                       std::vector<std::string>* notes) {
  const int s = state.epoch;
  const int d = std::max(game.rows(), game.cols());
  const std::uint64_t t_start = EpochSchedule::first_round(s);
  const std::uint64_t t_end = std::min(EpochSchedule::last_round(s), opts.total_rounds);
  if (t_start > opts.total_rounds) throw Error("step_epoch: past the configured horizon");
  const std::uint64_t length = t_end - t_start + 1;

  EpochRecord rec;
  rec.epoch = s;
  rec.t_start = t_start;
  rec.t_end = t_end;

  double param = 0.0;
  std::optional<StrategyPair> pair;
  switch (opts.algorithm) {
    case Algorithm::PmoLb: {
      param = opts.schedule_override ? opts.schedule_override(s) : gamma_pmo_lb(s, d, opts.delta);
      const RegularizedGame reg{state.estimate, param};
      SaddleSolution sol = state.prev_pair
                               ? solve_logbarrier_saddle(reg, opts.solver_tol, *state.prev_pair)
                               : solve_logbarrier_saddle(reg, opts.solver_tol);
      rec.solver_residual = sol.kkt_residual;
      rec.solver_iterations = sol.iterations;
      if (opts.diagnostics && notes) {
        const auto rep = check_game_low_variance(sol.pair, state.estimate, param);
        if (!rep.inverse_mass_bound.ok) {
          std::ostringstream os;
          os << "epoch " << s << ": inverse-mass bound violated, slack "
             << rep.inverse_mass_bound.worst_slack;
          notes->push_back(os.str());
        }
      }
      pair = std::move(sol.pair);
      break;
    }
    case Algorithm::Falcon: {
      param = opts.schedule_override ? opts.schedule_override(s) : gamma_falcon(s, d, opts.delta);
      const std::vector<double> loss = first_column(state.estimate.entries);
      IgwSolution sol = solve_igw_detail(loss, param, opts.solver_tol);
      rec.solver_residual = sol.residual;
      rec.solver_iterations = sol.iterations;
      if (opts.diagnostics && notes) {
        const auto rep = check_low_regret_low_variance(sol.x, loss, param);
        if (!rep.estimated_regret_bound.ok) {
          std::ostringstream os;
          os << "epoch " << s << ": estimated-regret bound violated, slack "
             << rep.estimated_regret_bound.worst_slack;
          notes->push_back(os.str());
        }
      }
      pair = StrategyPair{std::move(sol.x), Strategy::point_mass(0, 1)};
      break;
    }
    case Algorithm::NeUniform: {
      param = opts.schedule_override ? opts.schedule_override(s) : alpha_ne_uniform(s, d);
      MatrixGameSolution sol = solve_matrix_game(state.estimate.entries, opts.solver_tol);
      rec.solver_residual = sol.duality_gap;
      rec.solver_iterations = sol.iterations;
      pair = mix_with_uniform(sol.pair, param);
      break;
    }
  }
  rec.gamma_or_alpha = param;

  if (state.prev_pair) {
    rec.stability_row = stability_ratio(pair->row, state.prev_pair->row);
    rec.stability_col = stability_ratio(pair->col, state.prev_pair->col);
    rec.concentration_ok =
        check_concentration_event(eval_game, state.estimate, *state.prev_pair, s, d, opts.delta,
                                  game.cols() == 1)
            .holds;
  }
  rec.duality_gap = duality_gap(eval_game, *pair);

  const PairCounters counters =
      run_epoch(pair->row, pair->col, game, opts.noise, length, state.rng);
  state.estimate = estimate_game(counters);
  state.prev_pair = *pair;
  state.rounds_played += length;
  state.epoch = s + 1;
  if (played_out) *played_out = std::move(*pair);
  return rec;
}

namespace {

std::string make_config_key(const GameMatrix& game, const LearnerOptions& opts) {
  std::ostringstream os;
  os << algorithm_name(opts.algorithm) << "|T=" << opts.total_rounds << "|delta=" << opts.delta
     << "|noise=" << noise_name(opts.noise.kind) << "|shape=" << game.rows() << "x" << game.cols()
     << "|tol=" << opts.solver_tol;
  return os.str();
}

}  // namespace

RunTrace run_learner_with_eval(const GameMatrix& game, const GameMatrix& eval_game,
                               const LearnerOptions& opts) {
  if (game.rows() != eval_game.rows() || game.cols() != eval_game.cols())
    throw Error("run_learner: evaluation game shape does not match");
  LearnerState state = make_initial_state(game, opts);
  RunTrace trace;
  trace.algorithm = opts.algorithm;
  trace.seed = opts.seed;
  trace.total_rounds = opts.total_rounds;
  trace.delta = opts.delta;
  trace.rows = game.rows();
  trace.cols = game.cols();
  trace.config_key = make_config_key(game, opts);
  while (state.rounds_played < opts.total_rounds) {
    StrategyPair played{Strategy::uniform(game.rows()), Strategy::uniform(game.cols())};
    trace.records.push_back(step_epoch(state, game, eval_game, opts, &played, &trace.notes));
    trace.played.push_back(std::move(played));
  }
  return trace;
}

RunTrace run_learner(const GameMatrix& game, const LearnerOptions& opts) {
  return run_learner_with_eval(game, game, opts);
}

}  // namespace pmolb
