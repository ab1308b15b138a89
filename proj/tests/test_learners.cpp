#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmolb/analysis.hpp"
#include "pmolb/learners.hpp"

using namespace pmolb;

namespace {

LearnerOptions base_opts(Algorithm a, std::uint64_t rounds, std::uint64_t seed = 1) {
  LearnerOptions o;
  o.algorithm = a;
  o.total_rounds = rounds;
  o.delta = 0.1;
  o.noise = FeedbackModel{NoiseKind::BernoulliPm1, 0.25};
  o.seed = seed;
  return o;
}

GameMatrix interior_2x2() {
  Mat m(2, 2);
  m(0, 0) = 0.5; m(0, 1) = -0.2; m(1, 0) = -0.4; m(1, 1) = 0.3;
  return GameMatrix(std::move(m));
}

}  // namespace

TEST_CASE("learning rate schedules match high-precision evaluation") {
  CHECK(gamma_pmo_lb(1, 3, 0.1) == doctest::Approx(696.4732825881268).epsilon(1e-14));
  CHECK(gamma_falcon(2, 2, 0.1) == doctest::Approx(50.83883624298935).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_pmo_lb(1, 3, 1.5), Error);
  CHECK_THROWS_AS(gamma_falcon(0, 3, 0.1), Error);
}

TEST_CASE("gamma ratio between consecutive epochs stays in [1, sqrt(2)]") {
  for (int d : {2, 4, 8})
    for (double delta : {0.1, 0.01})
      for (int s = 2; s < 60; ++s) {
        const double rho_game = gamma_pmo_lb(s, d, delta) / gamma_pmo_lb(s + 1, d, delta);
        CHECK(rho_game >= 1.0);
        CHECK(rho_game <= std::sqrt(2.0) + 1e-12);
        const double rho_single = gamma_falcon(s, d, delta) / gamma_falcon(s + 1, d, delta);
        CHECK(rho_single >= 1.0);
        CHECK(rho_single <= std::sqrt(2.0) + 1e-12);
        // two-epoch ratio therefore lies in (1/2, 1]
        const double two = gamma_pmo_lb(s + 2, d, delta) / gamma_pmo_lb(s, d, delta);
        CHECK(two > 0.5);
        CHECK(two <= 1.0);
      }
}

TEST_CASE("gamma schedules are fixed multiples of the beta schedules") {
  for (int d : {2, 5, 16})
    for (int s = 2; s < 40; ++s) {
      CHECK(gamma_falcon(s, d, 0.1) ==
            doctest::Approx(5.0 * beta_schedule(s, d, 0.1, true)).epsilon(1e-12));
      CHECK(gamma_pmo_lb(s, d, 0.1) ==
            doctest::Approx(16.0 * d * beta_schedule(s, d, 0.1, false)).epsilon(1e-12));
    }
}

TEST_CASE("gamma more than doubles when d doubles") {
  for (int s : {1, 3, 10})
    for (int d : {2, 4, 8}) CHECK(gamma_pmo_lb(s, 2 * d, 0.1) > 2.0 * gamma_pmo_lb(s, d, 0.1));
}

TEST_CASE("uniform exploration weight") {
  CHECK(alpha_ne_uniform(1, 4) == 1.0);  // formula gives 2, clamped
  CHECK(alpha_ne_uniform(5, 1) == 0.5);
  double prev = 2.0;
  bool below_one = false;
  for (int s = 1; s <= 40; ++s) {
    const double a = alpha_ne_uniform(s, 4);
    CHECK(a <= 1.0);
    CHECK(a > 0.0);
    if (below_one) CHECK(a < prev);
    if (a < 1.0) below_one = true;
    prev = a;
  }
}

TEST_CASE("epoch 1 plays uniform for every algorithm") {
  SplitMix64 grng(3);
  const GameMatrix square = make_game("uniform_random", 3, {}, grng);
  const GameMatrix column = make_game("uniform_random", 5, {{"cols", 1.0}}, grng);
  for (Algorithm a : {Algorithm::PmoLb, Algorithm::Falcon, Algorithm::NeUniform}) {
    const GameMatrix& g = a == Algorithm::Falcon ? column : square;
    const RunTrace trace = run_learner(g, base_opts(a, 1));
    REQUIRE(trace.records.size() == 1);
    REQUIRE(trace.played.size() == 1);
    for (int i = 0; i < g.rows(); ++i)
      CHECK(trace.played[0].row[i] == doctest::Approx(1.0 / g.rows()).epsilon(1e-12));
    for (int j = 0; j < g.cols(); ++j)
      CHECK(trace.played[0].col[j] == doctest::Approx(1.0 / g.cols()).epsilon(1e-12));
  }
}

TEST_CASE("pmo_lb on a zero-noise game trends downward") {
  const GameMatrix g = interior_2x2();
  LearnerOptions o = base_opts(Algorithm::PmoLb, std::uint64_t{1} << 15);
  o.noise = FeedbackModel{NoiseKind::Deterministic, 0.0};
  // Scale the learning rate down so the run reaches the converging regime
  // within this horizon; at the default scale the saddle stays pinned near
  // uniform for every epoch this short run contains.
  o.schedule_override = [](int s) { return gamma_pmo_lb(s, 2, 0.1) / 512.0; };
  const RunTrace trace = run_learner(g, o);
  REQUIRE(trace.records.size() == 16);
  CHECK(trace.records.back().duality_gap <= trace.records[2].duality_gap);
}

TEST_CASE("falcon equals the pmo_lb row trace on single-column games under a shared schedule") {
  SplitMix64 grng(8);
  const GameMatrix g = make_game("uniform_random", 8, {{"cols", 1.0}}, grng);
  const auto shared = [](int s) { return gamma_falcon(s, 8, 0.1); };

  LearnerOptions of = base_opts(Algorithm::Falcon, std::uint64_t{1} << 12, 7);
  of.schedule_override = shared;
  LearnerOptions op = base_opts(Algorithm::PmoLb, std::uint64_t{1} << 12, 7);
  op.schedule_override = shared;

  const RunTrace tf = run_learner(g, of);
  const RunTrace tp = run_learner(g, op);
  REQUIRE(tf.records.size() == tp.records.size());
  for (std::size_t e = 0; e < tf.records.size(); ++e) {
    for (int i = 0; i < 8; ++i)
      CHECK(tf.played[e].row[i] == doctest::Approx(tp.played[e].row[i]).epsilon(1e-8));
    CHECK(tf.records[e].duality_gap == doctest::Approx(tp.records[e].duality_gap).epsilon(1e-8));
  }
}

TEST_CASE("ne_uniform pairs keep the mixing floor") {
  SplitMix64 grng(10);
  const GameMatrix g = make_game("uniform_random", 4, {}, grng);
  const RunTrace trace = run_learner(g, base_opts(Algorithm::NeUniform, std::uint64_t{1} << 12));
  for (std::size_t e = 0; e < trace.records.size(); ++e) {
    const double alpha = trace.records[e].gamma_or_alpha;
    for (int i = 0; i < 4; ++i) {
      CHECK(trace.played[e].row[i] >= alpha / 4.0 * (1.0 - 1e-12));
      CHECK(trace.played[e].col[i] >= alpha / 4.0 * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("pmo_lb pairs are strictly positive with the residual below tolerance") {
  SplitMix64 grng(11);
  const GameMatrix g = make_game("uniform_random", 3, {}, grng);
  LearnerOptions o = base_opts(Algorithm::PmoLb, std::uint64_t{1} << 12);
  const RunTrace trace = run_learner(g, o);
  for (const auto& p : trace.played) {
    CHECK(p.row.strictly_positive());
    CHECK(p.col.strictly_positive());
  }
  for (const auto& r : trace.records) CHECK(r.solver_residual <= o.solver_tol);
}

TEST_CASE("decisions never read the evaluation matrix") {
  SplitMix64 grng(12);
  const GameMatrix g = make_game("uniform_random", 3, {}, grng);
  const GameMatrix sentinel = make_game("rock_paper_scissors", 3, {}, grng);
  for (Algorithm a : {Algorithm::PmoLb, Algorithm::NeUniform}) {
    const LearnerOptions o = base_opts(a, std::uint64_t{1} << 10);
    const RunTrace real = run_learner_with_eval(g, g, o);
    const RunTrace swapped = run_learner_with_eval(g, sentinel, o);
    REQUIRE(real.played.size() == swapped.played.size());
    bool gap_differs = false;
    for (std::size_t e = 0; e < real.played.size(); ++e) {
      for (int i = 0; i < 3; ++i) {
        CHECK(real.played[e].row[i] == swapped.played[e].row[i]);  // bit identical
        CHECK(real.played[e].col[i] == swapped.played[e].col[i]);
      }
      if (real.records[e].duality_gap != swapped.records[e].duality_gap) gap_differs = true;
    }
    CHECK(gap_differs);  // only the evaluation columns moved
  }
}

TEST_CASE("run_learner horizon handling") {
  SplitMix64 grng(13);
  const GameMatrix g = make_game("uniform_random", 2, {}, grng);

  SUBCASE("T = 1 gives a single epoch-1 record") {
    const RunTrace t = run_learner(g, base_opts(Algorithm::PmoLb, 1));
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0].t_start == 1);
    CHECK(t.records[0].t_end == 1);
  }

  SUBCASE("T = 10 truncates the fourth epoch") {
    const RunTrace t = run_learner(g, base_opts(Algorithm::PmoLb, 10));
    REQUIRE(t.records.size() == 4);
    CHECK(t.records[3].t_start == 8);
    CHECK(t.records[3].t_end == 10);
  }

  SUBCASE("identical config and seed give identical traces") {
    const RunTrace a = run_learner(g, base_opts(Algorithm::NeUniform, 500, 3));
    const RunTrace b = run_learner(g, base_opts(Algorithm::NeUniform, 500, 3));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t e = 0; e < a.records.size(); ++e) {
      CHECK(a.records[e].duality_gap == b.records[e].duality_gap);
      CHECK(a.records[e].stability_row == b.records[e].stability_row);
      CHECK(a.records[e].gamma_or_alpha == b.records[e].gamma_or_alpha);
    }
  }
}

TEST_CASE("scaled-down schedules reach the theoretical rates") {
  // The default schedules keep gamma above the payoff scale for every epoch
  // a desk-scale horizon contains, which pins play near uniform; dividing
  // out most of the constant puts the run in the converging regime and the
  // fitted slopes land near the predicted -1/2.
  SplitMix64 grng(1);
  const GameMatrix square = make_game("uniform_random", 4, {}, grng);
  {
    std::vector<RunTrace> traces;
    for (std::uint64_t seed : {1, 2, 3}) {
      LearnerOptions o = base_opts(Algorithm::PmoLb, std::uint64_t{1} << 20, seed);
      o.schedule_override = [](int s) { return gamma_pmo_lb(s, 4, 0.1) / 512.0; };
      traces.push_back(run_learner(square, o));
    }
    const double slope = fit_slope(aggregate(traces), 1000).slope;
    CHECK(slope < -0.3);
    CHECK(slope > -0.7);
  }
  SplitMix64 grng2(101);
  const GameMatrix column = make_game("uniform_random", 8, {{"cols", 1.0}}, grng2);
  {
    std::vector<RunTrace> traces;
    for (std::uint64_t seed : {1, 2, 3}) {
      LearnerOptions o = base_opts(Algorithm::Falcon, std::uint64_t{1} << 20, seed);
      o.schedule_override = [](int s) { return gamma_falcon(s, 8, 0.1) / 64.0; };
      traces.push_back(run_learner(column, o));
    }
    const double slope = fit_slope(aggregate(traces), 1000).slope;
    CHECK(slope < -0.3);
    CHECK(slope > -0.7);
  }
}

TEST_CASE("diagnostics flag collects inline findings without changing play") {
  SplitMix64 grng(15);
  const GameMatrix g = make_game("uniform_random", 3, {}, grng);
  LearnerOptions off = base_opts(Algorithm::PmoLb, std::uint64_t{1} << 10);
  LearnerOptions on = off;
  on.diagnostics = true;
  const RunTrace a = run_learner(g, off);
  const RunTrace b = run_learner(g, on);
  CHECK(a.notes.empty());
  CHECK(b.notes.empty());  // solver output satisfies the checked bounds
  REQUIRE(a.played.size() == b.played.size());
  for (std::size_t e = 0; e < a.played.size(); ++e)
    for (int i = 0; i < 3; ++i) CHECK(a.played[e].row[i] == b.played[e].row[i]);
}

TEST_CASE("falcon rejects games with more than one column") {
  SplitMix64 grng(14);
  const GameMatrix g = make_game("uniform_random", 3, {}, grng);
  CHECK_THROWS_WITH_AS(run_learner(g, base_opts(Algorithm::Falcon, 8)),
                       doctest::Contains("single-column"), Error);
}

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : {Algorithm::PmoLb, Algorithm::Falcon, Algorithm::NeUniform})
    CHECK(parse_algorithm(algorithm_name(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("ucb"), Error);
}
