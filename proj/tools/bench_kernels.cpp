// Times the OpenMP epoch kernel against the serial reference, and a
// multi-seed batch at different worker counts.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "pmolb/environment.hpp"
#include "pmolb/experiment.hpp"
#include "pmolb/game.hpp"

using namespace pmolb;

namespace {

double time_once(const Strategy& x, const Strategy& y, const GameMatrix& g,
                 const FeedbackModel& m, std::uint64_t length, bool parallel) {
  SplitMix64 rng(7);
  const auto t0 = std::chrono::steady_clock::now();
  PairCounters pc = parallel ? run_epoch(x, y, g, m, length, rng)
                             : run_epoch_serial(x, y, g, m, length, rng);
  const auto t1 = std::chrono::steady_clock::now();
  if (pc.total() != static_cast<std::int64_t>(length)) std::abort();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  std::printf("epoch kernel, bernoulli rewards (%d omp threads available)\n", omp_get_max_threads());
  std::printf("%8s %10s %12s %12s %8s\n", "d", "rounds", "serial_s", "omp_s", "speedup");
  const FeedbackModel model{NoiseKind::BernoulliPm1, 0.25};
  for (int d : {4, 16, 61}) {
    SplitMix64 grng(1);
    const GameMatrix game = make_game("uniform_random", d, {}, grng);
    const Strategy u = Strategy::uniform(d);
    for (std::uint64_t rounds : {std::uint64_t{1} << 20, std::uint64_t{1} << 22}) {
      const double ts = time_once(u, u, game, model, rounds, false);
      const double tp = time_once(u, u, game, model, rounds, true);
      std::printf("%8d %10llu %12.4f %12.4f %8.2f\n", d,
                  static_cast<unsigned long long>(rounds), ts, tp, ts / tp);
    }
  }

  std::printf("\nexperiment batch, pmo_lb + ne_uniform, 4 seeds, T=2^18\n");
  for (int workers : {1, omp_get_max_threads()}) {
    ExperimentConfig cfg;
    cfg.game = GameSpec{"uniform_random", 4, 0, 0.1, 0.2, 1, ""};
    cfg.total_rounds = std::uint64_t{1} << 18;
    cfg.seeds = {1, 2, 3, 4};
    cfg.output_dir = "bench_out_w" + std::to_string(workers);
    cfg.workers = workers;
    const auto t0 = std::chrono::steady_clock::now();
    run_experiment(cfg);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("workers=%d: %.3f s\n", workers, std::chrono::duration<double>(t1 - t0).count());
  }
  return 0;
}
