#include <benchmark/benchmark.h>

#include "compnet/cournot.hpp"
#include "compnet/diffusion.hpp"
#include "compnet/spectral.hpp"
#include "compnet/wgan.hpp"

using namespace compnet;

namespace {

Network cournot_network(Algorithm a) {
  const auto m = paper_cournot_matrices();
  return {m.a1, m.a2, a == Algorithm::AtcC ? m.c_strong : m.c_weak};
}

void BM_CournotStep(benchmark::State& state) {
  const auto alg = static_cast<Algorithm>(state.range(0));
  const CournotGame game(CournotParams::paper());
  const Network net = cournot_network(alg);
  NetworkState s = NetworkState::zeros(game.config());
  std::int64_t i = 0;
  for (auto _ : state) {
    s = step(alg, s, game, net, 0.01, draw_noise(game, 1, ++i));
    benchmark::DoNotOptimize(s.x1.data());
  }
  state.SetLabel(to_string(alg));
}
BENCHMARK(BM_CournotStep)->DenseRange(0, 3);

void BM_WganGradients(benchmark::State& state) {
  WganParams p = WganParams::paper();
  p.init_scale = 2.5;
  const WganGame game(p);
  const Vector x = game.initial_strategy(Team::One, 1), y = game.initial_strategy(Team::Two, 1);
  Stream stream = make_stream(1, 0, 0);
  const NoiseDraw noise = game.sample_noise({Team::One, 0}, stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(game.grad_x({Team::One, 0}, x, y, noise));
    benchmark::DoNotOptimize(game.grad_y({Team::One, 0}, x, y, noise));
  }
}
BENCHMARK(BM_WganGradients);

void BM_WganMoments(benchmark::State& state) {
  WganParams p = WganParams::paper();
  p.init_scale = 2.5;
  const WganGame game(p);
  const Vector x = game.initial_strategy(Team::One, 1);
  for (auto _ : state) benchmark::DoNotOptimize(game.moments(x));
}
BENCHMARK(BM_WganMoments);

void BM_SpectralReport(benchmark::State& state) {
  const auto m = paper_cournot_matrices();
  for (auto _ : state) benchmark::DoNotOptimize(spectral_report(m.a1, m.a2, m.c_weak));
}
BENCHMARK(BM_SpectralReport);

}  // namespace

BENCHMARK_MAIN();
