#include <benchmark/benchmark.h>

#include "maxproj/equality.hpp"
#include "maxproj/optimize.hpp"
#include "maxproj/rng.hpp"

using namespace maxproj;

namespace {

WeightedFrame random_frame(int n, int N, std::uint64_t seed) {
  Rng rng(seed);
  KMatrix u = rng.stiefel_point(Field::Real, N, n);
  WeightedFrame f;
  f.field = Field::Real;
  f.n = n;
  for (int i = 0; i < N; ++i) f.vectors.push_back(u.row_vector(i));
  f.weights.assign(static_cast<std::size_t>(N), 1.0 / std::sqrt(static_cast<double>(N)));
  return f;
}

void BM_objective_phi(benchmark::State& state) {
  WeightedFrame f = random_frame(3, static_cast<int>(state.range(0)), 42);
  for (auto _ : state) benchmark::DoNotOptimize(objective_phi(f));
}
BENCHMARK(BM_objective_phi)->Arg(8)->Arg(32)->Arg(128);

void BM_tightness_residual(benchmark::State& state) {
  WeightedFrame f = random_frame(3, static_cast<int>(state.range(0)), 43);
  for (auto _ : state) benchmark::DoNotOptimize(tightness_residual(f));
}
BENCHMARK(BM_tightness_residual)->Arg(8)->Arg(64);

void BM_etf_build_verify(benchmark::State& state) {
  for (auto _ : state) {
    MaximalETF etf = build_maximal_etf(Field::Real, 7);
    benchmark::DoNotOptimize(verify_etf(etf.vectors));
  }
}
BENCHMARK(BM_etf_build_verify);

void BM_perron_weights(benchmark::State& state) {
  WeightedFrame f = random_frame(3, static_cast<int>(state.range(0)), 44);
  for (auto _ : state) benchmark::DoNotOptimize(perron_weights(f.vectors));
}
BENCHMARK(BM_perron_weights)->Arg(8)->Arg(32);

void BM_equality_check(benchmark::State& state) {
  WeightedFrame f = replicate(build_maximal_etf(Field::Real, 3), 2);
  for (auto _ : state) benchmark::DoNotOptimize(check_equality_conditions(f));
}
BENCHMARK(BM_equality_check);

void BM_maximize_small(benchmark::State& state) {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 9;
  for (auto _ : state) benchmark::DoNotOptimize(maximize_lambda_rel(Field::Real, 2, 4, cfg));
}
BENCHMARK(BM_maximize_small)->Unit(benchmark::kMillisecond);

}  // namespace
