#include <benchmark/benchmark.h>

#include "maxproj/geometry.hpp"
#include "maxproj/minproj.hpp"
#include "maxproj/rng.hpp"

using namespace maxproj;

namespace {

void BM_lp_hexagon_minproj(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  SubspaceOfLinf s = embed_norm(DualBallSpec{Field::Real, 2, etf.vectors});
  for (auto _ : state) benchmark::DoNotOptimize(min_projection_lp(s));
}
BENCHMARK(BM_lp_hexagon_minproj)->Unit(benchmark::kMicrosecond);

void BM_lp_r3_minproj(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Real, 3);
  SubspaceOfLinf s = embed_norm(DualBallSpec{Field::Real, 3, etf.vectors});
  for (auto _ : state) benchmark::DoNotOptimize(min_projection_lp(s));
}
BENCHMARK(BM_lp_r3_minproj)->Unit(benchmark::kMillisecond);

void BM_ipm_r7_minproj(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Real, 7);
  SubspaceOfLinf s = embed_norm(DualBallSpec{Field::Real, 7, etf.vectors});
  for (auto _ : state) benchmark::DoNotOptimize(min_projection_lp(s));
}
BENCHMARK(BM_ipm_r7_minproj)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_absconv_membership_real(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Real, 3);
  Rng rng(7);
  KVector x = scale(0.7, rng.sphere_vector(Field::Real, 3));
  for (auto _ : state) benchmark::DoNotOptimize(absconv_contains(etf.vectors, x));
}
BENCHMARK(BM_absconv_membership_real)->Unit(benchmark::kMicrosecond);

void BM_soc_membership_complex(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Complex, 2);
  KVector x = scale(0.5, etf.vectors[1]);
  for (auto _ : state) benchmark::DoNotOptimize(absconv_contains(etf.vectors, x));
}
BENCHMARK(BM_soc_membership_complex)->Unit(benchmark::kMillisecond);

void BM_zonotope_membership(benchmark::State& state) {
  MaximalETF etf = build_maximal_etf(Field::Real, 7);
  ZonotopeSpec z{etf.vectors, rescale_constant(Field::Real, 7)};
  for (auto _ : state) benchmark::DoNotOptimize(zonotope_contains(z, etf.vectors[0]));
}
BENCHMARK(BM_zonotope_membership)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
