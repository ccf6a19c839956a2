#include <cmath>
#include <numbers>
#include <tuple>

#include <doctest.h>

#include "maxproj/optimize.hpp"
#include "maxproj/rng.hpp"

using namespace maxproj;

namespace {

OptimizerConfig quick(int restarts, std::uint64_t seed = 7) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("perron weights: uniform on the rescaled ETF") {
  WeightedFrame f = to_unit_tight_frame(build_maximal_etf(Field::Real, 2));
  std::vector<double> t = perron_weights(f.vectors);
  for (double v : t) CHECK(v == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("perron weights: degenerate gram ties to uniform") {
  std::vector<KVector> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(KVector::unit(Field::Real, 3, i));
  std::vector<double> t = perron_weights(basis);
  for (double v : t) CHECK(v == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("perron weights: zero vector gets zero weight") {
  std::vector<KVector> vecs = {KVector::unit(Field::Real, 2, 0), KVector::unit(Field::Real, 2, 1),
                               KVector::zeros(Field::Real, 2)};
  std::vector<double> t = perron_weights(vecs);
  CHECK(t[2] < 1e-10);
  std::vector<KVector> zeros = {KVector::zeros(Field::Real, 2)};
  CHECK_THROWS_AS(perron_weights(zeros), Error);
}

TEST_CASE("perron weights maximize the quadratic form") {
  Rng rng(404);
  for (int trial = 0; trial < 1000; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    const int n = 2 + trial % 2;
    const int N = n + rng.uniform_int(5);
    KMatrix u = rng.stiefel_point(f, N, n);
    std::vector<KVector> vecs;
    for (int i = 0; i < N; ++i) vecs.push_back(u.row_vector(i));
    KMatrix m = modulus_gram(vecs);
    std::vector<double> t = perron_weights(vecs);
    auto quad = [&](const std::vector<double>& w) {
      double s = 0.0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          s += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * std::real(m(i, j));
      return s;
    };
    const double best = quad(t);
    for (int probe = 0; probe < 100; ++probe) {
      std::vector<double> w(static_cast<std::size_t>(N));
      double nw = 0.0;
      for (double& v : w) {
        v = rng.uniform();
        nw += v * v;
      }
      nw = std::sqrt(nw);
      for (double& v : w) v /= nw;
      CHECK(quad(w) <= best + 1e-9);
    }
  }
}

TEST_CASE("maximize: orthonormal floor at N = n") {
  // brute force over 2x2 orthogonal factors and weight angles
  double brute = 0.0;
  for (int a = 0; a < 360; ++a)
    for (int refl = 0; refl < 2; ++refl)
      for (int wa = 0; wa < 90; ++wa) {
        const double th = a * std::numbers::pi / 180.0;
        const double c = std::cos(th), s = std::sin(th);
        const double u[2][2] = {{c, -s * (refl ? -1.0 : 1.0)}, {s, c * (refl ? -1.0 : 1.0)}};
        const double t1 = std::cos(wa * std::numbers::pi / 180.0), t2 = std::sin(wa * std::numbers::pi / 180.0);
        double phi = 0.0;
        const double t[2] = {t1, t2};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            phi += t[i] * t[j] * std::abs(u[i][0] * u[j][0] + u[i][1] * u[j][1]);
        brute = std::max(brute, phi);
      }
  CHECK(brute == doctest::Approx(1.0).epsilon(1e-12));

  OptResult r = maximize_lambda_rel(Field::Real, 2, 2, quick(8));
  CHECK(std::abs(r.best_value - brute) < 1e-9);
}

TEST_CASE("maximize: hexagon value at N = d") {
  OptResult r = maximize_lambda_rel(Field::Real, 2, 3, quick(8));
  CHECK(std::abs(r.best_value - 4.0 / 3.0) < 1e-7);
  CHECK(r.converged);
  CHECK(tightness_residual(r.best_frame) < 1e-9);
  CHECK(std::abs(objective_phi(r.best_frame) - r.best_value) < 1e-9);
}

TEST_CASE("maximize: the 3-in-5 value") {
  OptResult r = maximize_lambda_rel(Field::Real, 3, 5, quick(12));
  CHECK(std::abs(r.best_value - (5.0 + 4.0 * std::sqrt(2.0)) / 7.0) < 1e-6);
}

TEST_CASE("mu reference points") {
  CHECK(std::abs(mu(Field::Real, 2, 3, quick(8)).best_value - 4.0 / 3.0) < 1e-7);
  CHECK(std::abs(mu(Field::Real, 2, 6, quick(8)).best_value - 4.0 / 3.0) < 1e-7);
  CHECK(mu(Field::Real, 2, 4, quick(24)).best_value < 4.0 / 3.0 - 1e-4);
  const double dc2 = delta_bound(Field::Complex, 2);
  CHECK(std::abs(mu(Field::Complex, 2, 4, quick(8)).best_value - dc2) < 1e-7);
  CHECK(mu(Field::Complex, 2, 5, quick(24)).best_value < dc2 - 1e-4);
}

TEST_CASE("optimizer outputs never exceed the bound and grow with N") {
  for (Field f : {Field::Real, Field::Complex})
    for (int n = 2; n <= 3; ++n) {
      double prev = 0.0;
      const double cap = delta_bound(f, n);
      for (int N = n; N <= 8; ++N) {
        OptResult r = maximize_lambda_rel(f, n, N, quick(6));
        CHECK(r.best_value <= cap + 1e-9);
        CHECK(r.best_value >= prev - 1e-7);  // lambda(n, N) nondecreasing in N
        CHECK(tightness_residual(r.best_frame) < 1e-9);
        prev = r.best_value;
      }
    }
}

TEST_CASE("equality configurations are stationary for the frame step") {
  const std::vector<std::tuple<Field, int, int>> cases = {
      std::make_tuple(Field::Real, 2, 1), std::make_tuple(Field::Real, 2, 2),
      std::make_tuple(Field::Complex, 2, 2)};
  for (const auto& [f, n, k] : cases) {
    WeightedFrame start = replicate(build_maximal_etf(f, n), k);
    CHECK(frame_ascent_drift(start) < 1e-10);
  }
}

TEST_CASE("restart determinism") {
  OptResult a = maximize_lambda_rel(Field::Real, 2, 4, quick(6, 99));
  OptResult b = maximize_lambda_rel(Field::Real, 2, 4, quick(6, 99));
  CHECK(a.best_value == b.best_value);
  REQUIRE(a.per_restart.size() == b.per_restart.size());
  for (std::size_t i = 0; i < a.per_restart.size(); ++i) CHECK(a.per_restart[i] == b.per_restart[i]);
  OptimizerConfig threaded = quick(6, 99);
  threaded.threads = 2;
  OptResult c = maximize_lambda_rel(Field::Real, 2, 4, threaded);
  CHECK(c.best_value == a.best_value);
}

TEST_CASE("divisibility checks") {
  DivisibilityReport a = divisibility_check(Field::Real, 2, 6, quick(12));
  CHECK(a.equality);
  CHECK(a.divisible);
  DivisibilityReport b = divisibility_check(Field::Real, 2, 5, quick(16));
  CHECK_FALSE(b.equality);
  CHECK_FALSE(b.divisible);
  DivisibilityReport c = divisibility_check(Field::Complex, 2, 8, quick(12));
  CHECK(c.equality);
  CHECK(c.divisible);
  CHECK_THROWS_AS(divisibility_check(Field::Real, 5, 10, quick(4)), Error);
}
