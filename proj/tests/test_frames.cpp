#include <cmath>

#include <doctest.h>

#include "maxproj/equality.hpp"
#include "maxproj/rng.hpp"

using namespace maxproj;

namespace {

WeightedFrame orthonormal_frame(int n) {
  WeightedFrame f;
  f.field = Field::Real;
  f.n = n;
  for (int i = 0; i < n; ++i) f.vectors.push_back(KVector::unit(Field::Real, n, i));
  f.weights.assign(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  return f;
}

// random tight frame (constant 1) with random nonnegative unit weights
WeightedFrame random_tight_frame(Rng& rng, Field field, int n, int N) {
  KMatrix u = rng.stiefel_point(field, N, n);
  WeightedFrame f;
  f.field = field;
  f.n = n;
  for (int i = 0; i < N; ++i) f.vectors.push_back(u.row_vector(i));
  double s = 0.0;
  for (int i = 0; i < N; ++i) {
    double t = rng.uniform();
    f.weights.push_back(t);
    s += t * t;
  }
  s = std::sqrt(s);
  for (double& t : f.weights) t /= s;
  return f;
}

}  // namespace

TEST_CASE("tightness residual") {
  WeightedFrame basis = orthonormal_frame(3);
  CHECK(tightness_residual(basis) < 1e-14);

  WeightedFrame doubled = basis;
  doubled.vectors.push_back(KVector::unit(Field::Real, 3, 0));
  doubled.weights = {0.5, 0.5, 0.5, 0.5};
  CHECK(tightness_residual(doubled) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(tightness_residual(to_unit_tight_frame(build_maximal_etf(Field::Real, 2))) < 1e-12);
}

TEST_CASE("trace identity residual") {
  CHECK(trace_identity_residual(orthonormal_frame(4)) < 1e-14);
  CHECK(trace_identity_residual(to_unit_tight_frame(build_maximal_etf(Field::Real, 2))) < 1e-12);
  CHECK(trace_identity_residual(replicate(build_maximal_etf(Field::Complex, 2), 2)) < 1e-12);

  WeightedFrame bad = orthonormal_frame(3);
  bad.vectors.push_back(KVector::unit(Field::Real, 3, 0));
  bad.weights = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(trace_identity_residual(bad), Error);  // NotTight
}

TEST_CASE("parseval residual") {
  WeightedFrame f = to_unit_tight_frame(build_maximal_etf(Field::Real, 2));
  CHECK(parseval_residual(f, KVector::zeros(Field::Real, 2)) == doctest::Approx(0.0));
  CHECK(parseval_residual(f, KVector::unit(Field::Real, 2, 0)) < 1e-12);

  Rng rng(5);
  WeightedFrame fc = to_unit_tight_frame(build_maximal_etf(Field::Complex, 3));
  for (int t = 0; t < 100; ++t) CHECK(parseval_residual(fc, rng.sphere_vector(Field::Complex, 3)) < 1e-12);
}

TEST_CASE("objective phi reference values") {
  CHECK(std::abs(objective_phi(to_unit_tight_frame(build_maximal_etf(Field::Real, 2))) - 4.0 / 3.0) <
        1e-12);
  CHECK(objective_phi(orthonormal_frame(2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(objective_phi(to_unit_tight_frame(build_maximal_etf(Field::Real, 3))) -
                 (1.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
}

TEST_CASE("objective phi validates weights") {
  WeightedFrame f = orthonormal_frame(2);
  f.weights = {1.0, 1.0};
  CHECK_THROWS_AS(objective_phi(f), Error);
  f.weights = {-0.6, 0.8};
  CHECK_THROWS_AS(objective_phi(f), Error);
}

TEST_CASE("phi invariances") {
  Rng rng(17);
  MaximalETF etf = build_maximal_etf(Field::Complex, 2);
  WeightedFrame f = replicate(etf, 2);
  const double base = objective_phi(f);

  WeightedFrame rotated = f;
  KMatrix q = rng.stiefel_point(Field::Complex, 2, 2);
  for (KVector& u : rotated.vectors) u = matvec(q, u);
  CHECK(objective_phi(rotated) == doctest::Approx(base).epsilon(1e-12));

  WeightedFrame phased = f;
  for (KVector& u : phased.vectors) u = scale(std::polar(1.0, rng.uniform(0, 6.28)), u);
  CHECK(objective_phi(phased) == doctest::Approx(base).epsilon(1e-12));

  WeightedFrame permuted = f;
  std::swap(permuted.vectors[0], permuted.vectors[5]);
  std::swap(permuted.weights[0], permuted.weights[5]);
  CHECK(objective_phi(permuted) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("bound property on random tight frames") {
  Rng rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    Field field = trial % 2 ? Field::Complex : Field::Real;
    int n = 2 + trial % 2;
    int N = n + rng.uniform_int(8 - n + 1);
    WeightedFrame f = random_tight_frame(rng, field, n, N);
    CHECK(objective_phi(f) <= delta_bound(field, n) + 1e-9);
  }
}

TEST_CASE("equality conditions hold on replicate") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  EqualityReport rep = check_equality_conditions(replicate(etf, 2));
  CHECK(rep.all_ok());
  REQUIRE(rep.groups.size() == 4);  // A_0 + 3 direction groups
  CHECK(rep.groups[0].empty());
  for (double s : rep.group_sums) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rep.matched_etf.has_value());
  CHECK(std::abs(rep.phi - rep.delta) < 1e-12);
}

TEST_CASE("equality conditions reject an orthonormal basis") {
  EqualityReport rep = check_equality_conditions(orthonormal_frame(2));
  CHECK_FALSE(rep.condition2_ok);  // angle 0 != 1/2
  CHECK_FALSE(rep.all_ok());
  CHECK(rep.phi < rep.delta - 1e-6);
}

TEST_CASE("equality conditions reject skewed weights") {
  // ETF directions with correct norms but weight mass piled on one direction
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  WeightedFrame f = to_unit_tight_frame(etf);
  f.weights = {std::sqrt(0.8), std::sqrt(0.1), std::sqrt(0.1)};
  EqualityReport rep = check_equality_conditions(f);
  CHECK_FALSE(rep.condition3_ok);
  CHECK_FALSE(rep.all_ok());
  CHECK(rep.phi < rep.delta - 1e-6);
}

TEST_CASE("equality conditions reject mismatched norms (condition 4)") {
  // two copies of each direction; intra-group weights valid but not matching
  // the vector norms
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  const double a = 0.4, b = std::sqrt(1.0 / 3.0 - 0.16);
  WeightedFrame f = build_equality_config(etf, {2, 2, 2}, {{a, b}, {a, b}, {a, b}});
  REQUIRE(check_equality_conditions(f).all_ok());
  // swap weights inside each group: sums still 1/d, norms no longer sqrt(n) t
  for (int g = 0; g < 3; ++g) std::swap(f.weights[static_cast<std::size_t>(2 * g)], f.weights[static_cast<std::size_t>(2 * g + 1)]);
  EqualityReport rep = check_equality_conditions(f);
  CHECK(rep.condition3_ok);
  CHECK_FALSE(rep.condition4_ok);
  CHECK(rep.phi < rep.delta - 1e-6);
}

TEST_CASE("zero vectors enter A_0 and require zero weights") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  WeightedFrame f = to_unit_tight_frame(etf);
  f.vectors.push_back(KVector::zeros(Field::Real, 2));
  f.weights.push_back(0.0);
  EqualityReport rep = check_equality_conditions(f);
  CHECK(rep.all_ok());
  CHECK(rep.groups[0] == std::vector<int>{3});

  // weight on a zero vector: condition 1 must fail (weights renormalized)
  WeightedFrame g = f;
  g.weights = {0.5, 0.5, 0.5, 0.5};
  EqualityReport rep2 = check_equality_conditions(g);
  CHECK_FALSE(rep2.condition1_ok);
  CHECK(rep2.phi < rep2.delta - 1e-6);
}

TEST_CASE("build_equality_config") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  const double a = 0.4, b = std::sqrt(1.0 / 3.0 - 0.16);
  WeightedFrame f = build_equality_config(etf, {2, 1, 1}, {{a, b}, {std::sqrt(1.0 / 3.0)}, {std::sqrt(1.0 / 3.0)}});
  CHECK(f.size() == 4);
  CHECK(tightness_residual(f) < 1e-12);
  CHECK(std::abs(objective_phi(f) - 4.0 / 3.0) < 1e-12);
  CHECK(check_equality_conditions(f).all_ok());

  // uniform multiplicity-1 config coincides with the rescaled ETF
  WeightedFrame g = build_equality_config(etf, {1, 1, 1},
                                          {{std::sqrt(1.0 / 3.0)}, {std::sqrt(1.0 / 3.0)}, {std::sqrt(1.0 / 3.0)}});
  WeightedFrame unit = to_unit_tight_frame(etf);
  for (int i = 0; i < 3; ++i) CHECK(norm(sub(g.vectors[static_cast<std::size_t>(i)], unit.vectors[static_cast<std::size_t>(i)])) < 1e-14);

  // complex case with multiplicities (2,2,1,1)
  MaximalETF c2 = build_maximal_etf(Field::Complex, 2);
  const double s = std::sqrt(1.0 / 8.0);
  WeightedFrame h = build_equality_config(c2, {2, 2, 1, 1}, {{s, s}, {s, s}, {0.5}, {0.5}});
  CHECK(std::abs(objective_phi(h) - delta_bound(Field::Complex, 2)) < 1e-12);
  CHECK(check_equality_conditions(h).all_ok());

  CHECK_THROWS_AS(build_equality_config(etf, {2, 1, 1}, {{a, a}, {std::sqrt(1.0 / 3.0)}, {std::sqrt(1.0 / 3.0)}}),
                  Error);  // group mass != 1/d
}

TEST_CASE("weighted reconstruction residual") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  WeightedFrame f = replicate(etf, 2);
  for (int j = 0; j < f.size(); ++j) CHECK(weighted_reconstruction_residual(f, j) < 1e-12);

  // zero vector contributes zero residual
  WeightedFrame g = to_unit_tight_frame(etf);
  g.vectors.push_back(KVector::zeros(Field::Real, 2));
  g.weights.push_back(0.0);
  CHECK(weighted_reconstruction_residual(g, 3) == doctest::Approx(0.0));

  // mixed multiplicities over (R,3)
  MaximalETF r3 = build_maximal_etf(Field::Real, 3);
  std::vector<int> mult = {2, 1, 1, 1, 1, 1};
  const double m6 = std::sqrt(1.0 / 6.0);
  std::vector<std::vector<double>> ws = {{0.3, std::sqrt(1.0 / 6.0 - 0.09)}, {m6}, {m6}, {m6}, {m6}, {m6}};
  WeightedFrame h = build_equality_config(r3, mult, ws);
  for (int j = 0; j < h.size(); ++j) CHECK(weighted_reconstruction_residual(h, j) < 1e-12);

  // refuses frames off the equality manifold
  WeightedFrame base = orthonormal_frame(2);
  CHECK_THROWS_AS(weighted_reconstruction_residual(base, 0), Error);
}

TEST_CASE("equality iff phi reaches delta on a mixed corpus") {
  Rng rng(31);
  int positives = 0, negatives = 0;
  for (auto [field, n] : std::vector<std::pair<Field, int>>{{Field::Real, 2}, {Field::Complex, 2}}) {
    MaximalETF etf = build_maximal_etf(field, n);
    const int d = etf.d();
    for (int k = 1; k <= 3; ++k) {
      WeightedFrame f = replicate(etf, k);
      EqualityReport rep = check_equality_conditions(f);
      CHECK(rep.all_ok());
      CHECK(std::abs(rep.phi - rep.delta) < 1e-9);
      ++positives;
    }
    for (int trial = 0; trial < 25; ++trial) {
      WeightedFrame f = random_tight_frame(rng, field, n, d + rng.uniform_int(3));
      EqualityReport rep = check_equality_conditions(f);
      const bool attains = std::abs(rep.phi - rep.delta) < 1e-9;
      CHECK(rep.all_ok() == attains);
      if (!attains) ++negatives;
    }
  }
  CHECK(positives >= 6);
  CHECK(negatives >= 40);  // random frames essentially never attain the bound
}
