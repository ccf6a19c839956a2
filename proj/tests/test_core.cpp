#include <cmath>

#include <doctest.h>

#include "maxproj/constants.hpp"
#include "maxproj/linalg.hpp"
#include "maxproj/rng.hpp"

using namespace maxproj;

TEST_CASE("inner product basics") {
  KVector e1 = KVector::unit(Field::Real, 2, 0);
  CHECK(std::real(inner(e1, e1)) == doctest::Approx(1.0).epsilon(1e-15));
  KVector a = KVector::unit(Field::Real, 3, 0);
  KVector b = KVector::unit(Field::Real, 3, 1);
  CHECK(std::abs(inner(a, b)) == doctest::Approx(0.0));

  // <(1,0), (1,sqrt2)/sqrt3> = 1/sqrt3
  KVector x(Field::Complex, {cplx(1, 0), cplx(0, 0)});
  KVector y(Field::Complex, {cplx(1.0 / std::sqrt(3.0), 0), cplx(std::sqrt(2.0 / 3.0), 0)});
  CHECK(std::abs(inner(x, y) - cplx(1.0 / std::sqrt(3.0), 0)) < 1e-15);
}

TEST_CASE("inner product conjugate symmetry and Cauchy-Schwarz") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Field f = trial % 2 ? Field::Complex : Field::Real;
    int dim = 2 + trial % 5;
    KVector x = rng.gaussian_vector(f, dim);
    KVector y = rng.gaussian_vector(f, dim);
    CHECK(std::abs(inner(x, y) - std::conj(inner(y, x))) < 1e-12);
    CHECK(std::abs(inner(x, y)) <= norm(x) * norm(y) + 1e-12);
  }
  // equality iff linearly dependent
  Rng rng2(8);
  KVector x = rng2.gaussian_vector(Field::Complex, 4);
  KVector y = scale(cplx(0.3, -1.2), x);
  CHECK(std::abs(inner(x, y)) == doctest::Approx(norm(x) * norm(y)).epsilon(1e-12));
}

TEST_CASE("inner product rejects mismatches") {
  KVector a = KVector::unit(Field::Real, 2, 0);
  KVector b = KVector::unit(Field::Real, 3, 0);
  KVector c = KVector::unit(Field::Complex, 2, 0);
  CHECK_THROWS_AS((void)inner(a, b), Error);
  CHECK_THROWS_AS((void)inner(a, c), Error);
}

TEST_CASE("sgn") {
  CHECK(sgn(-3.0) == -1.0);
  CHECK(std::abs(sgn(cplx(0, 3)) - cplx(0, 1)) < 1e-15);
  CHECK(sgn(cplx(0, 0)) == cplx(1, 0));
  CHECK(sgn(0.0) == 1.0);
}

TEST_CASE("tolerance config validation") {
  ToleranceConfig good;
  good.validate();
  ToleranceConfig bad;
  bad.lp_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("gerzon bound") {
  CHECK(gerzon_bound(Field::Real, 2) == 3);
  CHECK(gerzon_bound(Field::Complex, 2) == 4);
  CHECK(gerzon_bound(Field::Real, 7) == 28);
  CHECK_THROWS_AS(gerzon_bound(Field::Real, 0), Error);
}

TEST_CASE("welch angle") {
  CHECK(welch_angle(Field::Real, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(welch_angle(Field::Real, 7) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(welch_angle(Field::Complex, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(welch_angle(Field::Real, 1), Error);
}

TEST_CASE("delta bound") {
  CHECK(std::abs(delta_bound(Field::Real, 2) - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(delta_bound(Field::Complex, 2) - (1.0 + std::sqrt(3.0)) / 2.0) < 1e-12);
  CHECK(std::abs(delta_bound(Field::Real, 3) - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
}

TEST_CASE("rescale constant") {
  CHECK(std::abs(rescale_constant(Field::Real, 2) - 0.5) < 1e-12);
  CHECK(std::abs(rescale_constant(Field::Real, 3) - (std::sqrt(5.0) - 1.0) / 4.0) < 1e-12);
  CHECK(std::abs(rescale_constant(Field::Complex, 2) - 1.0 / (1.0 + std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("closed-form identities across dimensions") {
  for (Field f : {Field::Real, Field::Complex})
    for (int n = 2; n <= 50; ++n) {
      CHECK(std::abs(sign_reconstruction_identity(f, n) - 1.0) < 1e-12);
      CHECK(std::abs(bound_closing_expression(f, n) - delta_bound(f, n)) < 1e-12);
    }
}

TEST_CASE("delta strictly increasing in n") {
  for (Field f : {Field::Real, Field::Complex})
    for (int n = 1; n < 50; ++n) CHECK(delta_bound(f, n + 1) > delta_bound(f, n));
}

TEST_CASE("qr factorization") {
  Rng rng(42);
  for (Field f : {Field::Real, Field::Complex}) {
    KMatrix a = rng.gaussian_matrix(f, 7, 4);
    QR qr = qr_thin(a);
    CHECK(frobenius_norm(sub(matmul(qr.q, qr.r), a)) < 1e-12);
    KMatrix qhq = matmul(adjoint(qr.q), qr.q);
    CHECK(frobenius_norm(sub(qhq, KMatrix::identity(f, 4))) < 1e-12);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(std::imag(qr.r(i, i))) < 1e-14);
      CHECK(std::real(qr.r(i, i)) > 0.0);
    }
  }
}

TEST_CASE("qr retraction is idempotent on orthonormal input") {
  Rng rng(43);
  KMatrix u = rng.stiefel_point(Field::Complex, 6, 3);
  QR qr = qr_thin(u);
  CHECK(frobenius_norm(sub(qr.q, u)) < 1e-12);
}

TEST_CASE("rank and least squares") {
  Rng rng(44);
  KMatrix a = rng.gaussian_matrix(Field::Real, 6, 3);
  CHECK(rank(a) == 3);
  KMatrix low(Field::Real, 4, 3);
  for (int i = 0; i < 4; ++i) {
    low(i, 0) = i + 1.0;
    low(i, 1) = 2.0 * (i + 1.0);
    low(i, 2) = i * i;
  }
  CHECK(rank(low) == 2);

  KVector xtrue = rng.gaussian_vector(Field::Real, 3);
  KVector b = matvec(a, xtrue);
  KVector x = lstsq(a, b);
  CHECK(norm(sub(x, xtrue)) < 1e-11);
}

TEST_CASE("operator norm") {
  KMatrix a(Field::Real, 3, 3);
  a(0, 0) = 1.0;  // rank-one projector: spectral norm 1
  CHECK(operator_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
  KMatrix z(Field::Real, 4, 4);
  CHECK(operator_norm(z) == 0.0);
  // diag(3,-5): norm 5
  KMatrix d(Field::Real, 2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  CHECK(operator_norm(d) == doctest::Approx(5.0).epsilon(1e-12));
}
