#include <cmath>

#include <doctest.h>

#include "maxproj/minproj.hpp"
#include "maxproj/rng.hpp"
#include "oracle.hpp"

using namespace maxproj;

namespace {

DualBallSpec hexagon_ball() {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  return DualBallSpec{Field::Real, 2, etf.vectors};
}

}  // namespace

TEST_CASE("embed_norm") {
  DualBallSpec ball = hexagon_ball();
  SubspaceOfLinf s = embed_norm(ball);
  CHECK(s.N == 3);
  CHECK(s.n == 2);
  // sup norm of V e_1 equals max_i |<e_1, w_i>| = 1
  KVector e1 = KVector::unit(Field::Real, 2, 0);
  KVector img = matvec(s.basis, e1);
  double mx = 0.0;
  for (int i = 0; i < 3; ++i) mx = std::max(mx, std::abs(img[i]));
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-14));

  // canonical basis ball embeds as the identity
  DualBallSpec cube{Field::Real, 3,
                    {KVector::unit(Field::Real, 3, 0), KVector::unit(Field::Real, 3, 1),
                     KVector::unit(Field::Real, 3, 2)}};
  SubspaceOfLinf si = embed_norm(cube);
  CHECK(frobenius_norm(sub(si.basis, KMatrix::identity(Field::Real, 3))) < 1e-15);

  // complex ETF ball gives a 4x2 complex basis
  MaximalETF c2 = build_maximal_etf(Field::Complex, 2);
  SubspaceOfLinf sc = embed_norm(DualBallSpec{Field::Complex, 2, c2.vectors});
  CHECK(sc.N == 4);
  CHECK(sc.basis.field == Field::Complex);
}

TEST_CASE("min projection: hexagon reaches 4/3") {
  SubspaceOfLinf s = embed_norm(hexagon_ball());
  MinProjResult r = min_projection_lp(s);
  CHECK(std::abs(r.lambda_rel - 4.0 / 3.0) < 1e-9);
  CHECK(r.idempotency_residual < 1e-8);
  CHECK(r.invariance_residual < 1e-8);
}

TEST_CASE("min projection: identity space gives exactly 1") {
  SubspaceOfLinf s;
  s.field = Field::Real;
  s.N = 3;
  s.n = 3;
  s.basis = KMatrix::identity(Field::Real, 3);
  MinProjResult r = min_projection_lp(s);
  CHECK(r.lambda_rel == 1.0);
}

TEST_CASE("min projection refuses complex input") {
  MaximalETF c2 = build_maximal_etf(Field::Complex, 2);
  SubspaceOfLinf s = embed_norm(DualBallSpec{Field::Complex, 2, c2.vectors});
  CHECK_THROWS_AS(min_projection_lp(s), Error);
}

TEST_CASE("min projection matches the derivative-free oracle") {
  Rng rng(555);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = trial % 2 ? 3 : 2;
    const int N = trial % 2 ? 5 : 4;
    SubspaceOfLinf s;
    s.field = Field::Real;
    s.N = N;
    s.n = n;
    s.basis = rng.gaussian_matrix(Field::Real, N, n);
    MinProjResult r = min_projection_lp(s);
    const double oracle = test_oracle::min_projection_oracle(s.basis, 1000 + trial);
    CHECK(std::abs(r.lambda_rel - oracle) < 1e-6);
  }
}

TEST_CASE("min projection is optimal against random feasible competitors") {
  Rng rng(77);
  SubspaceOfLinf s;
  s.field = Field::Real;
  s.N = 5;
  s.n = 3;
  s.basis = rng.gaussian_matrix(Field::Real, 5, 3);
  MinProjResult r = min_projection_lp(s);

  QR full = qr_full(s.basis);
  KMatrix vt = adjoint(s.basis);
  KMatrix pinv = matmul(lstsq(matmul(vt, s.basis), KMatrix::identity(Field::Real, 3)), vt);
  for (int trial = 0; trial < 10000; ++trial) {
    KMatrix m = pinv;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b) {
        const double w = rng.uniform(-2.0, 2.0);
        for (int j = 0; j < 5; ++j) m(a, j) += w * std::real(full.q(j, 3 + b));
      }
    CHECK(test_oracle::projection_norm(s.basis, m) >= r.lambda_rel - 1e-9);
  }
}

TEST_CASE("min projection invariant under permutation and sign flips") {
  Rng rng(42);
  DualBallSpec ball = hexagon_ball();
  ball.functionals.push_back(scale(0.4, add(ball.functionals[0], ball.functionals[1])));
  const double base = min_projection_lp(embed_norm(ball)).lambda_rel;

  DualBallSpec flipped = ball;
  std::swap(flipped.functionals[0], flipped.functionals[2]);
  flipped.functionals[1] = scale(-1.0, flipped.functionals[1]);
  CHECK(std::abs(min_projection_lp(embed_norm(flipped)).lambda_rel - base) < 1e-9);
}

TEST_CASE("cm_build and cm_verify on the hexagon") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  CMBuildResult br = cm_build(etf);
  CHECK(br.space.N == 3);
  CMReport rep = cm_verify(br.op, br.space);
  CHECK(std::abs(rep.trace_on_X.real() - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(rep.trace_on_X.imag()) < 1e-12);
  CHECK(std::abs(rep.column_sum - 1.0) < 1e-12);
  CHECK(rep.invariance_residual < 1e-12);

  // E acts as (delta/n) id on X: delta/n = 2/3
  KMatrix ev = matmul(br.op.e, br.space.basis);
  CHECK(frobenius_norm(sub(ev, scale(2.0 / 3.0, br.space.basis))) < 1e-12);

  // matrix layout: diagonal block entries are +-1/3
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(std::abs(br.op.e(j, k)) - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("cm_build with zonotope rows") {
  MaximalETF etf = build_maximal_etf(Field::Real, 2);
  const double c = rescale_constant(Field::Real, 2);
  KMatrix a(Field::Real, 2, 3);
  a(0, 0) = 0.3 * c;
  a(0, 1) = -0.8 * c;
  a(0, 2) = c;
  a(1, 0) = -c;
  a(1, 1) = 0.25 * c;
  a(1, 2) = 0.0;
  CMBuildResult br = cm_build(etf, &a);
  CHECK(br.space.N == 5);
  CMReport rep = cm_verify(br.op, br.space);
  CHECK(std::abs(rep.trace_on_X.real() - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(rep.column_sum - 1.0) < 1e-12);
  CHECK(rep.invariance_residual < 1e-12);
  // zero columns beyond the ETF block
  for (int j = 0; j < 5; ++j)
    for (int k = 3; k < 5; ++k) CHECK(std::abs(br.op.e(j, k)) == 0.0);

  KMatrix bad(Field::Real, 1, 3);
  bad(0, 0) = 2.0 * c;
  CHECK_THROWS_AS(cm_build(etf, &bad), Error);
}

TEST_CASE("cm_build with an all-zero coefficient row over C^2") {
  MaximalETF etf = build_maximal_etf(Field::Complex, 2);
  KMatrix a(Field::Complex, 1, 4);  // one zonotope point at the origin
  CMBuildResult br = cm_build(etf, &a);
  CHECK(br.space.N == 5);
  CMReport rep = cm_verify(br.op, br.space);
  CHECK(std::abs(rep.trace_on_X.real() - (1.0 + std::sqrt(3.0)) / 2.0) < 1e-12);
  CHECK(std::abs(rep.column_sum - 1.0) < 1e-12);
}

TEST_CASE("cm trace equals delta for every catalogued ETF") {
  Rng rng(808);
  for (auto [f, n] : std::vector<std::pair<Field, int>>{
           {Field::Real, 2}, {Field::Real, 3}, {Field::Real, 7}, {Field::Complex, 2}, {Field::Complex, 3}}) {
    MaximalETF etf = build_maximal_etf(f, n);
    const double c = rescale_constant(f, n);
    const double delta = delta_bound(f, n);
    for (int grid = 0; grid < 3; ++grid) {
      const int m = grid;  // 0, 1, 2 zonotope rows
      KMatrix a(f, std::max(1, m), etf.d());
      const KMatrix* ap = nullptr;
      if (m > 0) {
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < etf.d(); ++k) {
            if (f == Field::Real) a(i, k) = c * rng.uniform(-1.0, 1.0);
            else a(i, k) = std::polar(c * rng.uniform(), 2.0 * 3.14159265358979 * rng.uniform());
          }
        ap = &a;
      }
      CMBuildResult br = cm_build(etf, ap);
      CMReport rep = cm_verify(br.op, br.space);
      CHECK(std::abs(rep.trace_on_X.real() - delta) < 1e-9);
      CHECK(std::abs(rep.trace_on_X.imag()) < 1e-9);
      CHECK(std::abs(rep.column_sum - 1.0) < 1e-12);
      CHECK(rep.invariance_residual < 1e-9);
    }
  }
}

TEST_CASE("cm_verify on scaled identity") {
  SubspaceOfLinf s;
  s.field = Field::Real;
  s.N = 3;
  s.n = 3;
  s.basis = KMatrix::identity(Field::Real, 3);
  CMOperator e{scale(1.0 / 3.0, KMatrix::identity(Field::Real, 3))};
  CMReport rep = cm_verify(e, s);
  CHECK(std::abs(rep.trace_on_X.real() - 1.0) < 1e-14);
  CHECK(std::abs(rep.column_sum - 1.0) < 1e-14);
  CHECK(rep.invariance_residual < 1e-14);
}

TEST_CASE("random admissible operators never beat lambda (trace duality)") {
  Rng rng(909);
  SubspaceOfLinf s = embed_norm(hexagon_ball());
  const double lambda = min_projection_lp(s).lambda_rel;
  QR q = qr_thin(s.basis);
  for (int trial = 0; trial < 1000; ++trial) {
    KMatrix e = rng.gaussian_matrix(Field::Real, 3, 3);
    // force invariance: E' = E - (I - Pi) E Pi
    KMatrix pi = matmul(q.q, adjoint(q.q));
    KMatrix correction = matmul(sub(e, matmul(pi, e)), pi);
    e = sub(e, correction);
    // normalize the column sup-norm sum to 1
    double cs = 0.0;
    for (int k = 0; k < 3; ++k) {
      double mx = 0.0;
      for (int j = 0; j < 3; ++j) mx = std::max(mx, std::abs(e(j, k)));
      cs += mx;
    }
    if (cs < 1e-9) continue;
    e = scale(1.0 / cs, e);
    CMReport rep = cm_verify(CMOperator{e}, s);
    CHECK(rep.invariance_residual < 1e-10);
    CHECK(rep.trace_on_X.real() <= lambda + 1e-9);
  }
}

TEST_CASE("trace duality meets the LP value on extremal real spaces") {
  Rng rng(311);
  for (auto [f, n] : std::vector<std::pair<Field, int>>{{Field::Real, 2}, {Field::Real, 3}}) {
    MaximalETF etf = build_maximal_etf(f, n);
    const double c = rescale_constant(f, n);
    KMatrix a(f, 1, etf.d());
    for (int k = 0; k < etf.d(); ++k) a(0, k) = c * rng.uniform(-1.0, 1.0);
    CMBuildResult br = cm_build(etf, &a);
    CMReport rep = cm_verify(br.op, br.space);
    MinProjResult mp = min_projection_lp(br.space);
    CHECK(std::abs(mp.lambda_rel - delta_bound(f, n)) < 1e-8);
    CHECK(rep.trace_on_X.real() <= mp.lambda_rel + 1e-8);
  }
}

TEST_CASE("lambda upper report") {
  SubspaceOfLinf s = embed_norm(hexagon_ball());
  LambdaUpperReport rep = lambda_upper_report(s);
  CHECK(std::abs(rep.lp_value - 4.0 / 3.0) < 1e-9);
  CHECK(rep.certified_upper == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  SubspaceOfLinf id;
  id.field = Field::Real;
  id.N = 2;
  id.n = 2;
  id.basis = KMatrix::identity(Field::Real, 2);
  LambdaUpperReport rep2 = lambda_upper_report(id);
  CHECK(rep2.lp_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep2.lp_value < rep2.delta_upper);

  Rng rng(1212);
  SubspaceOfLinf rnd;
  rnd.field = Field::Real;
  rnd.N = 5;
  rnd.n = 3;
  rnd.basis = rng.gaussian_matrix(Field::Real, 5, 3);
  LambdaUpperReport rep3 = lambda_upper_report(rnd);
  CHECK(rep3.lp_value <= delta_bound(Field::Real, 3) + 1e-9);
}
