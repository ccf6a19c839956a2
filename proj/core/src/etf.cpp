#include "maxproj/etf.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace maxproj {

namespace {

using std::numbers::pi;

std::vector<KVector> build_r2() {
  std::vector<KVector> w;
  for (int k = 0; k < 3; ++k) {
    double a = k * pi / 3.0;
    w.push_back(KVector(Field::Real, {std::cos(a), std::sin(a)}));
  }
  return w;
}

std::vector<KVector> build_r3() {
  // six icosahedral diagonals
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + g * g);
  std::vector<KVector> w;
  for (double sign : {1.0, -1.0}) {
    w.push_back(KVector(Field::Real, {s, sign * g * s, 0.0}));
    w.push_back(KVector(Field::Real, {0.0, s, sign * g * s}));
    w.push_back(KVector(Field::Real, {sign * g * s, 0.0, s}));
  }
  return w;
}

std::vector<KVector> build_r7() {
  // 28 vectors of R^8 with two +3 and six -1 entries live in the hyperplane
  // sum x = 0; a Householder reflection swapping e_1 with the normalized
  // all-ones vector carries that hyperplane onto 0 x R^7.
  const double s = 1.0 / std::sqrt(24.0);
  std::vector<std::vector<double>> raw;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      std::vector<double> v(8, -s);
      v[static_cast<std::size_t>(a)] = 3.0 * s;
      v[static_cast<std::size_t>(b)] = 3.0 * s;
      raw.push_back(std::move(v));
    }

  std::vector<double> u(8, 1.0 / std::sqrt(8.0));
  u[0] -= 1.0;
  double un = 0.0;
  for (double x : u) un += x * x;
  un = std::sqrt(un);
  for (double& x : u) x /= un;

  std::vector<KVector> w;
  for (const auto& v : raw) {
    double dot = 0.0;
    for (int i = 0; i < 8; ++i) dot += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    std::vector<cplx> img(7);
    for (int i = 1; i < 8; ++i)
      img[static_cast<std::size_t>(i - 1)] =
          v[static_cast<std::size_t>(i)] - 2.0 * dot * u[static_cast<std::size_t>(i)];
    w.push_back(KVector(Field::Real, std::move(img)));
  }
  return w;
}

std::vector<KVector> build_c2() {
  const double r = 1.0 / std::sqrt(3.0);
  const double q = std::sqrt(2.0);
  const cplx omega = std::polar(1.0, 2.0 * pi / 3.0);
  std::vector<KVector> w;
  w.push_back(KVector(Field::Complex, {cplx(1.0, 0.0), cplx(0.0, 0.0)}));
  w.push_back(KVector(Field::Complex, {cplx(r, 0.0), r * q}));
  w.push_back(KVector(Field::Complex, {cplx(r, 0.0), r * q * omega}));
  w.push_back(KVector(Field::Complex, {cplx(r, 0.0), r * q * omega * omega}));
  return w;
}

std::vector<KVector> build_c3() {
  // Hesse configuration; phases chosen so the first nonzero coordinate is
  // real positive.
  const double s = 1.0 / std::sqrt(2.0);
  const cplx omega = std::polar(1.0, 2.0 * pi / 3.0);
  auto pw = [&](int k) {
    k = ((k % 3) + 3) % 3;
    cplx p(1.0, 0.0);
    for (int i = 0; i < k; ++i) p *= omega;
    return p;
  };
  std::vector<KVector> w;
  for (int k = 0; k < 3; ++k)
    w.push_back(KVector(Field::Complex, {cplx(0.0, 0.0), cplx(s, 0.0), -s * pw(k)}));
  for (int k = 0; k < 3; ++k)
    w.push_back(KVector(Field::Complex, {cplx(s, 0.0), -s * pw(k), cplx(0.0, 0.0)}));
  for (int k = 0; k < 3; ++k)
    w.push_back(KVector(Field::Complex, {cplx(s, 0.0), cplx(0.0, 0.0), -s * pw(-k)}));
  return w;
}

}  // namespace

MaximalETF build_maximal_etf(Field field, int n, const ToleranceConfig& tol) {
  std::vector<KVector> w;
  if (field == Field::Real && n == 2) w = build_r2();
  else if (field == Field::Real && n == 3) w = build_r3();
  else if (field == Field::Real && n == 7) w = build_r7();
  else if (field == Field::Complex && n == 2) w = build_c2();
  else if (field == Field::Complex && n == 3) w = build_c3();
  else
    fail(Errc::UnsupportedDimension,
         std::string("no catalogued maximal ETF for (") + field_name(field) + "," + std::to_string(n) + ")");

  MaximalETF etf{field, n, std::move(w), welch_angle(field, n)};

  EtfReport rep = verify_etf(etf.vectors);
  if (!rep.is_maximal || rep.unit_residual > tol.identity_tol ||
      rep.angle_spread > tol.identity_tol || std::abs(rep.angle_value - etf.angle) > tol.identity_tol ||
      rep.tightness_residual > tol.residual_tol)
    fail(Errc::NumericalFailure, "catalogued ETF failed self-verification");
  return etf;
}

EtfReport verify_etf(const std::vector<KVector>& vectors) {
  if (vectors.size() < 2) fail(Errc::DimensionMismatch, "verify_etf needs at least two vectors");
  const int n = vectors[0].dim();
  const Field field = vectors[0].field;
  for (const KVector& v : vectors) {
    if (v.dim() != n) fail(Errc::DimensionMismatch, "verify_etf: vectors of unequal dimension");
    if (v.field != field) fail(Errc::FieldMismatch, "verify_etf: vectors over different fields");
  }
  const int N = static_cast<int>(vectors.size());

  EtfReport rep;
  for (const KVector& v : vectors) rep.unit_residual = std::max(rep.unit_residual, std::abs(norm(v) - 1.0));

  double lo = 0.0, hi = 0.0, sum = 0.0;
  bool first = true;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double a = std::abs(inner(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]));
      sum += a;
      if (first) {
        lo = hi = a;
        first = false;
      } else {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
    }
  rep.angle_value = sum / (N * (N - 1) / 2.0);
  rep.angle_spread = hi - lo;

  KMatrix s(field, n, n);
  for (const KVector& v : vectors) add_outer(s, 1.0, v);
  for (int i = 0; i < n; ++i) s(i, i) -= static_cast<double>(N) / n;
  rep.tightness_residual = operator_norm(s);

  rep.is_maximal = (N == gerzon_bound(field, n));
  return rep;
}

double sign_reconstruction_residual(const MaximalETF& etf, int j) {
  if (j < 0 || j >= etf.d()) fail(Errc::IndexOutOfRange, "sign_reconstruction_residual index");
  const double c = rescale_constant(etf.field, etf.n);
  const KVector& wj = etf.vectors[static_cast<std::size_t>(j)];
  KVector acc = KVector::zeros(etf.field, etf.n);
  for (const KVector& wi : etf.vectors) {
    cplx ip = inner(wj, wi);
    if (std::abs(ip) == 0.0)
      fail(Errc::NumericalFailure, "sign reconstruction hit a vanishing inner product");
    axpy(sgn(ip), wi, acc);
  }
  return norm(sub(wj, scale(c, acc)));
}

WeightedFrame to_unit_tight_frame(const MaximalETF& etf) {
  const int d = etf.d();
  const double vs = std::sqrt(static_cast<double>(etf.n) / d);
  WeightedFrame f;
  f.field = etf.field;
  f.n = etf.n;
  for (const KVector& w : etf.vectors) f.vectors.push_back(scale(vs, w));
  f.weights.assign(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
  return f;
}

WeightedFrame replicate(const MaximalETF& etf, int k) {
  if (k < 1) fail(Errc::InvalidArgument, "replicate needs k >= 1");
  const int d = etf.d();
  const double vs = std::sqrt(static_cast<double>(etf.n) / (static_cast<double>(k) * d));
  WeightedFrame f;
  f.field = etf.field;
  f.n = etf.n;
  for (const KVector& w : etf.vectors)
    for (int r = 0; r < k; ++r) f.vectors.push_back(scale(vs, w));
  f.weights.assign(static_cast<std::size_t>(k * d), 1.0 / std::sqrt(static_cast<double>(k) * d));
  return f;
}

}  // namespace maxproj
