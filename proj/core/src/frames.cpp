#include "maxproj/frames.hpp"

#include <cmath>

namespace maxproj {

void WeightedFrame::validate() const {
  if (n < 1) fail(Errc::InvalidDimension, "frame dimension must be positive");
  if (vectors.size() != weights.size())
    fail(Errc::DimensionMismatch, "frame has differing vector and weight counts");
  if (vectors.empty()) fail(Errc::InvalidArgument, "frame must contain at least one vector");
  for (const KVector& u : vectors) {
    if (u.dim() != n) fail(Errc::DimensionMismatch, "frame vector of wrong dimension");
    if (u.field != field) fail(Errc::FieldMismatch, "frame vector over wrong field");
  }
}

double tightness_residual(const WeightedFrame& f, const ToleranceConfig&) {
  f.validate();
  KMatrix s(f.field, f.n, f.n);
  for (const KVector& u : f.vectors) add_outer(s, 1.0, u);
  for (int i = 0; i < f.n; ++i) s(i, i) -= 1.0;
  return operator_norm(s);
}

double trace_identity_residual(const WeightedFrame& f, const ToleranceConfig& tol) {
  if (tightness_residual(f, tol) >= tol.residual_tol)
    fail(Errc::NotTight, "trace identity requires a tight frame");
  double s = 0.0;
  for (const KVector& u : f.vectors) {
    double nu = norm(u);
    s += nu * nu;
  }
  return std::abs(s - f.n);
}

double parseval_residual(const WeightedFrame& f, const KVector& x, const ToleranceConfig& tol) {
  if (x.dim() != f.n) fail(Errc::DimensionMismatch, "parseval_residual: x of wrong dimension");
  if (tightness_residual(f, tol) >= tol.residual_tol)
    fail(Errc::NotTight, "parseval identity requires a tight frame");
  double s = 0.0;
  for (const KVector& u : f.vectors) s += std::norm(inner(x, u));
  const double nx = norm(x);
  return std::abs(nx * nx - s);
}

double objective_phi(const WeightedFrame& f, const ToleranceConfig& tol) {
  f.validate();
  double tnorm2 = 0.0;
  for (double t : f.weights) {
    if (t < 0.0) fail(Errc::InvalidWeights, "negative weight");
    tnorm2 += t * t;
  }
  if (std::abs(std::sqrt(tnorm2) - 1.0) > tol.identity_tol)
    fail(Errc::InvalidWeights, "weights must have unit Euclidean norm");

  const int N = f.size();
  double phi = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      phi += f.weights[static_cast<std::size_t>(i)] * f.weights[static_cast<std::size_t>(j)] *
             std::abs(inner(f.vectors[static_cast<std::size_t>(i)], f.vectors[static_cast<std::size_t>(j)]));
  return phi;
}

KMatrix modulus_gram(const std::vector<KVector>& vectors) {
  if (vectors.empty()) fail(Errc::InvalidArgument, "modulus_gram of empty set");
  const int N = static_cast<int>(vectors.size());
  KMatrix m(Field::Real, N, N);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      double v = std::abs(inner(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

}  // namespace maxproj
