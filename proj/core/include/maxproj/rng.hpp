#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "maxproj/linalg.hpp"

namespace maxproj {

/// Deterministic generator (splitmix64 + Box-Muller) so seeded runs reproduce
/// bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  cplx gaussian_scalar(Field f) {
    if (f == Field::Real) return cplx(gaussian(), 0.0);
    return cplx(gaussian(), gaussian());
  }

  KVector gaussian_vector(Field f, int dim) {
    KVector v = KVector::zeros(f, dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian_scalar(f);
    return v;
  }

  KVector sphere_vector(Field f, int dim) {
    KVector v = gaussian_vector(f, dim);
    double nv = norm(v);
    while (nv < 1e-12) {
      v = gaussian_vector(f, dim);
      nv = norm(v);
    }
    return scale(1.0 / nv, v);
  }

  KMatrix gaussian_matrix(Field f, int rows, int cols) {
    KMatrix a(f, rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = gaussian_scalar(f);
    return a;
  }

  /// Haar-ish random point on the Stiefel manifold (orthonormal columns).
  KMatrix stiefel_point(Field f, int rows, int cols) { return qr_thin(gaussian_matrix(f, rows, cols)).q; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace maxproj
