#pragma once

#include <complex>

#include "maxproj/error.hpp"

namespace maxproj {

using cplx = std::complex<double>;

/// The scalar field a vector space lives over. Every object in the library
/// carries exactly one tag and operations refuse to mix them.
enum class Field { Real, Complex };

inline const char* field_name(Field f) { return f == Field::Real ? "R" : "C"; }

/// sgn(z): the unique modulus-1 scalar with z = sgn(z)|z|. Returns 1 at z = 0;
/// callers that must not hit the origin assert that themselves.
inline cplx sgn(cplx z) {
  double m = std::abs(z);
  if (m == 0.0) return cplx(1.0, 0.0);
  return z / m;
}

inline double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct ToleranceConfig {
  double residual_tol = 1e-9;
  double identity_tol = 1e-12;
  double lp_tol = 1e-9;

  void validate() const {
    if (residual_tol <= 0 || identity_tol <= 0 || lp_tol <= 0)
      fail(Errc::InvalidArgument, "tolerances must be strictly positive");
  }
};

}  // namespace maxproj
