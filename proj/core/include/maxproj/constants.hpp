#pragma once

#include "maxproj/scalar.hpp"

namespace maxproj {

/// Gerzon bound d_K(n): largest possible cardinality of an equiangular set of
/// vectors in K^n. n(n+1)/2 over R, n^2 over C.
int gerzon_bound(Field field, int n);

/// Common angle phi_K(n) of a maximal equiangular set: 1/sqrt(n+2) over R,
/// 1/sqrt(n+1) over C.
double welch_angle(Field field, int n);

/// delta_K(n), the sharp upper bound for the weighted frame objective (and the
/// maximal projection constant where a maximal ETF exists).
double delta_bound(Field field, int n);

/// n / (d_K(n) * delta_K(n)); the zonotope rescaling constant.
double rescale_constant(Field field, int n);

/// (d - n + n*phi) / (d*delta*phi); identically 1 for n >= 2.
double sign_reconstruction_identity(Field field, int n);

/// 1/(2 phi) + (n/(2 phi)) (phi^2 - (1-phi)^2/d); identically delta_K(n).
double bound_closing_expression(Field field, int n);

}  // namespace maxproj
