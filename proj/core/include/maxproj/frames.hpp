#pragma once

#include <vector>

#include "maxproj/linalg.hpp"

namespace maxproj {

/// Finitely many vectors u_1..u_N in K^n with nonnegative weights t. Tightness
/// is a checked property, never assumed.
struct WeightedFrame {
  Field field = Field::Real;
  int n = 0;
  std::vector<KVector> vectors;
  std::vector<double> weights;

  int size() const { return static_cast<int>(vectors.size()); }
  void validate() const;
};

/// Operator norm of sum u_i u_i^* - I_n (zero iff tight frame with constant 1).
double tightness_residual(const WeightedFrame& f, const ToleranceConfig& tol = {});

/// |sum ||u_i||^2 - n| for a tight frame.
double trace_identity_residual(const WeightedFrame& f, const ToleranceConfig& tol = {});

/// | ||x||^2 - sum |<x,u_i>|^2 | for a tight frame.
double parseval_residual(const WeightedFrame& f, const KVector& x, const ToleranceConfig& tol = {});

/// The weighted frame objective: sum_{i,j} t_i t_j |<u_i,u_j>|.
double objective_phi(const WeightedFrame& f, const ToleranceConfig& tol = {});

/// Entrywise modulus of the Gram matrix, M_ij = |<u_i,u_j>|.
KMatrix modulus_gram(const std::vector<KVector>& vectors);

}  // namespace maxproj
