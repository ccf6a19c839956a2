#pragma once

#include <vector>

#include "maxproj/constants.hpp"
#include "maxproj/frames.hpp"

namespace maxproj {

/// An equiangular tight frame of the maximal cardinality d_K(n), with the
/// forced common angle phi_K(n).
struct MaximalETF {
  Field field = Field::Real;
  int n = 0;
  std::vector<KVector> vectors;  // d_K(n) unit vectors
  double angle = 0.0;            // phi_K(n)

  int d() const { return static_cast<int>(vectors.size()); }
};

struct EtfReport {
  double unit_residual = 0.0;       // max | ||w_i|| - 1 |
  double angle_value = 0.0;         // mean pairwise |<w_i,w_j>|
  double angle_spread = 0.0;        // max - min pairwise modulus
  double tightness_residual = 0.0;  // || sum w_i w_i^* - (N/n) I ||
  bool is_maximal = false;          // N == d_K(n)
};

/// Builds the catalogued maximal ETF. Supported: (R,2), (R,3), (R,7), (C,2),
/// (C,3). The output is certified against verify_etf before returning.
MaximalETF build_maximal_etf(Field field, int n, const ToleranceConfig& tol = {});

EtfReport verify_etf(const std::vector<KVector>& vectors);

/// || w_j - C sum_i sgn<w_j,w_i> w_i || with C = n/(d delta). Index 0-based.
double sign_reconstruction_residual(const MaximalETF& etf, int j);

/// Rescales to the tight frame with constant 1: u_i = sqrt(n/d) w_i,
/// t_i = 1/sqrt(d).
WeightedFrame to_unit_tight_frame(const MaximalETF& etf);

/// k copies of each ETF vector, rescaled to stay tight with constant 1; the
/// result attains the frame objective bound for N = k d.
WeightedFrame replicate(const MaximalETF& etf, int k);

}  // namespace maxproj
