#pragma once

#include <optional>
#include <vector>

#include "maxproj/etf.hpp"

namespace maxproj {

/// Result of testing the four equality conditions of the frame-objective
/// bound. groups[0] collects the zero vectors (A_0); the remaining groups are
/// the direction classes A_1..A_m.
struct EqualityReport {
  bool condition1_ok = false;  // t_i = 0 exactly on the zero vectors
  bool condition2_ok = false;  // directions form a maximal ETF
  bool condition3_ok = false;  // per-direction weight mass 1/d
  bool condition4_ok = false;  // ||u_i|| = sqrt(n) t_i
  std::vector<std::vector<int>> groups;
  std::vector<double> group_sums;  // sum of t_i^2 over each direction group
  std::optional<MaximalETF> matched_etf;
  double residual1 = 0.0;
  double residual2 = 0.0;
  double residual3 = 0.0;
  double residual4 = 0.0;
  double phi = 0.0;    // objective of the frame
  double delta = 0.0;  // the bound delta_K(n)

  bool all_ok() const { return condition1_ok && condition2_ok && condition3_ok && condition4_ok; }
};

/// Decides whether a tight frame attains the objective bound, by checking the
/// four equality conditions. Weights below residual_tol paired with nonzero
/// vectors count as condition-1 violations.
EqualityReport check_equality_conditions(const WeightedFrame& f, const ToleranceConfig& tol = {});

/// Builds a frame satisfying all four equality conditions: group j carries
/// multiplicities[j] copies of ETF vector j with the given intra-group
/// weights, each group summing to 1/d in squared weight.
WeightedFrame build_equality_config(const MaximalETF& etf, const std::vector<int>& multiplicities,
                                    const std::vector<std::vector<double>>& intra_weights,
                                    const ToleranceConfig& tol = {});

/// || u_j - (n t_j / delta) sum_i t_i sgn<u_j,u_i> u_i || for a frame passing
/// the equality conditions. Index 0-based.
double weighted_reconstruction_residual(const WeightedFrame& f, int j, const ToleranceConfig& tol = {});

}  // namespace maxproj
