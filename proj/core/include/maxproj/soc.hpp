#pragma once

#include <vector>

#include "maxproj/scalar.hpp"

namespace maxproj {

/// Second-order-cone feasibility problem over real variables: linear
/// equalities A v = b plus cone blocks ||z_k|| <= t_k. A block with no z
/// indices just pins t_k >= 0. Variables outside every block are free.
struct SocFeasibility {
  struct Cone {
    int t_index = -1;
    std::vector<int> z_indices;
  };

  int nvars = 0;
  std::vector<Cone> cones;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;

  static SocFeasibility make(int nvars);
  void add_cone(int t_index, std::vector<int> z_indices);
  void add_equality(std::vector<double> coeffs, double rhs);
  void validate() const;
};

enum class SocStatus { Feasible, Infeasible, Undetermined };

struct SocResult {
  SocStatus status = SocStatus::Undetermined;
  std::vector<double> witness;
  /// On Infeasible: unit vector phi with <phi,.> constant positive on the
  /// affine set and <= 0 on the cone product, phi = A^T eq_multipliers.
  std::vector<double> separator;
  std::vector<double> eq_multipliers;
  double margin = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

SocResult solve_soc_feasibility(const SocFeasibility& p, const ToleranceConfig& tol = {},
                                int max_iters = 100000);

}  // namespace maxproj
