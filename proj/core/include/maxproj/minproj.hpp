#pragma once

#include "maxproj/geometry.hpp"

namespace maxproj {

/// X = range(V) inside l_inf^N: column span of the N x n matrix V under the
/// sup norm. Row j of V is the conjugated j-th functional, so (Vc)_j = <c,f_j>.
struct SubspaceOfLinf {
  Field field = Field::Real;
  int N = 0;
  int n = 0;
  KMatrix basis;  // N x n, rank n

  void validate() const;
};

struct CMOperator {
  KMatrix e;  // N x N
};

/// Isometric embedding of the ball's normed space into l_inf^N.
SubspaceOfLinf embed_norm(const DualBallSpec& ball);

struct MinProjResult {
  double lambda_rel = 0.0;
  KMatrix projection;  // N x N, P = V M
  double idempotency_residual = 0.0;
  double invariance_residual = 0.0;
  int lp_iterations = 0;
};

/// Exact relative projection constant of X in l_inf^N by linear programming
/// over M with M V = I, P = V M, minimizing the max absolute row sum. Real
/// scalars only.
MinProjResult min_projection_lp(const SubspaceOfLinf& s, const ToleranceConfig& tol = {});

struct CMReport {
  double invariance_residual = 0.0;  // max distance of E(column of V) from span V
  cplx trace_on_X{0.0, 0.0};
  double lstsq_residual = 0.0;  // ||E V - V M||_F of the least-squares fit
  double column_sum = 0.0;      // sum_i max_j |E_ji|
};

CMReport cm_verify(const CMOperator& e, const SubspaceOfLinf& s);

struct CMBuildResult {
  CMOperator op;
  SubspaceOfLinf space;
};

/// The extremal Chalmers-Metcalf construction: functionals are the ETF
/// vectors plus m zonotope points sum_k a_jk w_k with |a_jk| <= n/(d delta);
/// the operator acts as (delta/n) id on the embedded space.
CMBuildResult cm_build(const MaximalETF& etf, const KMatrix* zonotope_coeffs = nullptr,
                       const ToleranceConfig& tol = {});

struct LambdaUpperReport {
  double lp_value = 0.0;
  double delta_upper = 0.0;
  double kadec_snobar = 0.0;
  double certified_upper = 0.0;  // min of the two bounds
};

LambdaUpperReport lambda_upper_report(const SubspaceOfLinf& s, const ToleranceConfig& tol = {});

}  // namespace maxproj
