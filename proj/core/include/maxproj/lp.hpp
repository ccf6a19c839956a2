#pragma once

#include <limits>
#include <string>
#include <vector>

#include "maxproj/scalar.hpp"

namespace maxproj {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEq, Equal, GreaterEq };

/// Dense linear program: optimize c^T x subject to row constraints and
/// per-variable bounds (-inf / +inf allowed).
struct LinearProgram {
  struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LessEq;
    double rhs = 0.0;
  };

  int nvars = 0;
  bool maximize = false;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;  // default 0
  std::vector<double> upper;  // default +inf

  static LinearProgram make(int nvars, bool maximize = false);
  int add_row(std::vector<double> coeffs, RowSense sense, double rhs);
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> x;
  double objective = 0.0;  // in the requested sense
  /// Dual multipliers, one per input row (convention: for the minimization
  /// form, <= rows have y <= 0, >= rows y >= 0; dual objective is y^T b when
  /// all finite variable bounds are zero lower bounds).
  std::vector<double> dual;
  double dual_objective = 0.0;
  /// On Infeasible: nonnegative multipliers over ge_expansion(p) rows with
  /// lambda^T G ~ 0 and lambda^T h > 0.
  std::vector<double> farkas;
  double primal_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string note;
};

LpResult solve_lp(const LinearProgram& p, const ToleranceConfig& tol = {});

/// Same program, solved by a Mehrotra predictor-corrector interior-point
/// method. Intended for large feasible instances where the tableau simplex
/// grinds on degeneracy; reports duals and the gap but no Farkas certificate.
LpResult solve_lp_interior(const LinearProgram& p, const ToleranceConfig& tol = {});

/// The canonical all->= expansion (rows, then two rows per equality, then
/// finite bounds) used to express and verify Farkas certificates.
struct GeForm {
  std::vector<std::vector<double>> g;
  std::vector<double> h;
};
GeForm ge_expansion(const LinearProgram& p);

/// Debug dump in a plain-text tableau format.
std::string lp_to_text(const LinearProgram& p);

}  // namespace maxproj
