#pragma once

#include <cstddef>
#include <vector>

#include "maxproj/scalar.hpp"

namespace maxproj {

/// Dense vector over R or C. Real-tagged vectors keep exactly-zero imaginary
/// parts; the constructors enforce it.
struct KVector {
  Field field = Field::Real;
  std::vector<cplx> entries;

  KVector() = default;
  KVector(Field f, std::vector<cplx> e);
  static KVector zeros(Field f, int dim);
  static KVector unit(Field f, int dim, int k);

  int dim() const { return static_cast<int>(entries.size()); }
  cplx operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
  cplx& operator[](int i) { return entries[static_cast<std::size_t>(i)]; }
};

/// Dense row-major matrix over R or C.
struct KMatrix {
  Field field = Field::Real;
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;

  KMatrix() = default;
  KMatrix(Field f, int r, int c);
  static KMatrix identity(Field f, int n);
  static KMatrix from_columns(const std::vector<KVector>& cols);

  cplx operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  cplx& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }

  KVector column(int j) const;
  KVector row_vector(int i) const;
};

cplx inner(const KVector& x, const KVector& y);  // linear in x, conjugate-linear in y
double norm(const KVector& x);
KVector add(const KVector& x, const KVector& y);
KVector sub(const KVector& x, const KVector& y);
KVector scale(cplx a, const KVector& x);
void axpy(cplx a, const KVector& x, KVector& y);  // y += a*x

KMatrix adjoint(const KMatrix& a);
KMatrix matmul(const KMatrix& a, const KMatrix& b);
KVector matvec(const KMatrix& a, const KVector& x);
KMatrix add(const KMatrix& a, const KMatrix& b);
KMatrix sub(const KMatrix& a, const KMatrix& b);
KMatrix scale(cplx s, const KMatrix& a);
/// a += s * x x^*
void add_outer(KMatrix& a, cplx s, const KVector& x);

double frobenius_norm(const KMatrix& a);
/// Spectral norm, via power iteration on a^* a. Deterministic.
double operator_norm(const KMatrix& a);

struct QR {
  KMatrix q;  // m x n, orthonormal columns
  KMatrix r;  // n x n, upper triangular, real nonnegative diagonal
};

/// Thin Householder QR with the diagonal of R fixed real nonnegative, so the
/// factorization is unique for full-rank input (used as a retraction).
QR qr_thin(const KMatrix& a);

/// Full QR: q is m x m unitary. Columns n..m-1 of q span the orthogonal
/// complement of the column space when a has full column rank.
QR qr_full(const KMatrix& a);

/// Numerical rank via column-pivoted QR, threshold rel_tol * largest pivot.
int rank(const KMatrix& a, double rel_tol = 1e-10);

/// Least squares min ||a x - b||, a with full column rank (m >= n).
KVector lstsq(const KMatrix& a, const KVector& b);
/// Column-wise least squares: minimizer X of ||a X - B||_F.
KMatrix lstsq(const KMatrix& a, const KMatrix& b);

/// Orthogonal projection of b onto the column space of a.
KVector project_onto_range(const KMatrix& a, const KVector& b);

cplx trace(const KMatrix& a);

}  // namespace maxproj
