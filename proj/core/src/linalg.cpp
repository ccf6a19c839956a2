#include "maxproj/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace maxproj {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotTight: return "NotTight";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::ConditionsNotMet: return "ConditionsNotMet";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::Undetermined: return "Undetermined";
    case Errc::ComplexUnsupported: return "ComplexUnsupported";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::CoefficientOutOfRange: return "CoefficientOutOfRange";
    case Errc::SingularTransform: return "SingularTransform";
    case Errc::NoStrictGap: return "NoStrictGap";
    case Errc::SamplingExhausted: return "SamplingExhausted";
    case Errc::ZeroFrame: return "ZeroFrame";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

namespace {

void check_real(Field f, const std::vector<cplx>& entries) {
  if (f != Field::Real) return;
  for (const cplx& z : entries)
    if (z.imag() != 0.0) fail(Errc::FieldMismatch, "real-tagged object with nonzero imaginary part");
}

}  // namespace

KVector::KVector(Field f, std::vector<cplx> e) : field(f), entries(std::move(e)) {
  if (entries.empty()) fail(Errc::InvalidDimension, "vector must have positive dimension");
  check_real(field, entries);
}

KVector KVector::zeros(Field f, int dim) {
  if (dim < 1) fail(Errc::InvalidDimension, "vector must have positive dimension");
  KVector v;
  v.field = f;
  v.entries.assign(static_cast<std::size_t>(dim), cplx(0.0, 0.0));
  return v;
}

KVector KVector::unit(Field f, int dim, int k) {
  KVector v = zeros(f, dim);
  if (k < 0 || k >= dim) fail(Errc::IndexOutOfRange, "unit vector index");
  v[k] = 1.0;
  return v;
}

KMatrix::KMatrix(Field f, int r, int c) : field(f), rows(r), cols(c) {
  if (r < 1 || c < 1) fail(Errc::InvalidDimension, "matrix dimensions must be positive");
  data.assign(static_cast<std::size_t>(r) * c, cplx(0.0, 0.0));
}

KMatrix KMatrix::identity(Field f, int n) {
  KMatrix a(f, n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

KMatrix KMatrix::from_columns(const std::vector<KVector>& cols) {
  if (cols.empty()) fail(Errc::InvalidArgument, "from_columns needs at least one column");
  const int m = cols[0].dim();
  KMatrix a(cols[0].field, m, static_cast<int>(cols.size()));
  for (int j = 0; j < a.cols; ++j) {
    if (cols[static_cast<std::size_t>(j)].dim() != m)
      fail(Errc::DimensionMismatch, "columns of unequal length");
    if (cols[static_cast<std::size_t>(j)].field != a.field)
      fail(Errc::FieldMismatch, "columns over different fields");
    for (int i = 0; i < m; ++i) a(i, j) = cols[static_cast<std::size_t>(j)][i];
  }
  return a;
}

KVector KMatrix::column(int j) const {
  if (j < 0 || j >= cols) fail(Errc::IndexOutOfRange, "column index");
  KVector v = KVector::zeros(field, rows);
  for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

KVector KMatrix::row_vector(int i) const {
  if (i < 0 || i >= rows) fail(Errc::IndexOutOfRange, "row index");
  KVector v = KVector::zeros(field, cols);
  for (int j = 0; j < cols; ++j) v[j] = (*this)(i, j);
  return v;
}

cplx inner(const KVector& x, const KVector& y) {
  if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "inner product of unequal dimensions");
  if (x.field != y.field) fail(Errc::FieldMismatch, "inner product across fields");
  cplx s(0.0, 0.0);
  for (int i = 0; i < x.dim(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm(const KVector& x) {
  double s = 0.0;
  for (const cplx& z : x.entries) s += std::norm(z);
  return std::sqrt(s);
}

KVector add(const KVector& x, const KVector& y) {
  if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "vector add");
  KVector r = x;
  for (int i = 0; i < r.dim(); ++i) r[i] += y[i];
  return r;
}

KVector sub(const KVector& x, const KVector& y) {
  if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "vector sub");
  KVector r = x;
  for (int i = 0; i < r.dim(); ++i) r[i] -= y[i];
  return r;
}

KVector scale(cplx a, const KVector& x) {
  KVector r = x;
  if (r.field == Field::Real && a.imag() != 0.0) r.field = Field::Complex;
  for (cplx& z : r.entries) z *= a;
  return r;
}

void axpy(cplx a, const KVector& x, KVector& y) {
  if (x.dim() != y.dim()) fail(Errc::DimensionMismatch, "axpy");
  for (int i = 0; i < y.dim(); ++i) y[i] += a * x[i];
}

KMatrix adjoint(const KMatrix& a) {
  KMatrix b(a.field, a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) b(j, i) = std::conj(a(i, j));
  return b;
}

KMatrix matmul(const KMatrix& a, const KMatrix& b) {
  if (a.cols != b.rows) fail(Errc::DimensionMismatch, "matmul");
  if (a.field != b.field) fail(Errc::FieldMismatch, "matmul across fields");
  KMatrix c(a.field, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

KVector matvec(const KMatrix& a, const KVector& x) {
  if (a.cols != x.dim()) fail(Errc::DimensionMismatch, "matvec");
  KVector y = KVector::zeros(a.field == Field::Complex || x.field == Field::Complex
                                 ? Field::Complex
                                 : Field::Real,
                             a.rows);
  for (int i = 0; i < a.rows; ++i) {
    cplx s(0.0, 0.0);
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

KMatrix add(const KMatrix& a, const KMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) fail(Errc::DimensionMismatch, "matrix add");
  KMatrix c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  return c;
}

KMatrix sub(const KMatrix& a, const KMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) fail(Errc::DimensionMismatch, "matrix sub");
  KMatrix c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

KMatrix scale(cplx s, const KMatrix& a) {
  KMatrix c = a;
  if (c.field == Field::Real && s.imag() != 0.0) c.field = Field::Complex;
  for (cplx& z : c.data) z *= s;
  return c;
}

void add_outer(KMatrix& a, cplx s, const KVector& x) {
  if (a.rows != x.dim() || a.cols != x.dim()) fail(Errc::DimensionMismatch, "add_outer");
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) a(i, j) += s * x[i] * std::conj(x[j]);
}

double frobenius_norm(const KMatrix& a) {
  double s = 0.0;
  for (const cplx& z : a.data) s += std::norm(z);
  return std::sqrt(s);
}

double operator_norm(const KMatrix& a) {
  // power iteration on a^* a; value accuracy is what matters, not the vector
  const int n = a.cols;
  double amax = 0.0;
  for (const cplx& z : a.data) amax = std::max(amax, std::abs(z));
  if (amax == 0.0) return 0.0;

  KMatrix b = matmul(adjoint(a), a);
  KVector v = KVector::zeros(b.field, n);
  for (int i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.01 * i, 0.0);
  double nv = norm(v);
  for (int i = 0; i < n; ++i) v[i] /= nv;

  double lambda = 0.0;
  for (int it = 0; it < 600; ++it) {
    KVector w = matvec(b, v);
    double nw = norm(w);
    if (nw == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) w[i] /= nw;
    double next = std::real(inner(matvec(b, w), w));
    v = w;
    if (it > 4 && std::abs(next - lambda) <= 1e-16 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

namespace {

struct Householder {
  std::vector<cplx> v;  // reflector, unit norm, acts on trailing indices
  int offset = 0;
};

// Reduce a in place to upper triangular, returning the reflectors.
std::vector<Householder> householder_reduce(KMatrix& a) {
  const int m = a.rows, n = a.cols;
  std::vector<Householder> hs;
  for (int k = 0; k < std::min(m, n); ++k) {
    double xnorm = 0.0;
    for (int i = k; i < m; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;

    cplx alpha = -sgn(a(k, k)) * xnorm;
    std::vector<cplx> v(static_cast<std::size_t>(m - k));
    for (int i = k; i < m; ++i) v[static_cast<std::size_t>(i - k)] = a(i, k);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (const cplx& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    if (vnorm < 1e-300) continue;
    for (cplx& z : v) z /= vnorm;

    // apply I - 2 v v^* to trailing block
    for (int j = k; j < n; ++j) {
      cplx dot(0.0, 0.0);
      for (int i = k; i < m; ++i) dot += std::conj(v[static_cast<std::size_t>(i - k)]) * a(i, j);
      dot *= 2.0;
      for (int i = k; i < m; ++i) a(i, j) -= dot * v[static_cast<std::size_t>(i - k)];
    }
    a(k, k) = alpha;
    for (int i = k + 1; i < m; ++i) a(i, k) = 0.0;
    hs.push_back({std::move(v), k});
  }
  return hs;
}

void apply_reflectors_to_identity(const std::vector<Householder>& hs, KMatrix& q) {
  // q starts as identity (m x m); build Q = H_0 H_1 ... H_last
  const int m = q.rows;
  for (auto it = hs.rbegin(); it != hs.rend(); ++it) {
    const int k = it->offset;
    for (int j = 0; j < q.cols; ++j) {
      cplx dot(0.0, 0.0);
      for (int i = k; i < m; ++i) dot += std::conj(it->v[static_cast<std::size_t>(i - k)]) * q(i, j);
      dot *= 2.0;
      for (int i = k; i < m; ++i) q(i, j) -= dot * it->v[static_cast<std::size_t>(i - k)];
    }
  }
}

void fix_r_diagonal(KMatrix& q, KMatrix& r) {
  // scale so diag(R) is real nonnegative; keeps a = q r
  const int n = r.rows;
  for (int i = 0; i < n; ++i) {
    cplx d = sgn(r(i, i));
    if (d == cplx(1.0, 0.0)) continue;
    cplx dc = std::conj(d);
    for (int j = i; j < r.cols; ++j) r(i, j) *= dc;
    for (int k = 0; k < q.rows; ++k) q(k, i) *= d;
  }
}

}  // namespace

QR qr_thin(const KMatrix& a) {
  if (a.rows < a.cols) fail(Errc::DimensionMismatch, "qr_thin expects rows >= cols");
  KMatrix work = a;
  auto hs = householder_reduce(work);
  KMatrix qfull = KMatrix::identity(a.field, a.rows);
  apply_reflectors_to_identity(hs, qfull);

  QR out;
  out.q = KMatrix(a.field, a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out.q(i, j) = qfull(i, j);
  out.r = KMatrix(a.field, a.cols, a.cols);
  for (int i = 0; i < a.cols; ++i)
    for (int j = i; j < a.cols; ++j) out.r(i, j) = work(i, j);
  fix_r_diagonal(out.q, out.r);
  return out;
}

QR qr_full(const KMatrix& a) {
  KMatrix work = a;
  auto hs = householder_reduce(work);
  QR out;
  out.q = KMatrix::identity(a.field, a.rows);
  apply_reflectors_to_identity(hs, out.q);
  out.r = KMatrix(a.field, std::min(a.rows, a.cols), a.cols);
  for (int i = 0; i < out.r.rows; ++i)
    for (int j = i; j < a.cols; ++j) out.r(i, j) = work(i, j);
  return out;
}

int rank(const KMatrix& a, double rel_tol) {
  // greedy column-pivoted Householder elimination
  KMatrix work = a;
  const int m = work.rows, n = work.cols;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;

  int r = 0;
  double first_pivot = 0.0;
  for (int k = 0; k < std::min(m, n); ++k) {
    int best = k;
    double best_norm = -1.0;
    for (int j = k; j < n; ++j) {
      double s = 0.0;
      for (int i = k; i < m; ++i) s += std::norm(work(i, j));
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    best_norm = std::sqrt(std::max(0.0, best_norm));
    if (k == 0) first_pivot = best_norm;
    if (best_norm <= rel_tol * std::max(first_pivot, 1e-300)) break;
    if (best != k)
      for (int i = 0; i < m; ++i) std::swap(work(i, k), work(i, best));

    cplx alpha = -sgn(work(k, k)) * best_norm;
    std::vector<cplx> v(static_cast<std::size_t>(m - k));
    for (int i = k; i < m; ++i) v[static_cast<std::size_t>(i - k)] = work(i, k);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (const cplx& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    if (vnorm >= 1e-300) {
      for (cplx& z : v) z /= vnorm;
      for (int j = k; j < n; ++j) {
        cplx dot(0.0, 0.0);
        for (int i = k; i < m; ++i) dot += std::conj(v[static_cast<std::size_t>(i - k)]) * work(i, j);
        dot *= 2.0;
        for (int i = k; i < m; ++i) work(i, j) -= dot * v[static_cast<std::size_t>(i - k)];
      }
    }
    ++r;
  }
  return r;
}

KVector lstsq(const KMatrix& a, const KVector& b) {
  if (a.rows != b.dim()) fail(Errc::DimensionMismatch, "lstsq");
  QR f = qr_thin(a);
  KVector rhs = matvec(adjoint(f.q), b);
  // back substitution
  KVector x = KVector::zeros(a.field == Field::Complex || b.field == Field::Complex
                                 ? Field::Complex
                                 : Field::Real,
                             a.cols);
  for (int i = a.cols - 1; i >= 0; --i) {
    cplx s = rhs[i];
    for (int j = i + 1; j < a.cols; ++j) s -= f.r(i, j) * x[j];
    if (std::abs(f.r(i, i)) < 1e-300) fail(Errc::RankDeficient, "lstsq on rank-deficient matrix");
    x[i] = s / f.r(i, i);
  }
  return x;
}

KMatrix lstsq(const KMatrix& a, const KMatrix& b) {
  if (a.rows != b.rows) fail(Errc::DimensionMismatch, "lstsq");
  KMatrix x(b.field == Field::Complex || a.field == Field::Complex ? Field::Complex : Field::Real,
            a.cols, b.cols);
  for (int j = 0; j < b.cols; ++j) {
    KVector xi = lstsq(a, b.column(j));
    for (int i = 0; i < a.cols; ++i) x(i, j) = xi[i];
  }
  return x;
}

KVector project_onto_range(const KMatrix& a, const KVector& b) {
  QR f = qr_thin(a);
  KVector c = matvec(adjoint(f.q), b);
  return matvec(f.q, c);
}

cplx trace(const KMatrix& a) {
  if (a.rows != a.cols) fail(Errc::DimensionMismatch, "trace of non-square matrix");
  cplx s(0.0, 0.0);
  for (int i = 0; i < a.rows; ++i) s += a(i, i);
  return s;
}

}  // namespace maxproj
