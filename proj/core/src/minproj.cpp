#include "maxproj/minproj.hpp"

#include <algorithm>
#include <cmath>

namespace maxproj {

void SubspaceOfLinf::validate() const {
  if (n < 1 || N < n) fail(Errc::InvalidDimension, "subspace needs N >= n >= 1");
  if (basis.rows != N || basis.cols != n) fail(Errc::DimensionMismatch, "basis of wrong shape");
  if (rank(basis) < n) fail(Errc::RankDeficient, "basis does not have full column rank");
}

SubspaceOfLinf embed_norm(const DualBallSpec& ball) {
  ball.validate();
  SubspaceOfLinf s;
  s.field = ball.field;
  s.n = ball.n;
  s.N = static_cast<int>(ball.functionals.size());
  s.basis = KMatrix(ball.field, s.N, s.n);
  for (int j = 0; j < s.N; ++j)
    for (int i = 0; i < ball.n; ++i)
      s.basis(j, i) = std::conj(ball.functionals[static_cast<std::size_t>(j)][i]);
  return s;
}

namespace {

double max_abs_row_sum(const KMatrix& p) {
  double best = 0.0;
  for (int i = 0; i < p.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < p.cols; ++j) s += std::abs(p(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

MinProjResult min_projection_lp(const SubspaceOfLinf& s, const ToleranceConfig& tol) {
  s.validate();
  if (s.field != Field::Real)
    fail(Errc::ComplexUnsupported, "minimal projection LP is certified for real scalars only");

  const int N = s.N, n = s.n;
  // variables: M (n x N, free), pneg (N x N, >= 0), z
  const int m_off = 0;
  const int p_off = n * N;
  const int z_idx = n * N + N * N;
  LinearProgram lp = LinearProgram::make(z_idx + 1);
  for (int v = 0; v < n * N; ++v) lp.lower[static_cast<std::size_t>(v)] = -kInf;
  lp.objective[static_cast<std::size_t>(z_idx)] = 1.0;

  auto vr = [&](int j, int i) { return std::real(s.basis(j, i)); };

  // M V = I_n
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      std::vector<double> row(static_cast<std::size_t>(z_idx + 1), 0.0);
      for (int j = 0; j < N; ++j) row[static_cast<std::size_t>(m_off + k * N + j)] = vr(j, l);
      lp.add_row(std::move(row), RowSense::Equal, k == l ? 1.0 : 0.0);
    }
  // (V M)_ij + pneg_ij >= 0
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      std::vector<double> row(static_cast<std::size_t>(z_idx + 1), 0.0);
      for (int k = 0; k < n; ++k) row[static_cast<std::size_t>(m_off + k * N + j)] = vr(i, k);
      row[static_cast<std::size_t>(p_off + i * N + j)] = 1.0;
      lp.add_row(std::move(row), RowSense::GreaterEq, 0.0);
    }
  // sum_j (V M)_ij + 2 pneg_ij <= z
  for (int i = 0; i < N; ++i) {
    std::vector<double> row(static_cast<std::size_t>(z_idx + 1), 0.0);
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < n; ++k) row[static_cast<std::size_t>(m_off + k * N + j)] += vr(i, k);
      row[static_cast<std::size_t>(p_off + i * N + j)] = 2.0;
    }
    row[static_cast<std::size_t>(z_idx)] = -1.0;
    lp.add_row(std::move(row), RowSense::LessEq, 0.0);
  }

  // the tableau simplex grinds on the heavily degenerate vertex structure of
  // large instances; the interior-point path solves the same program
  const bool large = static_cast<int>(lp.rows.size()) > 400;
  LpResult r = large ? solve_lp_interior(lp, tol) : solve_lp(lp, tol);
  if (r.status != LpStatus::Optimal)
    fail(Errc::NumericalFailure, "minimal projection LP did not reach optimality: " + r.note);

  KMatrix m(Field::Real, n, N);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < N; ++j) m(k, j) = r.x[static_cast<std::size_t>(m_off + k * N + j)];

  MinProjResult out;
  out.projection = matmul(s.basis, m);
  out.lambda_rel = max_abs_row_sum(out.projection);
  out.lp_iterations = r.iterations;
  out.idempotency_residual =
      frobenius_norm(sub(matmul(out.projection, out.projection), out.projection));
  out.invariance_residual = frobenius_norm(sub(matmul(out.projection, s.basis), s.basis));
  const double scale = std::max(1.0, out.lambda_rel);
  if (out.idempotency_residual > tol.lp_tol * scale * 10.0 ||
      out.invariance_residual > tol.lp_tol * scale * 10.0 ||
      std::abs(out.lambda_rel - r.objective) > tol.lp_tol * scale * 10.0)
    fail(Errc::NumericalFailure, "minimal projection LP solution failed verification");
  return out;
}

CMReport cm_verify(const CMOperator& e, const SubspaceOfLinf& s) {
  s.validate();
  if (e.e.rows != s.N || e.e.cols != s.N) fail(Errc::DimensionMismatch, "operator of wrong shape");
  if (e.e.field != s.field) fail(Errc::FieldMismatch, "operator over wrong field");

  CMReport rep;
  KMatrix ev = matmul(e.e, s.basis);
  for (int i = 0; i < s.n; ++i) {
    KVector col = ev.column(i);
    KVector proj = project_onto_range(s.basis, col);
    rep.invariance_residual = std::max(rep.invariance_residual, norm(sub(col, proj)));
  }
  KMatrix mfit = lstsq(s.basis, ev);
  rep.lstsq_residual = frobenius_norm(sub(ev, matmul(s.basis, mfit)));
  rep.trace_on_X = trace(mfit);

  for (int k = 0; k < s.N; ++k) {
    double colmax = 0.0;
    for (int j = 0; j < s.N; ++j) colmax = std::max(colmax, std::abs(e.e(j, k)));
    rep.column_sum += colmax;
  }
  return rep;
}

CMBuildResult cm_build(const MaximalETF& etf, const KMatrix* zonotope_coeffs, const ToleranceConfig& tol) {
  const int d = etf.d();
  const int m = zonotope_coeffs ? zonotope_coeffs->rows : 0;
  const double c_zono = rescale_constant(etf.field, etf.n);
  const double c_op = delta_bound(etf.field, etf.n) / etf.n;

  if (zonotope_coeffs) {
    if (zonotope_coeffs->cols != d) fail(Errc::DimensionMismatch, "coefficient grid needs d columns");
    if (zonotope_coeffs->field != etf.field) fail(Errc::FieldMismatch, "coefficient grid field mismatch");
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < d; ++k)
        if (std::abs((*zonotope_coeffs)(j, k)) > c_zono + tol.identity_tol)
          fail(Errc::CoefficientOutOfRange, "|a_jk| must not exceed n/(d delta)");
  }

  DualBallSpec ball;
  ball.field = etf.field;
  ball.n = etf.n;
  ball.functionals = etf.vectors;
  for (int j = 0; j < m; ++j) {
    KVector v = KVector::zeros(etf.field, etf.n);
    for (int k = 0; k < d; ++k) axpy((*zonotope_coeffs)(j, k), etf.vectors[static_cast<std::size_t>(k)], v);
    ball.functionals.push_back(std::move(v));
  }

  const int N = d + m;
  CMBuildResult out;
  out.op.e = KMatrix(etf.field, N, N);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      cplx ip = inner(etf.vectors[static_cast<std::size_t>(k)], etf.vectors[static_cast<std::size_t>(j)]);
      out.op.e(j, k) = sgn(ip) / static_cast<double>(d);
    }
    for (int j = 0; j < m; ++j)
      out.op.e(d + j, k) = c_op * std::conj((*zonotope_coeffs)(j, k));
  }
  out.space = embed_norm(ball);
  return out;
}

LambdaUpperReport lambda_upper_report(const SubspaceOfLinf& s, const ToleranceConfig& tol) {
  LambdaUpperReport rep;
  rep.delta_upper = delta_bound(s.field, s.n);
  rep.kadec_snobar = std::sqrt(static_cast<double>(s.n));
  rep.certified_upper = std::min(rep.delta_upper, rep.kadec_snobar);
  rep.lp_value = min_projection_lp(s, tol).lambda_rel;
  if (rep.lp_value > rep.delta_upper + tol.lp_tol || rep.lp_value > rep.kadec_snobar)
    fail(Errc::NumericalFailure, "LP value exceeded a certified upper bound");
  return rep;
}

}  // namespace maxproj
