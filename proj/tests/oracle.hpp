#pragma once

// Test-only oracle for relative projection constants: derivative-free convex
// minimization over the affine family { M : M V = I }, independent of the LP
// path it cross-checks.

#include <cmath>
#include <vector>

#include "maxproj/minproj.hpp"
#include "maxproj/linalg.hpp"

namespace maxproj::test_oracle {

inline double projection_norm(const KMatrix& v, const KMatrix& m) {
  KMatrix p = matmul(v, m);
  double best = 0.0;
  for (int i = 0; i < p.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < p.cols; ++j) s += std::abs(p(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// min ||V(M0 + Y Z^T)||_{inf->inf} over Y. The objective is convex, so
/// smoothing descent with a vanishing smoothing parameter reaches the global
/// value.
inline double min_projection_oracle(const KMatrix& v, std::uint64_t seed = 1234, int outer = 6000) {
  const int N = v.rows, n = v.cols;
  // M0 = pseudoinverse (row space of V^T), Z = orthonormal null space of V^T
  QR full = qr_full(v);
  KMatrix z(Field::Real, N, N - n);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N - n; ++j) z(i, j) = std::real(full.q(i, n + j));
  KMatrix vt = adjoint(v);
  KMatrix vtv = matmul(vt, v);
  KMatrix m_pinv = matmul(lstsq(vtv, KMatrix::identity(Field::Real, n)), vt);

  const int dim = n * (N - n);
  std::vector<double> y(static_cast<std::size_t>(dim), 0.0);

  auto assemble = [&](const std::vector<double>& yy) {
    KMatrix m = m_pinv;
    // M = M0 + Y Z^T with Y (n x (N-n))
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < N - n; ++b) {
        const double w = yy[static_cast<std::size_t>(a * (N - n) + b)];
        if (w == 0.0) continue;
        for (int j = 0; j < N; ++j) m(a, j) += w * std::real(z(j, b));
      }
    return m;
  };
  auto value = [&](const std::vector<double>& yy) { return projection_norm(v, assemble(yy)); };

  (void)seed;
  // smoothed objective: eta log sum_i exp(s_i/eta), s_i = sum_j sqrt(P_ij^2+eta^2);
  // convex and smooth, so plain descent with backtracking reaches the global
  // minimum; the smoothing error vanishes with eta
  auto smooth_value_grad = [&](const std::vector<double>& yy, double eta, std::vector<double>* grad) {
    KMatrix m = assemble(yy);
    KMatrix p = matmul(v, m);
    std::vector<double> rowsum(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int j = 0; j < N; ++j) {
        const double pij = std::real(p(i, j));
        s += std::sqrt(pij * pij + eta * eta);
      }
      rowsum[static_cast<std::size_t>(i)] = s;
    }
    double smax = rowsum[0];
    for (double s : rowsum) smax = std::max(smax, s);
    double expsum = 0.0;
    for (double s : rowsum) expsum += std::exp((s - smax) / eta);
    const double fval = smax + eta * std::log(expsum);
    if (grad) {
      grad->assign(static_cast<std::size_t>(dim), 0.0);
      for (int i = 0; i < N; ++i) {
        const double w = std::exp((rowsum[static_cast<std::size_t>(i)] - smax) / eta) / expsum;
        if (w < 1e-300) continue;
        for (int j = 0; j < N; ++j) {
          const double pij = std::real(p(i, j));
          const double coeff = w * pij / std::sqrt(pij * pij + eta * eta);
          if (coeff == 0.0) continue;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < N - n; ++b)
              (*grad)[static_cast<std::size_t>(a * (N - n) + b)] +=
                  coeff * std::real(v(i, a)) * std::real(z(j, b));
        }
      }
    }
    return fval;
  };

  // damped Newton per smoothing level; the Hessian comes from central
  // differences of the analytic gradient, so conditioning ~ 1/eta is harmless
  const int newton_iters = std::min(outer, 60);
  for (double eta = 1e-2; eta > 0.5e-9; eta *= 0.1) {
    double damping = 0.0;
    for (int it = 0; it < newton_iters; ++it) {
      std::vector<double> grad;
      const double f = smooth_value_grad(y, eta, &grad);
      double gn = 0.0;
      for (double g : grad) gn += g * g;
      gn = std::sqrt(gn);
      if (gn < 1e-11 * (1.0 + std::abs(f))) break;

      const double h = 1e-5 * std::sqrt(eta);
      KMatrix hess(Field::Real, dim, dim);
      for (int k = 0; k < dim; ++k) {
        std::vector<double> yp = y, ym = y, gp, gm;
        yp[static_cast<std::size_t>(k)] += h;
        ym[static_cast<std::size_t>(k)] -= h;
        smooth_value_grad(yp, eta, &gp);
        smooth_value_grad(ym, eta, &gm);
        for (int l = 0; l < dim; ++l)
          hess(l, k) = (gp[static_cast<std::size_t>(l)] - gm[static_cast<std::size_t>(l)]) / (2.0 * h);
      }
      // symmetrize
      for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
          const double m2 = 0.5 * (std::real(hess(a, b)) + std::real(hess(b, a)));
          hess(a, b) = m2;
          hess(b, a) = m2;
        }

      bool moved = false;
      for (int attempt = 0; attempt < 30 && !moved; ++attempt) {
        KMatrix hd = hess;
        for (int k = 0; k < dim; ++k) hd(k, k) += damping;
        KVector gv = KVector::zeros(Field::Real, dim);
        for (int k = 0; k < dim; ++k) gv[k] = grad[static_cast<std::size_t>(k)];
        KVector d;
        try {
          d = lstsq(hd, gv);
        } catch (const Error&) {
          damping = damping == 0.0 ? 1e-8 : damping * 10.0;
          continue;
        }
        std::vector<double> cand = y;
        for (int k = 0; k < dim; ++k) cand[static_cast<std::size_t>(k)] -= std::real(d[k]);
        const double fc = smooth_value_grad(cand, eta, nullptr);
        if (fc < f) {
          y = std::move(cand);
          damping = std::max(0.0, damping * 0.1);
          moved = true;
        } else {
          damping = damping == 0.0 ? 1e-8 * (1.0 + gn) : damping * 10.0;
        }
      }
      if (!moved) break;
    }
  }
  return value(y);
}

}  // namespace maxproj::test_oracle
