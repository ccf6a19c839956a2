#include "maxproj/soc.hpp"

#include <algorithm>
#include <cmath>

#include "maxproj/linalg.hpp"

namespace maxproj {

SocFeasibility SocFeasibility::make(int nvars) {
  if (nvars < 1) fail(Errc::InvalidArgument, "SOC problem needs at least one variable");
  SocFeasibility p;
  p.nvars = nvars;
  return p;
}

void SocFeasibility::add_cone(int t_index, std::vector<int> z_indices) {
  cones.push_back(Cone{t_index, std::move(z_indices)});
}

void SocFeasibility::add_equality(std::vector<double> coeffs, double rhs) {
  if (static_cast<int>(coeffs.size()) != nvars)
    fail(Errc::DimensionMismatch, "SOC equality row of wrong length");
  eq_rows.push_back(std::move(coeffs));
  eq_rhs.push_back(rhs);
}

void SocFeasibility::validate() const {
  std::vector<char> used(static_cast<std::size_t>(nvars), 0);
  auto touch = [&](int i) {
    if (i < 0 || i >= nvars) fail(Errc::IndexOutOfRange, "SOC cone index out of range");
    if (used[static_cast<std::size_t>(i)]) fail(Errc::InvalidArgument, "variable in two cone blocks");
    used[static_cast<std::size_t>(i)] = 1;
  };
  for (const Cone& c : cones) {
    touch(c.t_index);
    for (int z : c.z_indices) touch(z);
  }
  if (eq_rows.size() != eq_rhs.size()) fail(Errc::DimensionMismatch, "SOC equality sizes");
}

namespace {

void project_cones(const SocFeasibility& p, std::vector<double>& v) {
  for (const auto& c : p.cones) {
    double& t = v[static_cast<std::size_t>(c.t_index)];
    if (c.z_indices.empty()) {
      t = std::max(0.0, t);
      continue;
    }
    double zn = 0.0;
    for (int i : c.z_indices) zn += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    zn = std::sqrt(zn);
    if (zn <= t) continue;
    if (zn <= -t) {
      t = 0.0;
      for (int i : c.z_indices) v[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const double s = 0.5 * (t + zn);
    const double f = zn > 0.0 ? s / zn : 0.0;
    t = s;
    for (int i : c.z_indices) v[static_cast<std::size_t>(i)] *= f;
  }
}

struct AffineProjector {
  // A^T = q r with q (nvars x m); projects v onto {A v = b}
  KMatrix q;
  KMatrix r;
  const SocFeasibility* p;

  explicit AffineProjector(const SocFeasibility& prob) : p(&prob) {
    const int m = static_cast<int>(prob.eq_rows.size());
    KMatrix at(Field::Real, prob.nvars, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < prob.nvars; ++j)
        at(j, i) = prob.eq_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    QR f = qr_thin(at);
    for (int i = 0; i < m; ++i)
      if (std::abs(f.r(i, i)) < 1e-12)
        fail(Errc::NumericalFailure, "SOC equality rows are numerically rank-deficient");
    q = std::move(f.q);
    r = std::move(f.r);
  }

  std::vector<double> residual(const std::vector<double>& v) const {
    const int m = static_cast<int>(p->eq_rows.size());
    std::vector<double> res(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double s = -p->eq_rhs[static_cast<std::size_t>(i)];
      const auto& row = p->eq_rows[static_cast<std::size_t>(i)];
      for (int j = 0; j < p->nvars; ++j) s += row[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      res[static_cast<std::size_t>(i)] = s;
    }
    return res;
  }

  // solve (A A^T) u = rhs via r^T r u = rhs
  std::vector<double> solve_normal(std::vector<double> rhs) const {
    const int m = static_cast<int>(p->eq_rows.size());
    for (int i = 0; i < m; ++i) {  // forward: r^T w = rhs
      double s = rhs[static_cast<std::size_t>(i)];
      for (int k = 0; k < i; ++k) s -= std::real(r(k, i)) * rhs[static_cast<std::size_t>(k)];
      rhs[static_cast<std::size_t>(i)] = s / std::real(r(i, i));
    }
    for (int i = m - 1; i >= 0; --i) {  // back: r u = w
      double s = rhs[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < m; ++k) s -= std::real(r(i, k)) * rhs[static_cast<std::size_t>(k)];
      rhs[static_cast<std::size_t>(i)] = s / std::real(r(i, i));
    }
    return rhs;
  }

  void project(std::vector<double>& v) const {
    std::vector<double> u = solve_normal(residual(v));
    for (std::size_t i = 0; i < p->eq_rows.size(); ++i) {
      const double ui = u[i];
      if (ui == 0.0) continue;
      const auto& row = p->eq_rows[i];
      for (int j = 0; j < p->nvars; ++j) v[static_cast<std::size_t>(j)] -= row[static_cast<std::size_t>(j)] * ui;
    }
  }
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SocResult solve_soc_feasibility(const SocFeasibility& p, const ToleranceConfig& tol, int max_iters) {
  p.validate();
  SocResult out;
  const int n = p.nvars;

  if (p.eq_rows.empty()) {  // project 0 onto cones: trivially feasible
    out.status = SocStatus::Feasible;
    out.witness.assign(static_cast<std::size_t>(n), 0.0);
    return out;
  }

  AffineProjector aff(p);
  const double bscale = 1.0 + inf_norm(p.eq_rhs);

  // alternating projections; for disjoint sets the difference of consecutive
  // projections converges to the gap vector, which feeds the certificate
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  aff.project(x);  // least-norm affine point
  std::vector<double> y = x;

  double prev_gap = -1.0;
  int stall = 0;

  for (int it = 0; it < max_iters; ++it) {
    y = x;
    aff.project(y);  // y in affine set
    x = y;
    project_cones(p, x);  // x in the cone product
    out.iterations = it + 1;

    // acceptance threshold is 20x below lp_tol; witnesses must re-verify
    // within lp_tol downstream
    const double feas = inf_norm(aff.residual(x));
    if (feas < 0.05 * tol.lp_tol * bscale) {
      out.status = SocStatus::Feasible;
      out.witness = x;
      out.residual = feas;
      return out;
    }

    double gap = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = y[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
      gap += d * d;
    }
    gap = std::sqrt(gap);
    out.residual = feas;

    const bool settled = prev_gap >= 0.0 && std::abs(gap - prev_gap) < 1e-12 * (1.0 + gap);
    prev_gap = gap;
    if (settled) ++stall;
    else stall = 0;

    const bool attempt = gap > tol.lp_tol && (stall >= 20 || it % 250 == 249 || it == max_iters - 1);
    if (attempt) {
      // project the gap direction onto the row space of A: phi = A^T mu is
      // exactly constant (= mu^T b) on the affine set
      const int m = static_cast<int>(p.eq_rows.size());
      std::vector<double> aphi(static_cast<std::size_t>(m), 0.0);
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        const auto& row = p.eq_rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
          s += row[static_cast<std::size_t>(j)] *
               (y[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]);
        aphi[static_cast<std::size_t>(i)] = s;
      }
      std::vector<double> mu = aff.solve_normal(std::move(aphi));
      std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < m; ++i) {
        const double mi = mu[static_cast<std::size_t>(i)];
        if (mi == 0.0) continue;
        const auto& row = p.eq_rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
          phi[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)] * mi;
      }
      double nphi = 0.0;
      for (double v : phi) nphi += v * v;
      nphi = std::sqrt(nphi);
      if (nphi > 1e-300) {
        for (double& v : phi) v /= nphi;
        for (double& v : mu) v /= nphi;

        double ca = 0.0;
        for (int i = 0; i < m; ++i)
          ca += mu[static_cast<std::size_t>(i)] * p.eq_rhs[static_cast<std::size_t>(i)];

        double polar_viol = 0.0;
        std::vector<char> in_cone(static_cast<std::size_t>(n), 0);
        for (const auto& c : p.cones) {
          double zn = 0.0;
          for (int i : c.z_indices) {
            zn += phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(i)];
            in_cone[static_cast<std::size_t>(i)] = 1;
          }
          in_cone[static_cast<std::size_t>(c.t_index)] = 1;
          zn = std::sqrt(zn);
          polar_viol = std::max(polar_viol, phi[static_cast<std::size_t>(c.t_index)] + zn);
        }
        double free_viol = 0.0;
        for (int j = 0; j < n; ++j)
          if (!in_cone[static_cast<std::size_t>(j)])
            free_viol = std::max(free_viol, std::abs(phi[static_cast<std::size_t>(j)]));

        if (polar_viol < 1e-10 && free_viol < 1e-10 && ca > tol.lp_tol * bscale) {
          out.status = SocStatus::Infeasible;
          out.separator = std::move(phi);
          out.eq_multipliers = std::move(mu);
          out.margin = ca;
          return out;
        }
      }
      if (stall >= 20) stall = 0;
    }
  }
  out.status = SocStatus::Undetermined;
  return out;
}

}  // namespace maxproj
