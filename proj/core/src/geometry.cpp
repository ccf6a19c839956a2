#include "maxproj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxproj/rng.hpp"

namespace maxproj {

namespace {

void check_common(const std::vector<KVector>& gens, const KVector& x) {
  if (gens.empty()) fail(Errc::InvalidArgument, "empty generator list");
  for (const KVector& g : gens) {
    if (g.dim() != x.dim()) fail(Errc::DimensionMismatch, "generator/point dimension mismatch");
    if (g.field != x.field) fail(Errc::FieldMismatch, "generator/point field mismatch");
  }
}

Certificate verified_membership(const std::vector<KVector>& gens, const KVector& x,
                                std::vector<cplx> coeffs, double coeff_budget_violation,
                                const ToleranceConfig& tol) {
  KVector recon = KVector::zeros(x.field, x.dim());
  for (std::size_t j = 0; j < gens.size(); ++j) axpy(coeffs[j], gens[j], recon);
  const double res = norm(sub(recon, x));
  const double scale = 1.0 + norm(x);
  if (res > tol.lp_tol * scale || coeff_budget_violation > tol.lp_tol)
    fail(Errc::Undetermined, "membership witness failed re-verification");
  Certificate c;
  c.kind = Certificate::Kind::Membership;
  c.coefficients = std::move(coeffs);
  c.residual = res;
  return c;
}

Certificate verified_separation(const KVector& x, KVector y, double support_value,
                                const ToleranceConfig& tol) {
  const double lhs = std::real(inner(x, y));
  const double margin = lhs - support_value;
  if (margin <= tol.lp_tol) fail(Errc::Undetermined, "separator failed margin re-verification");
  Certificate c;
  c.kind = Certificate::Kind::Separation;
  c.separator = std::move(y);
  c.residual = margin;
  return c;
}

// ---------------- real LP paths ----------------

Certificate absconv_contains_real(const std::vector<KVector>& gens, const KVector& x,
                                  const ToleranceConfig& tol) {
  const int n = x.dim();
  const int N = static_cast<int>(gens.size());
  LinearProgram p = absconv_membership_lp(gens, x);
  LpResult r = solve_lp(p, tol);
  if (r.status == LpStatus::Optimal && r.objective <= 1.0 + tol.lp_tol) {
    std::vector<cplx> alpha(static_cast<std::size_t>(N));
    double budget = 0.0;
    for (int j = 0; j < N; ++j) {
      alpha[static_cast<std::size_t>(j)] =
          r.x[static_cast<std::size_t>(j)] - r.x[static_cast<std::size_t>(N + j)];
      budget += std::abs(alpha[static_cast<std::size_t>(j)]);
    }
    return verified_membership(gens, x, std::move(alpha), std::max(0.0, budget - 1.0), tol);
  }
  if (r.status == LpStatus::Optimal) {
    // gauge > 1: the equality duals separate
    KVector y = KVector::zeros(Field::Real, n);
    for (int k = 0; k < n; ++k) y[k] = r.dual[static_cast<std::size_t>(k)];
    return verified_separation(x, std::move(y), absconv_support(gens, y), tol);
  }
  if (r.status == LpStatus::Infeasible && !r.farkas.empty()) {
    // x outside the span; equality-row multipliers give a subspace separator
    KVector y = KVector::zeros(Field::Real, n);
    for (int k = 0; k < n; ++k)
      y[k] = r.farkas[static_cast<std::size_t>(2 * k)] - r.farkas[static_cast<std::size_t>(2 * k + 1)];
    double ny = norm(y);
    if (ny > 0) y = scale(1.0 / ny, y);
    return verified_separation(x, std::move(y), absconv_support(gens, y), tol);
  }
  fail(Errc::Undetermined, "absconv membership LP did not resolve");
}

Certificate zonotope_contains_real(const ZonotopeSpec& z, const KVector& x, const ToleranceConfig& tol) {
  const int n = x.dim();
  const int N = static_cast<int>(z.generators.size());
  LinearProgram p = zonotope_membership_lp(z, x);
  LpResult r = solve_lp(p, tol);
  if (r.status == LpStatus::Optimal && r.objective <= 1.0 + tol.lp_tol) {
    std::vector<cplx> a(static_cast<std::size_t>(N));
    double worst = 0.0;
    for (int j = 0; j < N; ++j) {
      a[static_cast<std::size_t>(j)] = r.x[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(a[static_cast<std::size_t>(j)]) - 1.0);
    }
    // membership reconstruction uses the scaled generators
    std::vector<KVector> scaled;
    scaled.reserve(z.generators.size());
    for (const KVector& g : z.generators) scaled.push_back(scale(z.scale, g));
    return verified_membership(scaled, x, std::move(a), std::max(0.0, worst), tol);
  }
  if (r.status == LpStatus::Optimal || (r.status == LpStatus::Infeasible && !r.farkas.empty())) {
    KVector y = KVector::zeros(Field::Real, n);
    if (r.status == LpStatus::Optimal) {
      for (int k = 0; k < n; ++k) y[k] = r.dual[static_cast<std::size_t>(k)];
    } else {
      for (int k = 0; k < n; ++k)
        y[k] = r.farkas[static_cast<std::size_t>(2 * k)] - r.farkas[static_cast<std::size_t>(2 * k + 1)];
      double ny = norm(y);
      if (ny > 0) y = scale(1.0 / ny, y);
    }
    return verified_separation(x, std::move(y), zonotope_support(z, y), tol);
  }
  fail(Errc::Undetermined, "zonotope membership LP did not resolve");
}

// ---------------- complex paths ----------------

// SOC encoding: variables [alpha_re_0, alpha_im_0, r_0, ..., slack]
Certificate absconv_contains_complex(const std::vector<KVector>& gens, const KVector& x,
                                     const ToleranceConfig& tol) {
  const int n = x.dim();
  const int N = static_cast<int>(gens.size());
  const int nv = 3 * N + 1;
  SocFeasibility sp = SocFeasibility::make(nv);
  for (int j = 0; j < N; ++j) sp.add_cone(3 * j + 2, {3 * j, 3 * j + 1});
  sp.add_cone(3 * N, {});  // slack >= 0
  {
    std::vector<double> budget(static_cast<std::size_t>(nv), 0.0);
    for (int j = 0; j < N; ++j) budget[static_cast<std::size_t>(3 * j + 2)] = 1.0;
    budget[static_cast<std::size_t>(3 * N)] = 1.0;
    sp.add_equality(std::move(budget), 1.0);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> re(static_cast<std::size_t>(nv), 0.0), im(static_cast<std::size_t>(nv), 0.0);
    for (int j = 0; j < N; ++j) {
      const cplx g = gens[static_cast<std::size_t>(j)][k];
      re[static_cast<std::size_t>(3 * j)] = g.real();
      re[static_cast<std::size_t>(3 * j + 1)] = -g.imag();
      im[static_cast<std::size_t>(3 * j)] = g.imag();
      im[static_cast<std::size_t>(3 * j + 1)] = g.real();
    }
    sp.add_equality(std::move(re), x[k].real());
    sp.add_equality(std::move(im), x[k].imag());
  }
  SocResult sr = solve_soc_feasibility(sp, tol);
  if (sr.status == SocStatus::Feasible) {
    std::vector<cplx> alpha(static_cast<std::size_t>(N));
    double budget = 0.0;
    for (int j = 0; j < N; ++j) {
      alpha[static_cast<std::size_t>(j)] = cplx(sr.witness[static_cast<std::size_t>(3 * j)],
                                                sr.witness[static_cast<std::size_t>(3 * j + 1)]);
      budget += std::abs(alpha[static_cast<std::size_t>(j)]);
    }
    return verified_membership(gens, x, std::move(alpha), std::max(0.0, budget - 1.0), tol);
  }

  // refutation via the outer phase-discretized polytope: if x is not in
  // (1/cos(pi/m)) * inner polytope, it is not in the hull; the LP separator is
  // then re-verified against exact moduli
  for (int phases : {64, 128, 256}) {
    const double shrink = std::cos(std::numbers::pi / phases);
    LinearProgram p = LinearProgram::make(phases * N);
    for (int j = 0; j < phases * N; ++j) p.objective[static_cast<std::size_t>(j)] = 1.0;
    for (int k = 0; k < n; ++k) {
      std::vector<double> re(static_cast<std::size_t>(phases * N), 0.0),
          im(static_cast<std::size_t>(phases * N), 0.0);
      for (int j = 0; j < N; ++j)
        for (int q = 0; q < phases; ++q) {
          const cplx g = std::polar(1.0, 2.0 * std::numbers::pi * q / phases) *
                         gens[static_cast<std::size_t>(j)][k];
          re[static_cast<std::size_t>(j * phases + q)] = g.real();
          im[static_cast<std::size_t>(j * phases + q)] = g.imag();
        }
      p.add_row(std::move(re), RowSense::Equal, x[k].real());
      p.add_row(std::move(im), RowSense::Equal, x[k].imag());
    }
    LpResult r = solve_lp(p, tol);
    KVector y = KVector::zeros(Field::Complex, n);
    if (r.status == LpStatus::Optimal && r.objective * shrink > 1.0 + tol.lp_tol) {
      for (int k = 0; k < n; ++k)
        y[k] = cplx(r.dual[static_cast<std::size_t>(2 * k)], r.dual[static_cast<std::size_t>(2 * k + 1)]);
    } else if (r.status == LpStatus::Infeasible && !r.farkas.empty()) {
      for (int k = 0; k < n; ++k)
        y[k] = cplx(r.farkas[static_cast<std::size_t>(4 * k)] - r.farkas[static_cast<std::size_t>(4 * k + 1)],
                    r.farkas[static_cast<std::size_t>(4 * k + 2)] - r.farkas[static_cast<std::size_t>(4 * k + 3)]);
      double ny = norm(y);
      if (ny > 0) y = scale(1.0 / ny, y);
    } else {
      continue;
    }
    // y was built so that Re<x,y> matches the LP dual pairing
    const double sup = absconv_support(gens, y);
    if (std::real(inner(x, y)) - sup > tol.lp_tol) return verified_separation(x, std::move(y), sup, tol);
  }
  fail(Errc::Undetermined, "complex absconv membership unresolved");
}

Certificate zonotope_contains_complex(const ZonotopeSpec& z, const KVector& x, const ToleranceConfig& tol) {
  const int n = x.dim();
  const int N = static_cast<int>(z.generators.size());
  const int nv = 4 * N;  // per generator: re, im, r, slack with r + slack = 1
  SocFeasibility sp = SocFeasibility::make(nv);
  for (int j = 0; j < N; ++j) {
    sp.add_cone(4 * j + 2, {4 * j, 4 * j + 1});
    sp.add_cone(4 * j + 3, {});
    std::vector<double> row(static_cast<std::size_t>(nv), 0.0);
    row[static_cast<std::size_t>(4 * j + 2)] = 1.0;
    row[static_cast<std::size_t>(4 * j + 3)] = 1.0;
    sp.add_equality(std::move(row), 1.0);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> re(static_cast<std::size_t>(nv), 0.0), im(static_cast<std::size_t>(nv), 0.0);
    for (int j = 0; j < N; ++j) {
      const cplx g = z.scale * z.generators[static_cast<std::size_t>(j)][k];
      re[static_cast<std::size_t>(4 * j)] = g.real();
      re[static_cast<std::size_t>(4 * j + 1)] = -g.imag();
      im[static_cast<std::size_t>(4 * j)] = g.imag();
      im[static_cast<std::size_t>(4 * j + 1)] = g.real();
    }
    sp.add_equality(std::move(re), x[k].real());
    sp.add_equality(std::move(im), x[k].imag());
  }
  SocResult sr = solve_soc_feasibility(sp, tol);
  if (sr.status == SocStatus::Feasible) {
    std::vector<cplx> a(static_cast<std::size_t>(N));
    double worst = 0.0;
    for (int j = 0; j < N; ++j) {
      a[static_cast<std::size_t>(j)] = cplx(sr.witness[static_cast<std::size_t>(4 * j)],
                                            sr.witness[static_cast<std::size_t>(4 * j + 1)]);
      worst = std::max(worst, std::abs(a[static_cast<std::size_t>(j)]) - 1.0);
    }
    std::vector<KVector> scaled;
    scaled.reserve(z.generators.size());
    for (const KVector& g : z.generators) scaled.push_back(scale(z.scale, g));
    return verified_membership(scaled, x, std::move(a), std::max(0.0, worst), tol);
  }

  for (int phases : {64, 128, 256}) {
    // outer polygon per generator disk: Re(e^{-i theta_q} a_j) <= 1
    LinearProgram p = LinearProgram::make(2 * N);
    for (int j = 0; j < 2 * N; ++j) p.lower[static_cast<std::size_t>(j)] = -kInf;
    for (int k = 0; k < n; ++k) {
      std::vector<double> re(static_cast<std::size_t>(2 * N), 0.0), im(static_cast<std::size_t>(2 * N), 0.0);
      for (int j = 0; j < N; ++j) {
        const cplx g = z.scale * z.generators[static_cast<std::size_t>(j)][k];
        re[static_cast<std::size_t>(2 * j)] = g.real();
        re[static_cast<std::size_t>(2 * j + 1)] = -g.imag();
        im[static_cast<std::size_t>(2 * j)] = g.imag();
        im[static_cast<std::size_t>(2 * j + 1)] = g.real();
      }
      p.add_row(std::move(re), RowSense::Equal, x[k].real());
      p.add_row(std::move(im), RowSense::Equal, x[k].imag());
    }
    for (int j = 0; j < N; ++j)
      for (int q = 0; q < phases; ++q) {
        std::vector<double> row(static_cast<std::size_t>(2 * N), 0.0);
        row[static_cast<std::size_t>(2 * j)] = std::cos(2.0 * std::numbers::pi * q / phases);
        row[static_cast<std::size_t>(2 * j + 1)] = std::sin(2.0 * std::numbers::pi * q / phases);
        p.add_row(std::move(row), RowSense::LessEq, 1.0);
      }
    LpResult r = solve_lp(p, tol);
    if (r.status == LpStatus::Infeasible && !r.farkas.empty()) {
      KVector y = KVector::zeros(Field::Complex, n);
      for (int k = 0; k < n; ++k)
        y[k] = cplx(r.farkas[static_cast<std::size_t>(4 * k)] - r.farkas[static_cast<std::size_t>(4 * k + 1)],
                    r.farkas[static_cast<std::size_t>(4 * k + 2)] - r.farkas[static_cast<std::size_t>(4 * k + 3)]);
      double ny = norm(y);
      if (ny > 0) y = scale(1.0 / ny, y);
      const double sup = zonotope_support(z, y);
      if (std::real(inner(x, y)) - sup > tol.lp_tol)
        return verified_separation(x, std::move(y), sup, tol);
    }
  }
  fail(Errc::Undetermined, "complex zonotope membership unresolved");
}

}  // namespace

LinearProgram absconv_membership_lp(const std::vector<KVector>& gens, const KVector& x) {
  const int n = x.dim();
  const int N = static_cast<int>(gens.size());
  // gauge LP: min sum (p+q) s.t. sum (p_j - q_j) g_j = x
  LinearProgram p = LinearProgram::make(2 * N);
  for (int j = 0; j < 2 * N; ++j) p.objective[static_cast<std::size_t>(j)] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> row(static_cast<std::size_t>(2 * N), 0.0);
    for (int j = 0; j < N; ++j) {
      const double g = std::real(gens[static_cast<std::size_t>(j)][k]);
      row[static_cast<std::size_t>(j)] = g;
      row[static_cast<std::size_t>(N + j)] = -g;
    }
    p.add_row(std::move(row), RowSense::Equal, std::real(x[k]));
  }
  return p;
}

LinearProgram zonotope_membership_lp(const ZonotopeSpec& z, const KVector& x) {
  const int n = x.dim();
  const int N = static_cast<int>(z.generators.size());
  // min s subject to scale * sum a_j g_j = x, -s <= a_j <= s
  LinearProgram p = LinearProgram::make(N + 1);
  for (int j = 0; j < N; ++j) p.lower[static_cast<std::size_t>(j)] = -kInf;
  p.objective[static_cast<std::size_t>(N)] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> row(static_cast<std::size_t>(N + 1), 0.0);
    for (int j = 0; j < N; ++j)
      row[static_cast<std::size_t>(j)] = z.scale * std::real(z.generators[static_cast<std::size_t>(j)][k]);
    p.add_row(std::move(row), RowSense::Equal, std::real(x[k]));
  }
  for (int j = 0; j < N; ++j) {
    std::vector<double> row(static_cast<std::size_t>(N + 1), 0.0);
    row[static_cast<std::size_t>(j)] = 1.0;
    row[static_cast<std::size_t>(N)] = -1.0;
    p.add_row(std::move(row), RowSense::LessEq, 0.0);
    std::vector<double> row2(static_cast<std::size_t>(N + 1), 0.0);
    row2[static_cast<std::size_t>(j)] = -1.0;
    row2[static_cast<std::size_t>(N)] = -1.0;
    p.add_row(std::move(row2), RowSense::LessEq, 0.0);
  }
  return p;
}

void DualBallSpec::validate() const {
  if (n < 1) fail(Errc::InvalidDimension, "dual ball dimension must be positive");
  if (functionals.empty()) fail(Errc::InvalidArgument, "dual ball needs functionals");
  for (const KVector& f : functionals) {
    if (f.dim() != n) fail(Errc::DimensionMismatch, "functional of wrong dimension");
    if (f.field != field) fail(Errc::FieldMismatch, "functional over wrong field");
  }
  if (rank(KMatrix::from_columns(functionals)) < n)
    fail(Errc::RankDeficient, "functionals do not span the space");
}

Certificate absconv_contains(const std::vector<KVector>& gens, const KVector& x,
                             const ToleranceConfig& tol) {
  check_common(gens, x);
  if (x.field == Field::Real) return absconv_contains_real(gens, x, tol);
  return absconv_contains_complex(gens, x, tol);
}

Certificate zonotope_contains(const ZonotopeSpec& z, const KVector& x, const ToleranceConfig& tol) {
  check_common(z.generators, x);
  if (z.scale <= 0.0) fail(Errc::InvalidArgument, "zonotope scale must be positive");
  if (x.field == Field::Real) return zonotope_contains_real(z, x, tol);
  return zonotope_contains_complex(z, x, tol);
}

double absconv_support(const std::vector<KVector>& gens, const KVector& y) {
  double m = 0.0;
  for (const KVector& g : gens) m = std::max(m, std::abs(inner(g, y)));
  return m;
}

double zonotope_support(const ZonotopeSpec& z, const KVector& y) {
  double s = 0.0;
  for (const KVector& g : z.generators) s += std::abs(inner(g, y));
  return z.scale * s;
}

InclusionReport inclusion_check(const MaximalETF& etf, const ToleranceConfig& tol) {
  InclusionReport rep;
  for (int j = 0; j < etf.d(); ++j)
    rep.max_residual = std::max(rep.max_residual, sign_reconstruction_residual(etf, j));
  rep.all_contained = rep.max_residual < tol.lp_tol;
  return rep;
}

std::optional<KVector> strictness_witness(const MaximalETF& etf, const ToleranceConfig& tol) {
  if (etf.field == Field::Real && etf.n == 2) return std::nullopt;  // the bodies coincide
  const double c = rescale_constant(etf.field, etf.n);
  auto gap = [&](const KVector& x) {
    double sum = 0.0, mx = 0.0;
    for (const KVector& w : etf.vectors) {
      double a = std::abs(inner(x, w));
      sum += a;
      mx = std::max(mx, a);
    }
    return c * sum - mx;
  };

  if (etf.field == Field::Complex && etf.n == 2) {
    KVector x(Field::Complex, {cplx(0.0, 0.0), cplx(1.0, 0.0)});
    if (gap(x) > tol.lp_tol) return x;
  }

  Rng rng(0x5eedful);
  KVector best = rng.sphere_vector(etf.field, etf.n);
  double best_gap = gap(best);
  for (int s = 0; s < 10000; ++s) {
    KVector x = rng.sphere_vector(etf.field, etf.n);
    double g = gap(x);
    if (g > best_gap) {
      best_gap = g;
      best = x;
    }
  }
  double step = 0.25;
  int since_improvement = 0;
  for (int it = 0; it < 4000 && step > 1e-10; ++it) {
    KVector cand = add(best, scale(step, rng.sphere_vector(etf.field, etf.n)));
    double nc = norm(cand);
    if (nc < 1e-12) continue;
    cand = scale(1.0 / nc, cand);
    double g = gap(cand);
    if (g > best_gap) {
      best_gap = g;
      best = cand;
      since_improvement = 0;
    } else if (++since_improvement > 60) {
      step *= 0.5;
      since_improvement = 0;
    }
  }
  if (best_gap > tol.lp_tol) return best;
  return std::nullopt;
}

SandwichReport sandwich_test(const DualBallSpec& ball, const MaximalETF& etf, const KMatrix& T,
                             const ToleranceConfig& tol) {
  ball.validate();
  if (T.rows != etf.n || T.cols != etf.n) fail(Errc::DimensionMismatch, "transform of wrong shape");
  if (rank(T) < etf.n) fail(Errc::SingularTransform, "transform must be invertible");

  std::vector<KVector> mapped;
  mapped.reserve(ball.functionals.size());
  for (const KVector& f : ball.functionals) mapped.push_back(matvec(T, f));

  SandwichReport rep;
  for (int i = 0; i < etf.d(); ++i) {
    Certificate c = absconv_contains(mapped, etf.vectors[static_cast<std::size_t>(i)], tol);
    if (c.kind != Certificate::Kind::Membership) {
      rep.failing_item = "etf vector " + std::to_string(i) + " outside absconv(T ball)";
      return rep;
    }
  }
  ZonotopeSpec z{etf.vectors, rescale_constant(etf.field, etf.n)};
  for (std::size_t j = 0; j < mapped.size(); ++j) {
    Certificate c = zonotope_contains(z, mapped[j], tol);
    if (c.kind != Certificate::Kind::Membership) {
      rep.failing_item = "functional " + std::to_string(j) + " outside the rescaled zonotope";
      return rep;
    }
  }
  rep.is_extremal_for_T = true;
  return rep;
}

std::vector<DualBallSpec> extremal_family(const MaximalETF& etf, int count, std::uint64_t seed,
                                          const ToleranceConfig& tol) {
  if (etf.field == Field::Real && etf.n == 2)
    fail(Errc::NoStrictGap, "absconv and rescaled zonotope coincide for (R,2)");
  if (count < 1) fail(Errc::InvalidArgument, "count must be >= 1");

  const double c = rescale_constant(etf.field, etf.n);
  const double shrink = 1.0 - 1e-6;
  Rng rng(seed);

  std::vector<KVector> gens = etf.vectors;
  std::vector<DualBallSpec> out;
  ZonotopeSpec zono{etf.vectors, c};

  for (int step = 0; step < count; ++step) {
    bool found = false;
    for (long attempt = 0; attempt < 1000000 && !found; ++attempt) {
      KVector x = KVector::zeros(etf.field, etf.n);
      const bool extremal_sample = rng.uniform() < 0.5;
      for (const KVector& w : etf.vectors) {
        cplx a;
        if (etf.field == Field::Real) {
          double m = extremal_sample ? 1.0 : rng.uniform();
          a = (rng.uniform() < 0.5 ? -m : m);
        } else {
          double m = extremal_sample ? 1.0 : std::sqrt(rng.uniform());
          a = std::polar(m, 2.0 * std::numbers::pi * rng.uniform());
        }
        axpy(shrink * c * a, w, x);
      }
      try {
        Certificate inz = zonotope_contains(zono, x, tol);
        if (inz.kind != Certificate::Kind::Membership) continue;
        Certificate inhull = absconv_contains(gens, x, tol);
        if (inhull.kind != Certificate::Kind::Separation) continue;
      } catch (const Error& e) {
        if (e.code() == Errc::Undetermined) continue;  // cannot certify; resample
        throw;
      }
      gens.push_back(x);
      found = true;
    }
    if (!found) fail(Errc::SamplingExhausted, "no strictly-between point found in 10^6 samples");

    DualBallSpec spec{etf.field, etf.n, gens};
    SandwichReport rep = sandwich_test(spec, etf, KMatrix::identity(etf.field, etf.n), tol);
    if (!rep.is_extremal_for_T)
      fail(Errc::NumericalFailure, "constructed family member failed the sandwich test");
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace maxproj
