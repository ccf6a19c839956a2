#include "dispatch.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxproj/constants.hpp"
#include "maxproj/equality.hpp"
#include "maxproj/io.hpp"
#include "maxproj/lp.hpp"
#include "maxproj/minproj.hpp"
#include "maxproj/optimize.hpp"

namespace maxproj::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "maxproj 0.1.0";

Field parse_field_flag(const std::string& f) {
  if (f == "R" || f == "r") return Field::Real;
  if (f == "C" || f == "c") return Field::Complex;
  fail(Errc::InvalidArgument, "--field must be R or C");
}

std::uint64_t seed_or_env(std::int64_t seed_flag) {
  if (seed_flag >= 0) return static_cast<std::uint64_t>(seed_flag);
  if (const char* env = std::getenv("PROJCONST_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

struct Report {
  json j;
  std::string path;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit Report(const std::vector<std::string>& args) {
    j["version"] = kVersion;
    j["command"] = args;
    j["inputs"] = json::object();
  }
  void input(const std::string& p) { j["inputs"][p] = io::digest_hex(io::read_file(p)); }
  void finish() {
    if (path.empty()) return;
    j["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    io::write_file(path, j.dump(2) + "\n");
  }
};

json vector_summary(const KVector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) {
    json e = json::array();
    e.push_back(v[i].real());
    if (v.field == Field::Complex) e.push_back(v[i].imag());
    a.push_back(e);
  }
  return a;
}

json matrix_summary(const KMatrix& m) {
  json a = json::array();
  for (const cplx& z : m.data) {
    json e = json::array();
    e.push_back(z.real());
    if (m.field == Field::Complex) e.push_back(z.imag());
    a.push_back(e);
  }
  return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", a}};
}

io::FrameDoc doc_from_frame(const WeightedFrame& f) {
  io::FrameDoc d;
  d.field = f.field;
  d.n = f.n;
  d.vectors = f.vectors;
  d.weights = f.weights;
  return d;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"maximal projection constants via equiangular tight frames"};
  app.set_version_flag("--version", kVersion);

  std::string field_str = "R", input, output, ball_path, point_path, coeffs_path, transform_path,
              report_path, etf_tag, output_prefix;
  int n = 2, bigN = 2, count = 1, restarts = 32, iters = 5000, threads = 1;
  std::int64_t seed = -1;
  double tol_flag = 1e-9, zono_scale = 0.0;
  bool unit_tight = false, zonotope_mode = false, dump_lp = false;

  auto add_common = [&](CLI::App* c) { c->add_option("--report", report_path, "write a JSON run report"); };

  auto* c_const = app.add_subcommand("constants", "closed-form constants d, phi, delta, C");
  c_const->add_option("--field", field_str)->required();
  c_const->add_option("--n", n)->required();
  add_common(c_const);

  auto* c_etf = app.add_subcommand("etf", "build or verify maximal ETFs");
  auto* c_build = c_etf->add_subcommand("build", "construct a catalogued maximal ETF");
  c_build->add_option("--field", field_str)->required();
  c_build->add_option("--n", n)->required();
  c_build->add_option("--output", output, "write the vectors as a frame file");
  c_build->add_flag("--unit-tight", unit_tight, "write the rescaled tight frame with weights");
  add_common(c_build);
  auto* c_verify = c_etf->add_subcommand("verify", "verify a frame file as a maximal ETF");
  c_verify->add_option("--input", input)->required();
  c_verify->add_option("--tol", tol_flag, "verification tolerance");
  add_common(c_verify);
  c_etf->require_subcommand(1);

  auto* c_phi = app.add_subcommand("phi", "weighted frame objective");
  c_phi->add_option("--input", input)->required();
  add_common(c_phi);

  auto* c_eq = app.add_subcommand("equality-check", "test the four equality conditions");
  c_eq->add_option("--input", input)->required();
  add_common(c_eq);

  auto add_opt_flags = [&](CLI::App* c) {
    c->add_option("--field", field_str)->required();
    c->add_option("--n", n)->required();
    c->add_option("--N", bigN)->required();
    c->add_option("--restarts", restarts);
    c->add_option("--iters", iters);
    c->add_option("--seed", seed);
    c->add_option("--threads", threads);
    c->add_option("--output", output, "write the best frame");
    add_common(c);
  };
  auto* c_max = app.add_subcommand("maximize", "maximal relative projection constant estimate");
  add_opt_flags(c_max);
  auto* c_mu = app.add_subcommand("mu", "quasimaximal constant (uniform weights)");
  add_opt_flags(c_mu);
  auto* c_div = app.add_subcommand("divisibility", "mu equality vs divisibility of N by d");
  add_opt_flags(c_div);

  auto* c_contains = app.add_subcommand("contains", "membership of a point in absconv or zonotope");
  c_contains->add_option("--ball", ball_path, "generator set (dual ball JSON)")->required();
  c_contains->add_option("--point", point_path)->required();
  c_contains->add_flag("--zonotope", zonotope_mode, "query the zonotope instead of absconv");
  c_contains->add_option("--scale", zono_scale, "zonotope scale (default n/(d delta))");
  c_contains->add_flag("--dump-lp", dump_lp, "print solver programs in tableau text form");
  add_common(c_contains);

  auto* c_sand = app.add_subcommand("sandwich", "two-sided extremality test for a dual ball");
  c_sand->add_option("--ball", ball_path)->required();
  c_sand->add_option("--field", field_str)->required();
  c_sand->add_option("--n", n)->required();
  c_sand->add_option("--transform", transform_path, "optional matrix JSON for T (default identity)");
  add_common(c_sand);

  auto* c_family = app.add_subcommand("family", "nested extremal dual balls");
  c_family->add_option("--field", field_str)->required();
  c_family->add_option("--n", n)->required();
  c_family->add_option("--count", count)->required();
  c_family->add_option("--seed", seed);
  c_family->add_option("--output-prefix", output_prefix, "write members as <prefix><k>.json");
  add_common(c_family);

  auto* c_minproj = app.add_subcommand("minproj", "relative projection constant by LP");
  c_minproj->add_option("--input", ball_path, "dual ball JSON")->required();
  add_common(c_minproj);

  auto* c_cm = app.add_subcommand("cm", "Chalmers-Metcalf operator for an ETF space");
  c_cm->add_option("--etf", etf_tag, "catalogued ETF tag, e.g. R2, R3, R7, C2, C3")->required();
  c_cm->add_option("--coeffs", coeffs_path, "zonotope coefficient grid (matrix JSON)");
  add_common(c_cm);

  auto* c_incl = app.add_subcommand("inclusion", "absconv within rescaled zonotope check");
  c_incl->add_option("--field", field_str)->required();
  c_incl->add_option("--n", n)->required();
  add_common(c_incl);

  auto* c_wit = app.add_subcommand("witness", "strictness witness for the inclusion");
  c_wit->add_option("--field", field_str)->required();
  c_wit->add_option("--n", n)->required();
  add_common(c_wit);

  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("maxproj");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? 0 : 2;
    }

    Report rep(args);
    rep.path = report_path;
    ToleranceConfig tol;

    if (c_const->parsed()) {
      const Field f = parse_field_flag(field_str);
      const int d = gerzon_bound(f, n);
      const double phi = welch_angle(f, n);
      const double delta = delta_bound(f, n);
      const double c = rescale_constant(f, n);
      std::printf("field=%s n=%d\n", field_name(f), n);
      std::printf("  d (Gerzon bound)   = %d\n", d);
      std::printf("  phi (common angle) = %.10f\n", phi);
      std::printf("  delta (bound)      = %.10f\n", delta);
      std::printf("  C = n/(d*delta)    = %.10f\n", c);
      std::printf("  sign identity      = %.17g (target 1)\n", sign_reconstruction_identity(f, n));
      rep.j["results"] = {{"d", d}, {"phi", phi}, {"delta", delta}, {"rescale", c}};
      rep.finish();
      return 0;
    }

    if (c_build->parsed()) {
      const Field f = parse_field_flag(field_str);
      MaximalETF etf = build_maximal_etf(f, n);
      EtfReport er = verify_etf(etf.vectors);
      std::printf("built maximal ETF (%s,%d): d=%d angle=%.10f spread=%.3e tightness=%.3e\n",
                  field_name(f), n, etf.d(), er.angle_value, er.angle_spread, er.tightness_residual);
      if (!output.empty()) {
        io::FrameDoc doc;
        if (unit_tight) {
          doc = doc_from_frame(to_unit_tight_frame(etf));
        } else {
          doc.field = f;
          doc.n = n;
          doc.vectors = etf.vectors;
        }
        io::save_frame(output, doc);
        std::printf("wrote %s\n", output.c_str());
      }
      rep.j["results"] = {{"d", etf.d()},
                          {"angle", er.angle_value},
                          {"angle_spread", er.angle_spread},
                          {"unit_residual", er.unit_residual},
                          {"tightness_residual", er.tightness_residual}};
      rep.finish();
      return 0;
    }

    if (c_verify->parsed()) {
      rep.input(input);
      io::FrameDoc doc = io::load_frame(input);
      EtfReport er = verify_etf(doc.vectors);
      std::printf("vectors=%zu unit_residual=%.3e angle=%.10f spread=%.3e tightness=%.3e maximal=%s\n",
                  doc.vectors.size(), er.unit_residual, er.angle_value, er.angle_spread,
                  er.tightness_residual, er.is_maximal ? "yes" : "no");
      rep.j["results"] = {{"unit_residual", er.unit_residual},
                          {"angle", er.angle_value},
                          {"angle_spread", er.angle_spread},
                          {"tightness_residual", er.tightness_residual},
                          {"is_maximal", er.is_maximal}};
      rep.finish();
      const bool ok = er.unit_residual < tol_flag && er.angle_spread < tol_flag &&
                      er.tightness_residual < tol_flag && er.is_maximal;
      return ok ? 0 : 1;
    }

    if (c_phi->parsed()) {
      rep.input(input);
      WeightedFrame f = io::load_frame(input).as_weighted_frame();
      const double tight = tightness_residual(f);
      const double phi = objective_phi(f);
      std::printf("phi=%.17g tightness_residual=%.3e delta=%.17g\n", phi, tight,
                  delta_bound(f.field, f.n));
      rep.j["results"] = {{"phi", phi}, {"tightness_residual", tight}};
      rep.finish();
      return 0;
    }

    if (c_eq->parsed()) {
      rep.input(input);
      WeightedFrame f = io::load_frame(input).as_weighted_frame();
      EqualityReport er = check_equality_conditions(f);
      std::printf("condition1=%d condition2=%d condition3=%d condition4=%d\n", er.condition1_ok,
                  er.condition2_ok, er.condition3_ok, er.condition4_ok);
      std::printf("residuals: %.3e %.3e %.3e %.3e\n", er.residual1, er.residual2, er.residual3,
                  er.residual4);
      std::printf("phi=%.17g delta=%.17g direction_groups=%zu\n", er.phi, er.delta,
                  er.groups.size() - 1);
      rep.j["results"] = {{"condition1", er.condition1_ok}, {"condition2", er.condition2_ok},
                          {"condition3", er.condition3_ok}, {"condition4", er.condition4_ok},
                          {"phi", er.phi},                  {"delta", er.delta},
                          {"group_sums", er.group_sums}};
      rep.finish();
      return er.all_ok() ? 0 : 1;
    }

    if (c_max->parsed() || c_mu->parsed() || c_div->parsed()) {
      const Field f = parse_field_flag(field_str);
      OptimizerConfig cfg;
      cfg.restarts = restarts;
      cfg.max_iters = iters;
      cfg.seed = seed_or_env(seed);
      cfg.threads = threads;

      if (c_div->parsed()) {
        DivisibilityReport dr = divisibility_check(f, n, bigN, cfg);
        std::printf("mu=%.12f delta=%.12f equality=%s divisible=%s restarts=%d\n", dr.mu_value,
                    dr.delta, dr.equality ? "yes" : "no", dr.divisible ? "yes" : "no",
                    dr.restarts_used);
        rep.j["results"] = {{"mu", dr.mu_value},
                            {"delta", dr.delta},
                            {"equality", dr.equality},
                            {"divisible", dr.divisible},
                            {"restarts", dr.restarts_used}};
        rep.finish();
        return 0;
      }

      const bool quasi = c_mu->parsed();
      OptResult r = quasi ? mu(f, n, bigN, cfg) : maximize_lambda_rel(f, n, bigN, cfg);
      std::printf("%s(%s, n=%d, N=%d) best=%.12f converged=%s seed=%llu restarts=%d\n",
                  quasi ? "mu" : "lambda", field_name(f), n, bigN, r.best_value,
                  r.converged ? "yes" : "no", static_cast<unsigned long long>(cfg.seed), cfg.restarts);
      std::printf("restart values:");
      for (double v : r.per_restart) std::printf(" %.9f", v);
      std::printf("\n");
      if (!output.empty()) {
        io::save_frame(output, doc_from_frame(r.best_frame));
        std::printf("wrote %s\n", output.c_str());
      }
      rep.j["results"] = {{"value", r.best_value},
                          {"converged", r.converged},
                          {"per_restart", r.per_restart},
                          {"seed", cfg.seed},
                          {"weights", r.best_frame.weights}};
      json vb = json::array();
      for (const KVector& v : r.best_frame.vectors) vb.push_back(vector_summary(v));
      rep.j["results"]["frame"] = vb;
      rep.finish();
      return 0;
    }

    if (c_contains->parsed()) {
      rep.input(ball_path);
      rep.input(point_path);
      DualBallSpec ball = io::load_ball(ball_path);
      KVector x = io::load_point(point_path);
      Certificate cert;
      if (zonotope_mode) {
        double s = zono_scale > 0.0 ? zono_scale : rescale_constant(ball.field, ball.n);
        ZonotopeSpec z{ball.functionals, s};
        if (dump_lp && ball.field == Field::Real)
          std::fputs(lp_to_text(zonotope_membership_lp(z, x)).c_str(), stderr);
        cert = zonotope_contains(z, x, tol);
      } else {
        if (dump_lp && ball.field == Field::Real)
          std::fputs(lp_to_text(absconv_membership_lp(ball.functionals, x)).c_str(), stderr);
        cert = absconv_contains(ball.functionals, x, tol);
      }
      if (cert.kind == Certificate::Kind::Membership) {
        std::printf("membership: reconstruction residual %.3e\n", cert.residual);
        json cj = json::array();
        for (const cplx& a : cert.coefficients) {
          json e = json::array();
          e.push_back(a.real());
          if (ball.field == Field::Complex) e.push_back(a.imag());
          cj.push_back(e);
        }
        rep.j["results"] = {{"kind", "membership"}, {"residual", cert.residual}, {"coefficients", cj}};
      } else {
        std::printf("separation: verified margin %.3e\n", cert.residual);
        rep.j["results"] = {{"kind", "separation"},
                            {"margin", cert.residual},
                            {"separator", vector_summary(cert.separator)}};
      }
      rep.finish();
      return 0;
    }

    if (c_sand->parsed()) {
      rep.input(ball_path);
      const Field f = parse_field_flag(field_str);
      DualBallSpec ball = io::load_ball(ball_path);
      MaximalETF etf = build_maximal_etf(f, n);
      KMatrix t = KMatrix::identity(f, n);
      if (!transform_path.empty()) {
        rep.input(transform_path);
        t = io::load_matrix(transform_path);
      }
      SandwichReport sr = sandwich_test(ball, etf, t, tol);
      std::printf("extremal=%s%s%s\n", sr.is_extremal_for_T ? "yes" : "no",
                  sr.failing_item ? " failing: " : "", sr.failing_item ? sr.failing_item->c_str() : "");
      rep.j["results"] = {{"extremal", sr.is_extremal_for_T}};
      if (sr.failing_item) rep.j["results"]["failing_item"] = *sr.failing_item;
      rep.finish();
      return sr.is_extremal_for_T ? 0 : 1;
    }

    if (c_family->parsed()) {
      const Field f = parse_field_flag(field_str);
      MaximalETF etf = build_maximal_etf(f, n);
      std::vector<DualBallSpec> fam = extremal_family(etf, count, seed_or_env(seed), tol);
      json sizes = json::array();
      for (std::size_t k = 0; k < fam.size(); ++k) {
        std::printf("member %zu: %zu functionals\n", k + 1, fam[k].functionals.size());
        sizes.push_back(fam[k].functionals.size());
        if (!output_prefix.empty())
          io::save_ball(output_prefix + std::to_string(k + 1) + ".json", fam[k]);
      }
      rep.j["results"] = {{"sizes", sizes}, {"seed", seed_or_env(seed)}};
      rep.finish();
      return 0;
    }

    if (c_minproj->parsed()) {
      rep.input(ball_path);
      DualBallSpec ball = io::load_ball(ball_path);
      SubspaceOfLinf s = embed_norm(ball);
      MinProjResult mr = min_projection_lp(s, tol);
      LambdaUpperReport ur = lambda_upper_report(s, tol);
      std::printf("lambda = %.12f (delta bound %.12f, Kadec-Snobar %.12f)\n", mr.lambda_rel,
                  ur.delta_upper, ur.kadec_snobar);
      std::printf("projection residuals: idempotency %.3e, invariance %.3e\n",
                  mr.idempotency_residual, mr.invariance_residual);
      std::printf("optimal projection (%dx%d):\n", mr.projection.rows, mr.projection.cols);
      for (int i = 0; i < mr.projection.rows; ++i) {
        for (int j = 0; j < mr.projection.cols; ++j)
          std::printf(" % .9f", std::real(mr.projection(i, j)));
        std::printf("\n");
      }
      rep.j["results"] = {{"lambda", mr.lambda_rel},
                          {"delta_upper", ur.delta_upper},
                          {"kadec_snobar", ur.kadec_snobar},
                          {"idempotency_residual", mr.idempotency_residual},
                          {"invariance_residual", mr.invariance_residual},
                          {"projection", matrix_summary(mr.projection)}};
      rep.finish();
      return 0;
    }

    if (c_cm->parsed()) {
      if (etf_tag.size() < 2) fail(Errc::InvalidArgument, "--etf expects e.g. R2 or C3");
      const Field f = parse_field_flag(etf_tag.substr(0, 1));
      const int dim = std::atoi(etf_tag.c_str() + 1);
      MaximalETF etf = build_maximal_etf(f, dim);
      KMatrix coeffs(f, 1, 1);
      const KMatrix* cp = nullptr;
      if (!coeffs_path.empty()) {
        rep.input(coeffs_path);
        coeffs = io::load_matrix(coeffs_path);
        cp = &coeffs;
      }
      CMBuildResult br = cm_build(etf, cp, tol);
      CMReport cr = cm_verify(br.op, br.space);
      const double delta = delta_bound(f, dim);
      std::printf("N=%d trace_on_X=%.12f (target delta=%.12f) column_sum=%.12f invariance=%.3e\n",
                  br.space.N, cr.trace_on_X.real(), delta, cr.column_sum, cr.invariance_residual);
      rep.j["results"] = {{"trace_on_X", cr.trace_on_X.real()},
                          {"delta", delta},
                          {"column_sum", cr.column_sum},
                          {"invariance_residual", cr.invariance_residual},
                          {"lstsq_residual", cr.lstsq_residual},
                          {"E", matrix_summary(br.op.e)}};
      rep.finish();
      const bool ok = std::abs(cr.trace_on_X.real() - delta) < 1e-9 &&
                      std::abs(cr.trace_on_X.imag()) < 1e-9 &&
                      std::abs(cr.column_sum - 1.0) < 1e-12 && cr.invariance_residual < tol.residual_tol;
      return ok ? 0 : 1;
    }

    if (c_incl->parsed()) {
      const Field f = parse_field_flag(field_str);
      MaximalETF etf = build_maximal_etf(f, n);
      InclusionReport ir = inclusion_check(etf, tol);
      std::printf("all_contained=%s max_residual=%.3e\n", ir.all_contained ? "yes" : "no",
                  ir.max_residual);
      rep.j["results"] = {{"all_contained", ir.all_contained}, {"max_residual", ir.max_residual}};
      rep.finish();
      return ir.all_contained ? 0 : 1;
    }

    if (c_wit->parsed()) {
      const Field f = parse_field_flag(field_str);
      MaximalETF etf = build_maximal_etf(f, n);
      std::optional<KVector> w = strictness_witness(etf, tol);
      if (!w) {
        const bool expected = (f == Field::Real && n == 2);
        std::printf("no witness%s\n", expected ? " (the bodies coincide)" : " found");
        rep.j["results"] = {{"witness", nullptr}};
        rep.finish();
        return expected ? 0 : 1;
      }
      const double c = rescale_constant(f, n);
      double sum = 0.0, mx = 0.0;
      for (const KVector& wi : etf.vectors) {
        double a = std::abs(inner(*w, wi));
        sum += a;
        mx = std::max(mx, a);
      }
      std::printf("witness found: C*sum=%.12f > max=%.12f (gap %.3e)\n", c * sum, mx, c * sum - mx);
      rep.j["results"] = {{"witness", vector_summary(*w)}, {"gap", c * sum - mx}};
      rep.finish();
      return 0;
    }

    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.code()) {
      case Errc::Undetermined:
        return 3;
      case Errc::NumericalFailure:
      case Errc::NotTight:
      case Errc::ConditionsNotMet:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace maxproj::cli
