#include "maxproj/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "maxproj/rng.hpp"

namespace maxproj {

void OptimizerConfig::validate() const {
  if (restarts < 1 || max_iters < 1 || threads < 1) fail(Errc::InvalidArgument, "optimizer counts must be positive");
  if (eps_start <= 0 || eps_end <= 0 || eps_factor <= 0 || eps_factor >= 1 || eps_end > eps_start)
    fail(Errc::InvalidArgument, "smoothing schedule must decrease");
  if (convergence_tol <= 0 || backtrack_shrink <= 0 || backtrack_shrink >= 1)
    fail(Errc::InvalidArgument, "bad optimizer tolerances");
}

std::vector<double> perron_weights(const std::vector<KVector>& vectors) {
  if (vectors.empty()) fail(Errc::ZeroFrame, "empty frame");
  bool all_zero = true;
  for (const KVector& v : vectors)
    if (norm(v) > 0.0) all_zero = false;
  if (all_zero) fail(Errc::ZeroFrame, "all frame vectors vanish");

  const KMatrix m = modulus_gram(vectors);
  const int N = m.rows;
  double shift = 0.0;
  for (int i = 0; i < N; ++i) {
    double row = 0.0;
    for (int j = 0; j < N; ++j) row += std::real(m(i, j));
    shift = std::max(shift, row);
  }

  std::vector<double> t(static_cast<std::size_t>(N), 1.0 / std::sqrt(static_cast<double>(N)));
  double lambda = 0.0;
  for (int it = 0; it < 200000; ++it) {
    std::vector<double> w(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
      double s = shift * t[static_cast<std::size_t>(i)];
      for (int j = 0; j < N; ++j) s += std::real(m(i, j)) * t[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = s;
    }
    double nw = 0.0;
    for (double v : w) nw += v * v;
    nw = std::sqrt(nw);
    for (double& v : w) v /= nw;

    lambda = 0.0;
    double resid = 0.0;
    std::vector<double> mv(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
      double s = 0.0;
      for (int j = 0; j < N; ++j) s += std::real(m(i, j)) * w[static_cast<std::size_t>(j)];
      mv[static_cast<std::size_t>(i)] = s;
      lambda += s * w[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < N; ++i) {
      double r = mv[static_cast<std::size_t>(i)] - lambda * w[static_cast<std::size_t>(i)];
      resid += r * r;
    }
    t = std::move(w);
    if (std::sqrt(resid) <= 1e-13 * std::max(1.0, lambda)) break;
  }
  for (double& v : t) v = std::max(0.0, v);
  double nt = 0.0;
  for (double v : t) nt += v * v;
  nt = std::sqrt(nt);
  for (double& v : t) v /= nt;
  return t;
}

namespace {

struct FrameObjective {
  const std::vector<double>* t;
  double eps;

  // unsmoothed objective and the smoothed value/gradient machinery act on the
  // orthonormal factor u (N x n); row i is the frame vector u_i
  double value_smoothed(const KMatrix& g) const {
    const int N = g.rows;
    double f = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        f += (*t)[static_cast<std::size_t>(i)] * (*t)[static_cast<std::size_t>(j)] *
             std::sqrt(std::norm(g(i, j)) + eps * eps);
    return f;
  }

  KMatrix gram(const KMatrix& u) const { return matmul(u, adjoint(u)); }

  KMatrix euclidean_grad(const KMatrix& u, const KMatrix& g) const {
    const int N = u.rows;
    KMatrix w(u.field, N, N);
    for (int p = 0; p < N; ++p)
      for (int j = 0; j < N; ++j) {
        const double h = std::sqrt(std::norm(g(p, j)) + eps * eps);
        w(p, j) = (*t)[static_cast<std::size_t>(p)] * (*t)[static_cast<std::size_t>(j)] * g(p, j) / h;
      }
    return matmul(w, u);
  }
};

KMatrix tangent_project(const KMatrix& u, const KMatrix& grad) {
  KMatrix utg = matmul(adjoint(u), grad);
  KMatrix sym = scale(0.5, add(utg, adjoint(utg)));
  return sub(grad, matmul(u, sym));
}

// one smoothing level of Riemannian ascent; returns final gradient norm
double ascend(KMatrix& u, const std::vector<double>& t, double eps, int max_iters, double shrink,
              double grad_tol) {
  FrameObjective obj{&t, eps};
  double step = 1.0;
  double gnorm = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    KMatrix g = obj.gram(u);
    const double f = obj.value_smoothed(g);
    KMatrix delta = tangent_project(u, obj.euclidean_grad(u, g));
    gnorm = frobenius_norm(delta);
    if (gnorm < grad_tol) return gnorm;

    bool accepted = false;
    double alpha = std::min(1.0, step * 2.0);
    for (int bt = 0; bt < 60; ++bt) {
      KMatrix cand = qr_thin(add(u, scale(alpha, delta))).q;
      const double fc = obj.value_smoothed(obj.gram(cand));
      if (fc >= f + 1e-4 * alpha * gnorm * gnorm) {
        u = std::move(cand);
        step = alpha;
        accepted = true;
        break;
      }
      alpha *= shrink;
    }
    if (!accepted) return gnorm;  // no ascent step found: numerically stationary
  }
  return gnorm;
}

WeightedFrame frame_from_factor(Field field, int n, const KMatrix& u, const std::vector<double>& t) {
  WeightedFrame f;
  f.field = field;
  f.n = n;
  for (int i = 0; i < u.rows; ++i) f.vectors.push_back(u.row_vector(i));
  f.weights = t;
  return f;
}

double exact_phi(const KMatrix& u, const std::vector<double>& t) {
  KMatrix g = matmul(u, adjoint(u));
  double f = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.rows; ++j)
      f += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)] * std::abs(g(i, j));
  return f;
}

struct RestartOutcome {
  double value = 0.0;
  KMatrix u;
  std::vector<double> t;
  bool converged = false;
};

RestartOutcome run_restart(Field field, int n, int N, const OptimizerConfig& cfg, std::uint64_t seed,
                           bool optimize_weights) {
  Rng rng(seed);
  KMatrix u = rng.stiefel_point(field, N, n);
  std::vector<double> t(static_cast<std::size_t>(N), 1.0 / std::sqrt(static_cast<double>(N)));

  RestartOutcome out;
  double last_gnorm = 1.0;
  for (double eps = cfg.eps_start;; eps *= cfg.eps_factor) {
    if (eps < cfg.eps_end * 0.999) break;
    for (int round = 0; round < 8; ++round) {
      if (optimize_weights) {
        std::vector<KVector> vecs;
        vecs.reserve(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) vecs.push_back(u.row_vector(i));
        t = perron_weights(vecs);
      }
      last_gnorm = ascend(u, t, eps, cfg.max_iters / 8 + 1, cfg.backtrack_shrink,
                          std::max(cfg.convergence_tol, eps * 1e-4));
      if (!optimize_weights) break;  // weights fixed: one ascent pass per level
      if (last_gnorm < std::max(cfg.convergence_tol, eps * 1e-4)) break;
    }
  }
  if (optimize_weights) {
    std::vector<KVector> vecs;
    for (int i = 0; i < N; ++i) vecs.push_back(u.row_vector(i));
    t = perron_weights(vecs);
  }
  out.value = exact_phi(u, t);
  out.u = std::move(u);
  out.t = std::move(t);
  out.converged = last_gnorm < 1e-6;
  return out;
}

OptResult run_multistart(Field field, int n, int N, const OptimizerConfig& cfg, bool optimize_weights) {
  cfg.validate();
  if (N < n) fail(Errc::InvalidDimension, "need N >= n");
  if (n < 1) fail(Errc::InvalidDimension, "need n >= 1");

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  const int threads = std::max(1, std::min(cfg.threads, cfg.restarts));
  if (threads == 1) {
    for (int r = 0; r < cfg.restarts; ++r)
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(field, n, N, cfg, cfg.seed + static_cast<std::uint64_t>(r), optimize_weights);
  } else {
    std::vector<std::thread> pool;
    std::atomic_int next{0};
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= cfg.restarts) return;
          outcomes[static_cast<std::size_t>(r)] =
              run_restart(field, n, N, cfg, cfg.seed + static_cast<std::uint64_t>(r), optimize_weights);
        }
      });
    for (auto& th : pool) th.join();
  }

  int best = 0;
  OptResult res;
  for (int r = 0; r < cfg.restarts; ++r) {
    res.per_restart.push_back(outcomes[static_cast<std::size_t>(r)].value);
    if (outcomes[static_cast<std::size_t>(r)].value > outcomes[static_cast<std::size_t>(best)].value) best = r;
  }
  RestartOutcome& b = outcomes[static_cast<std::size_t>(best)];
  res.best_value = b.value;
  res.best_frame = frame_from_factor(field, n, b.u, b.t);
  res.converged = b.converged;
  return res;
}

}  // namespace

OptResult maximize_lambda_rel(Field field, int n, int N, const OptimizerConfig& cfg) {
  return run_multistart(field, n, N, cfg, true);
}

OptResult mu(Field field, int n, int N, const OptimizerConfig& cfg) {
  return run_multistart(field, n, N, cfg, false);
}

DivisibilityReport divisibility_check(Field field, int n, int N, const OptimizerConfig& cfg) {
  const bool supported = (field == Field::Real && (n == 2 || n == 3 || n == 7)) ||
                         (field == Field::Complex && (n == 2 || n == 3));
  if (!supported) fail(Errc::UnsupportedDimension, "no catalogued maximal ETF in this dimension");

  DivisibilityReport rep;
  rep.delta = delta_bound(field, n);
  rep.divisible = (N % gerzon_bound(field, n)) == 0;
  OptResult r = mu(field, n, N, cfg);
  rep.mu_value = r.best_value;
  rep.equality = std::abs(rep.mu_value - rep.delta) < 1e-6;
  rep.restarts_used = cfg.restarts;
  if (rep.equality != rep.divisible)
    fail(Errc::NumericalFailure,
         "divisibility check disagreed with the optimizer; raise restarts or iterations");
  return rep;
}

double frame_ascent_drift(const WeightedFrame& start, const OptimizerConfig& cfg) {
  start.validate();
  const int N = start.size();
  KMatrix u(start.field, N, start.n);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < start.n; ++a) u(i, a) = start.vectors[static_cast<std::size_t>(i)][a];
  const double before = exact_phi(u, start.weights);
  KMatrix u2 = u;
  ascend(u2, start.weights, cfg.eps_end, cfg.max_iters, cfg.backtrack_shrink, cfg.convergence_tol);
  const double after = exact_phi(u2, start.weights);
  return std::abs(after - before);
}

}  // namespace maxproj
