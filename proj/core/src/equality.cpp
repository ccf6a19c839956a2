#include "maxproj/equality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxproj {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

void unite(std::vector<int>& parent, int a, int b) {
  parent[static_cast<std::size_t>(find_root(parent, a))] = find_root(parent, b);
}

}  // namespace

EqualityReport check_equality_conditions(const WeightedFrame& f, const ToleranceConfig& tol) {
  f.validate();
  if (tightness_residual(f, tol) >= tol.residual_tol)
    fail(Errc::NotTight, "equality conditions require a tight frame with constant 1");

  const int N = f.size();
  const double zero_thresh = 1e-12 * std::sqrt(static_cast<double>(f.n));

  EqualityReport rep;
  rep.delta = delta_bound(f.field, f.n);
  rep.phi = objective_phi(f, tol);

  std::vector<int> zero_idx, live_idx;
  for (int i = 0; i < N; ++i) {
    if (norm(f.vectors[static_cast<std::size_t>(i)]) < zero_thresh)
      zero_idx.push_back(i);
    else
      live_idx.push_back(i);
  }

  // condition 1: t vanishes exactly on A_0
  rep.condition1_ok = true;
  for (int i : zero_idx) {
    rep.residual1 = std::max(rep.residual1, f.weights[static_cast<std::size_t>(i)]);
    if (f.weights[static_cast<std::size_t>(i)] >= tol.residual_tol) rep.condition1_ok = false;
  }
  for (int i : live_idx)
    if (f.weights[static_cast<std::size_t>(i)] < tol.residual_tol) rep.condition1_ok = false;

  // direction grouping on the nonzero vectors: transitive closure of
  // | |<u_i,u_j>|/(|u_i||u_j|) - 1 | < residual_tol
  const int L = static_cast<int>(live_idx.size());
  std::vector<KVector> unit_dirs;
  unit_dirs.reserve(static_cast<std::size_t>(L));
  for (int i : live_idx) {
    const KVector& u = f.vectors[static_cast<std::size_t>(i)];
    unit_dirs.push_back(scale(1.0 / norm(u), u));
  }
  std::vector<int> parent(static_cast<std::size_t>(L));
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      double m = std::abs(inner(unit_dirs[static_cast<std::size_t>(a)], unit_dirs[static_cast<std::size_t>(b)]));
      if (std::abs(m - 1.0) < tol.residual_tol) unite(parent, a, b);
    }

  std::vector<std::vector<int>> dir_groups;  // entries are positions in live_idx
  {
    std::vector<int> root_to_group(static_cast<std::size_t>(L), -1);
    for (int a = 0; a < L; ++a) {
      int r = find_root(parent, a);
      if (root_to_group[static_cast<std::size_t>(r)] < 0) {
        root_to_group[static_cast<std::size_t>(r)] = static_cast<int>(dir_groups.size());
        dir_groups.emplace_back();
      }
      dir_groups[static_cast<std::size_t>(root_to_group[static_cast<std::size_t>(r)])].push_back(a);
    }
  }
  const int m = static_cast<int>(dir_groups.size());
  const int d = gerzon_bound(f.field, f.n);
  const double phi_angle = welch_angle(f.field, f.n);

  // condition 2: inter-group angles all equal phi_K(n) and group count = d
  rep.condition2_ok = (m == d) && (L > 0);
  for (int ga = 0; ga < m; ++ga)
    for (int gb = ga + 1; gb < m; ++gb)
      for (int a : dir_groups[static_cast<std::size_t>(ga)])
        for (int b : dir_groups[static_cast<std::size_t>(gb)]) {
          double ang =
              std::abs(inner(unit_dirs[static_cast<std::size_t>(a)], unit_dirs[static_cast<std::size_t>(b)]));
          rep.residual2 = std::max(rep.residual2, std::abs(ang - phi_angle));
        }
  if (rep.residual2 >= tol.residual_tol) rep.condition2_ok = false;

  // condition 3: group weight masses 1/d each
  rep.condition3_ok = (m == d);
  for (const auto& g : dir_groups) {
    double s = 0.0;
    for (int a : g) {
      double t = f.weights[static_cast<std::size_t>(live_idx[static_cast<std::size_t>(a)])];
      s += t * t;
    }
    rep.group_sums.push_back(s);
    rep.residual3 = std::max(rep.residual3, std::abs(s - 1.0 / d));
  }
  if (rep.residual3 >= tol.residual_tol) rep.condition3_ok = false;

  // condition 4: ||u_i|| = sqrt(n) t_i everywhere
  const double sqn = std::sqrt(static_cast<double>(f.n));
  for (int i = 0; i < N; ++i)
    rep.residual4 = std::max(rep.residual4, std::abs(norm(f.vectors[static_cast<std::size_t>(i)]) -
                                                     sqn * f.weights[static_cast<std::size_t>(i)]));
  rep.condition4_ok = rep.residual4 < tol.residual_tol;

  rep.groups.push_back(zero_idx);
  for (const auto& g : dir_groups) {
    std::vector<int> orig;
    for (int a : g) orig.push_back(live_idx[static_cast<std::size_t>(a)]);
    rep.groups.push_back(std::move(orig));
  }

  if (rep.condition2_ok) {
    std::vector<KVector> reps;
    for (const auto& g : dir_groups) reps.push_back(unit_dirs[static_cast<std::size_t>(g.front())]);
    rep.matched_etf = MaximalETF{f.field, f.n, std::move(reps), phi_angle};
  }
  return rep;
}

WeightedFrame build_equality_config(const MaximalETF& etf, const std::vector<int>& multiplicities,
                                    const std::vector<std::vector<double>>& intra_weights,
                                    const ToleranceConfig& tol) {
  const int d = etf.d();
  if (static_cast<int>(multiplicities.size()) != d || static_cast<int>(intra_weights.size()) != d)
    fail(Errc::InvalidArgument, "need one multiplicity and one weight list per ETF vector");

  WeightedFrame f;
  f.field = etf.field;
  f.n = etf.n;
  const double sqn = std::sqrt(static_cast<double>(etf.n));
  for (int j = 0; j < d; ++j) {
    const auto& s = intra_weights[static_cast<std::size_t>(j)];
    if (multiplicities[static_cast<std::size_t>(j)] < 1)
      fail(Errc::InvalidArgument, "multiplicities must be >= 1");
    if (static_cast<int>(s.size()) != multiplicities[static_cast<std::size_t>(j)])
      fail(Errc::InvalidArgument, "intra-group weight list has wrong length");
    double mass = 0.0;
    for (double w : s) {
      if (w <= 0.0) fail(Errc::InvalidWeights, "intra-group weights must be positive");
      mass += w * w;
    }
    if (std::abs(mass - 1.0 / d) > tol.identity_tol)
      fail(Errc::InvalidWeights, "group weight mass must equal 1/d");
    for (double w : s) {
      f.vectors.push_back(scale(sqn * w, etf.vectors[static_cast<std::size_t>(j)]));
      f.weights.push_back(w);
    }
  }
  return f;
}

double weighted_reconstruction_residual(const WeightedFrame& f, int j, const ToleranceConfig& tol) {
  if (j < 0 || j >= f.size()) fail(Errc::IndexOutOfRange, "weighted_reconstruction_residual index");
  EqualityReport rep = check_equality_conditions(f, tol);
  if (!rep.all_ok())
    fail(Errc::ConditionsNotMet, "weighted reconstruction requires an equality-case frame");

  const KVector& uj = f.vectors[static_cast<std::size_t>(j)];
  const double tj = f.weights[static_cast<std::size_t>(j)];
  const double zero_thresh = 1e-12 * std::sqrt(static_cast<double>(f.n));
  const double nuj = norm(uj);

  KVector acc = KVector::zeros(f.field, f.n);
  for (int i = 0; i < f.size(); ++i) {
    const KVector& ui = f.vectors[static_cast<std::size_t>(i)];
    const double ti = f.weights[static_cast<std::size_t>(i)];
    if (norm(ui) < zero_thresh || ti == 0.0) continue;
    cplx ip = inner(uj, ui);
    if (std::abs(ip) == 0.0) {
      if (nuj >= zero_thresh)
        fail(Errc::NumericalFailure, "weighted reconstruction hit a vanishing inner product");
      continue;  // u_j = 0: the prefactor n t_j / delta vanishes as well
    }
    axpy(ti * sgn(ip), ui, acc);
  }
  const double pref = f.n * tj / delta_bound(f.field, f.n);
  return norm(sub(uj, scale(pref, acc)));
}

}  // namespace maxproj
