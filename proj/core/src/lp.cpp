#include "maxproj/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "maxproj/linalg.hpp"

namespace maxproj {

LinearProgram LinearProgram::make(int nvars, bool maximize) {
  if (nvars < 1) fail(Errc::InvalidArgument, "LP needs at least one variable");
  LinearProgram p;
  p.nvars = nvars;
  p.maximize = maximize;
  p.objective.assign(static_cast<std::size_t>(nvars), 0.0);
  p.lower.assign(static_cast<std::size_t>(nvars), 0.0);
  p.upper.assign(static_cast<std::size_t>(nvars), kInf);
  return p;
}

int LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  if (static_cast<int>(coeffs.size()) != nvars) fail(Errc::DimensionMismatch, "LP row of wrong length");
  rows.push_back(Row{std::move(coeffs), sense, rhs});
  return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::validate() const {
  if (static_cast<int>(objective.size()) != nvars || static_cast<int>(lower.size()) != nvars ||
      static_cast<int>(upper.size()) != nvars)
    fail(Errc::DimensionMismatch, "LP vectors of inconsistent length");
  auto bad = [](double v) { return std::isnan(v); };
  for (double v : objective)
    if (bad(v) || std::isinf(v)) fail(Errc::InvalidArgument, "non-finite LP objective entry");
  for (const Row& r : rows) {
    if (static_cast<int>(r.coeffs.size()) != nvars) fail(Errc::DimensionMismatch, "LP row of wrong length");
    if (bad(r.rhs) || std::isinf(r.rhs)) fail(Errc::InvalidArgument, "non-finite LP rhs");
    for (double v : r.coeffs)
      if (bad(v) || std::isinf(v)) fail(Errc::InvalidArgument, "non-finite LP coefficient");
  }
  for (int j = 0; j < nvars; ++j)
    if (lower[static_cast<std::size_t>(j)] > upper[static_cast<std::size_t>(j)])
      fail(Errc::InvalidArgument, "empty variable bound interval");
}

namespace {

constexpr double kPivTol = 1e-11;

// One transformed column: original variable index, sign, shift applied.
struct ColMap {
  int var = -1;
  double sign = 1.0;
};

struct Standard {
  // A x = b, x >= 0; columns: structural (with ColMap), then slacks, then
  // artificials. rowsign maps std-row duals back to input rows; row i of the
  // input (plus appended bound rows) corresponds 1:1 to std row i.
  int m = 0;
  int nstruct = 0;
  int nslack = 0;
  int nart = 0;
  std::vector<double> a;  // m x ncols
  std::vector<double> b;
  std::vector<double> cost;  // phase-2 costs (structural only nonzero)
  std::vector<ColMap> colmap;
  std::vector<double> rowsign;
  std::vector<int> slack_of_row;  // -1 if none
  std::vector<int> art_of_row;    // -1 if none
  std::vector<double> shift;      // per original var: x = sign * x' + shift (splits: shift 0)
  std::vector<int> first_col_of_var;
  std::vector<int> second_col_of_var;  // for free splits, else -1
  int ncols() const { return nstruct + nslack + nart; }
};

struct BoundRow {
  int var;
  double rhs;  // x_var <= rhs
};

// Builds the equality standard form. Bound rows (x_j <= u_j - l_j after
// shifting) are appended after the input rows.
Standard build_standard(const LinearProgram& p, const std::vector<BoundRow>& bound_rows) {
  const int n = p.nvars;
  Standard s;
  s.shift.assign(static_cast<std::size_t>(n), 0.0);
  s.first_col_of_var.assign(static_cast<std::size_t>(n), -1);
  s.second_col_of_var.assign(static_cast<std::size_t>(n), -1);

  for (int j = 0; j < n; ++j) {
    const double lo = p.lower[static_cast<std::size_t>(j)];
    const double up = p.upper[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      s.shift[static_cast<std::size_t>(j)] = lo;
      s.first_col_of_var[static_cast<std::size_t>(j)] = s.nstruct;
      s.colmap.push_back({j, 1.0});
      ++s.nstruct;
    } else if (std::isfinite(up)) {
      // x = up - x'
      s.shift[static_cast<std::size_t>(j)] = up;
      s.first_col_of_var[static_cast<std::size_t>(j)] = s.nstruct;
      s.colmap.push_back({j, -1.0});
      ++s.nstruct;
    } else {
      s.first_col_of_var[static_cast<std::size_t>(j)] = s.nstruct;
      s.colmap.push_back({j, 1.0});
      ++s.nstruct;
      s.second_col_of_var[static_cast<std::size_t>(j)] = s.nstruct;
      s.colmap.push_back({j, -1.0});
      ++s.nstruct;
    }
  }

  const int total_rows = static_cast<int>(p.rows.size()) + static_cast<int>(bound_rows.size());
  s.m = total_rows;
  s.rowsign.assign(static_cast<std::size_t>(total_rows), 1.0);
  s.slack_of_row.assign(static_cast<std::size_t>(total_rows), -1);
  s.art_of_row.assign(static_cast<std::size_t>(total_rows), -1);

  // count slacks/artificials
  std::vector<RowSense> sense(static_cast<std::size_t>(total_rows));
  std::vector<double> rhs(static_cast<std::size_t>(total_rows));
  std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(total_rows));

  auto transformed_row = [&](const std::vector<double>& coeffs, double r, RowSense sn, int i) {
    double b = r;
    std::vector<std::pair<int, double>> entries;
    for (int j = 0; j < n; ++j) {
      const double aij = coeffs[static_cast<std::size_t>(j)];
      if (aij == 0.0) continue;
      b -= aij * s.shift[static_cast<std::size_t>(j)];
      const int c1 = s.first_col_of_var[static_cast<std::size_t>(j)];
      entries.emplace_back(c1, aij * s.colmap[static_cast<std::size_t>(c1)].sign);
      const int c2 = s.second_col_of_var[static_cast<std::size_t>(j)];
      if (c2 >= 0) entries.emplace_back(c2, -aij);
    }
    sense[static_cast<std::size_t>(i)] = sn;
    rhs[static_cast<std::size_t>(i)] = b;
    cols[static_cast<std::size_t>(i)] = std::move(entries);
  };

  for (int i = 0; i < static_cast<int>(p.rows.size()); ++i)
    transformed_row(p.rows[static_cast<std::size_t>(i)].coeffs, p.rows[static_cast<std::size_t>(i)].rhs,
                    p.rows[static_cast<std::size_t>(i)].sense, i);
  for (int k = 0; k < static_cast<int>(bound_rows.size()); ++k) {
    std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
    coeffs[static_cast<std::size_t>(bound_rows[static_cast<std::size_t>(k)].var)] = 1.0;
    transformed_row(coeffs, bound_rows[static_cast<std::size_t>(k)].rhs, RowSense::LessEq,
                    static_cast<int>(p.rows.size()) + k);
  }

  // normalize: flip rows so rhs >= 0, assign slacks (coefficient +1 after
  // flipping) or artificials
  for (int i = 0; i < total_rows; ++i) {
    double sign = 1.0;
    if (rhs[static_cast<std::size_t>(i)] < 0.0) sign = -1.0;
    s.rowsign[static_cast<std::size_t>(i)] = sign;
    double slack_coeff = 0.0;
    if (sense[static_cast<std::size_t>(i)] == RowSense::LessEq) slack_coeff = sign;
    else if (sense[static_cast<std::size_t>(i)] == RowSense::GreaterEq) slack_coeff = -sign;
    if (slack_coeff > 0.0) {
      s.slack_of_row[static_cast<std::size_t>(i)] = s.nslack++;
    } else if (slack_coeff < 0.0) {
      s.slack_of_row[static_cast<std::size_t>(i)] = s.nslack++;
      s.art_of_row[static_cast<std::size_t>(i)] = s.nart++;
    } else {
      s.art_of_row[static_cast<std::size_t>(i)] = s.nart++;
    }
  }

  const int nc = s.ncols();
  s.a.assign(static_cast<std::size_t>(total_rows) * nc, 0.0);
  s.b.assign(static_cast<std::size_t>(total_rows), 0.0);
  for (int i = 0; i < total_rows; ++i) {
    const double sign = s.rowsign[static_cast<std::size_t>(i)];
    s.b[static_cast<std::size_t>(i)] = sign * rhs[static_cast<std::size_t>(i)];
    double* arow = &s.a[static_cast<std::size_t>(i) * nc];
    for (const auto& [c, v] : cols[static_cast<std::size_t>(i)]) arow[c] += sign * v;
    if (s.slack_of_row[static_cast<std::size_t>(i)] >= 0) {
      double sc = sense[static_cast<std::size_t>(i)] == RowSense::LessEq ? sign : -sign;
      arow[s.nstruct + s.slack_of_row[static_cast<std::size_t>(i)]] = sc;
    }
    if (s.art_of_row[static_cast<std::size_t>(i)] >= 0)
      arow[s.nstruct + s.nslack + s.art_of_row[static_cast<std::size_t>(i)]] = 1.0;
  }

  s.cost.assign(static_cast<std::size_t>(nc), 0.0);
  for (int c = 0; c < s.nstruct; ++c) {
    const ColMap& cm = s.colmap[static_cast<std::size_t>(c)];
    s.cost[static_cast<std::size_t>(c)] =
        cm.sign * p.objective[static_cast<std::size_t>(cm.var)] * (p.maximize ? -1.0 : 1.0);
  }
  return s;
}

class Tableau {
 public:
  explicit Tableau(const Standard& s) : m_(s.m), nc_(s.ncols()) {
    t_.assign(static_cast<std::size_t>(m_ + 1) * (nc_ + 1), 0.0);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      double* row = row_ptr(i);
      const double* arow = &s.a[static_cast<std::size_t>(i) * nc_];
      std::copy(arow, arow + nc_, row);
      row[nc_] = s.b[static_cast<std::size_t>(i)];
      if (s.art_of_row[static_cast<std::size_t>(i)] >= 0)
        basis_[static_cast<std::size_t>(i)] = s.nstruct + s.nslack + s.art_of_row[static_cast<std::size_t>(i)];
      else
        basis_[static_cast<std::size_t>(i)] = s.nstruct + s.slack_of_row[static_cast<std::size_t>(i)];
    }
  }

  double* row_ptr(int i) { return &t_[static_cast<std::size_t>(i) * (nc_ + 1)]; }
  const double* row_ptr(int i) const { return &t_[static_cast<std::size_t>(i) * (nc_ + 1)]; }
  double* obj_row() { return row_ptr(m_); }
  const double* obj_row() const { return row_ptr(m_); }

  void load_costs(const std::vector<double>& cost, const std::vector<bool>& barred) {
    double* obj = obj_row();
    std::fill(obj, obj + nc_ + 1, 0.0);
    for (int j = 0; j < nc_; ++j) obj[j] = cost[static_cast<std::size_t>(j)];
    // price out the current basis
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      const double* row = row_ptr(i);
      for (int j = 0; j <= nc_; ++j) obj[j] -= cb * row[j];
    }
    barred_ = barred;
  }

  // Ratio test over every strictly positive entry (so no basic variable is
  // ever driven negative); among the minimum-ratio rows the largest pivot
  // element wins, lowest row index on ties. Columns whose blocking pivot is
  // numerically tiny are rejected for stability and the next candidate tried.
  // returns 0 optimal, 1 unbounded, 2 iteration-limit
  int run(int max_iters, int& iters) {
    int degenerate_streak = 0;
    bool bland = false;
    std::vector<char> rejected(static_cast<std::size_t>(nc_), 0);
    for (; iters < max_iters; ++iters) {
      const double* obj = obj_row();
      int enter = -1;
      if (!bland) {
        double best = -1e-9;
        for (int j = 0; j < nc_; ++j) {
          if (barred_[static_cast<std::size_t>(j)] || rejected[static_cast<std::size_t>(j)]) continue;
          if (obj[j] < best) {
            best = obj[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < nc_; ++j) {
          if (barred_[static_cast<std::size_t>(j)] || rejected[static_cast<std::size_t>(j)]) continue;
          if (obj[j] < -1e-9) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) {
        bool any_rejected = false;
        for (int j = 0; j < nc_; ++j)
          if (rejected[static_cast<std::size_t>(j)] && obj[j] < -1e-9) any_rejected = true;
        return any_rejected ? 2 : 0;  // stalled on unstable columns only
      }

      // two-pass Harris ratio test: pass 1 finds the tolerance-relaxed step
      // bound, pass 2 takes the largest pivot within it (lowest index on ties)
      double theta = kInf;
      bool any_positive = false;
      for (int i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[enter];
        if (a > 1e-30) {
          any_positive = true;
          const double b = row_ptr(i)[nc_];
          theta = std::min(theta, (b + 1e-9 * (1.0 + std::abs(b))) / a);
        }
      }
      if (!any_positive) return 1;
      int leave = -1;
      double best_pivot = 0.0;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[enter];
        if (a > 1e-30) {
          const double ratio = row_ptr(i)[nc_] / a;
          if (ratio <= theta && a > best_pivot) {
            best_pivot = a;
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0 || best_pivot < kPivTol) {
        rejected[static_cast<std::size_t>(enter)] = 1;
        --iters;
        continue;
      }
      std::fill(rejected.begin(), rejected.end(), 0);

      if (best_ratio < 1e-13) {
        if (++degenerate_streak > 1000) bland = true;  // Bland's rule fallback
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
    return 2;
  }

  void pivot(int leave, int enter) {
    double* prow = row_ptr(leave);
    const double pv = prow[enter];
    const double inv = 1.0 / pv;
    for (int j = 0; j <= nc_; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == leave) continue;
      double* row = row_ptr(i);
      const double f = row[enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= nc_; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    basis_[static_cast<std::size_t>(leave)] = enter;
  }

  double objective_value() const { return -obj_row()[nc_]; }

  const std::vector<int>& basis() const { return basis_; }
  int m() const { return m_; }
  int ncols() const { return nc_; }
  double rhs(int i) const { return row_ptr(i)[nc_]; }
  double entry(int i, int j) const { return row_ptr(i)[j]; }

 private:
  int m_, nc_;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<bool> barred_;
};

}  // namespace

GeForm ge_expansion(const LinearProgram& p) {
  GeForm f;
  auto push = [&](std::vector<double> g, double h) {
    f.g.push_back(std::move(g));
    f.h.push_back(h);
  };
  for (const auto& r : p.rows) {
    if (r.sense == RowSense::GreaterEq) {
      push(r.coeffs, r.rhs);
    } else if (r.sense == RowSense::LessEq) {
      std::vector<double> g(r.coeffs);
      for (double& v : g) v = -v;
      push(std::move(g), -r.rhs);
    } else {
      push(r.coeffs, r.rhs);
      std::vector<double> g(r.coeffs);
      for (double& v : g) v = -v;
      push(std::move(g), -r.rhs);
    }
  }
  for (int j = 0; j < p.nvars; ++j) {
    if (std::isfinite(p.lower[static_cast<std::size_t>(j)])) {
      std::vector<double> g(static_cast<std::size_t>(p.nvars), 0.0);
      g[static_cast<std::size_t>(j)] = 1.0;
      push(std::move(g), p.lower[static_cast<std::size_t>(j)]);
    }
    if (std::isfinite(p.upper[static_cast<std::size_t>(j)])) {
      std::vector<double> g(static_cast<std::size_t>(p.nvars), 0.0);
      g[static_cast<std::size_t>(j)] = -1.0;
      push(std::move(g), -p.upper[static_cast<std::size_t>(j)]);
    }
  }
  return f;
}

LpResult solve_lp(const LinearProgram& p, const ToleranceConfig& tol) {
  p.validate();
  LpResult res;

  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < p.nvars; ++j)
    if (std::isfinite(p.lower[static_cast<std::size_t>(j)]) &&
        std::isfinite(p.upper[static_cast<std::size_t>(j)]))
      bound_rows.push_back({j, p.upper[static_cast<std::size_t>(j)]});

  Standard s = build_standard(p, bound_rows);
  Tableau tab(s);
  const int nc = s.ncols();
  const int art0 = s.nstruct + s.nslack;

  std::vector<bool> barred(static_cast<std::size_t>(nc), false);
  int iters = 0;
  const int max_iters = 2000 * (s.m + nc) + 20000;

  // phase 1
  if (s.nart > 0) {
    std::vector<double> c1(static_cast<std::size_t>(nc), 0.0);
    for (int k = 0; k < s.nart; ++k) c1[static_cast<std::size_t>(art0 + k)] = 1.0;
    tab.load_costs(c1, barred);
    int rc = tab.run(max_iters, iters);
    if (rc == 2) {
      res.status = LpStatus::NumericalFailure;
      res.note = "phase-1 iteration limit";
      return res;
    }
    const double w = tab.objective_value();
    double scale = 1.0;
    for (double b : s.b) scale = std::max(scale, std::abs(b));
    if (w > 1e-9 * scale) {
      res.status = LpStatus::Infeasible;
      // phase-1 duals: y_i = c_idcol - objrow[idcol]
      std::vector<double> y(static_cast<std::size_t>(s.m), 0.0);
      const double* obj = tab.obj_row();
      for (int i = 0; i < s.m; ++i) {
        int idc = s.art_of_row[static_cast<std::size_t>(i)] >= 0
                      ? art0 + s.art_of_row[static_cast<std::size_t>(i)]
                      : s.nstruct + s.slack_of_row[static_cast<std::size_t>(i)];
        double c = idc >= art0 ? 1.0 : 0.0;
        y[static_cast<std::size_t>(i)] = (c - obj[idc]) * s.rowsign[static_cast<std::size_t>(i)];
      }
      // translate into >=-expansion multipliers; bound-row multipliers are the
      // reduced-cost residuals of each variable column
      GeForm ge = ge_expansion(p);
      std::vector<double> lambda(ge.g.size(), 0.0);
      int pos = 0;
      std::vector<int> row_lambda_pos(p.rows.size(), -1);
      for (std::size_t i = 0; i < p.rows.size(); ++i) {
        row_lambda_pos[i] = pos;
        pos += p.rows[i].sense == RowSense::Equal ? 2 : 1;
      }
      std::vector<double> colsum(static_cast<std::size_t>(p.nvars), 0.0);
      for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const double mu = y[i];
        for (int j = 0; j < p.nvars; ++j)
          colsum[static_cast<std::size_t>(j)] += mu * p.rows[i].coeffs[static_cast<std::size_t>(j)];
        switch (p.rows[i].sense) {
          case RowSense::GreaterEq: lambda[static_cast<std::size_t>(row_lambda_pos[i])] = std::max(0.0, mu); break;
          case RowSense::LessEq: lambda[static_cast<std::size_t>(row_lambda_pos[i])] = std::max(0.0, -mu); break;
          case RowSense::Equal:
            lambda[static_cast<std::size_t>(row_lambda_pos[i])] = std::max(0.0, mu);
            lambda[static_cast<std::size_t>(row_lambda_pos[i]) + 1] = std::max(0.0, -mu);
            break;
        }
      }
      // bound-row multipliers from the appended <=-rows plus residual closing
      std::size_t bpos = static_cast<std::size_t>(pos);
      std::vector<double> upper_mu(static_cast<std::size_t>(p.nvars), 0.0);
      for (std::size_t k = 0; k < bound_rows.size(); ++k)
        upper_mu[static_cast<std::size_t>(bound_rows[k].var)] =
            std::max(0.0, -y[p.rows.size() + k]);
      for (int j = 0; j < p.nvars; ++j) {
        const bool lo_fin = std::isfinite(p.lower[static_cast<std::size_t>(j)]);
        const bool up_fin = std::isfinite(p.upper[static_cast<std::size_t>(j)]);
        double r = colsum[static_cast<std::size_t>(j)];
        if (lo_fin) {
          // lambda_lo - lambda_up_extra + colsum = 0
          double lam_up = up_fin ? upper_mu[static_cast<std::size_t>(j)] : 0.0;
          lambda[bpos++] = std::max(0.0, lam_up - r);
          if (up_fin) lambda[bpos++] = lam_up;
        } else if (up_fin) {
          lambda[bpos++] = std::max(0.0, r);
        }
      }
      // verify
      double viol = 0.0, value = 0.0;
      std::vector<double> comb(static_cast<std::size_t>(p.nvars), 0.0);
      for (std::size_t r = 0; r < ge.g.size(); ++r) {
        for (int j = 0; j < p.nvars; ++j)
          comb[static_cast<std::size_t>(j)] += lambda[r] * ge.g[r][static_cast<std::size_t>(j)];
        value += lambda[r] * ge.h[r];
      }
      for (double v : comb) viol = std::max(viol, std::abs(v));
      if (viol < tol.lp_tol && value > tol.lp_tol) {
        res.farkas = std::move(lambda);
        res.note = "farkas verified";
      } else {
        res.note = "farkas extraction failed verification";
      }
      res.iterations = iters;
      return res;
    }
    // drive artificials out of the basis where possible
    for (int i = 0; i < s.m; ++i) {
      int bi = tab.basis()[static_cast<std::size_t>(i)];
      if (bi < art0) continue;
      int enter = -1;
      for (int j = 0; j < art0; ++j)
        if (std::abs(tab.entry(i, j)) > 1e-8) {
          enter = j;
          break;
        }
      if (enter >= 0) tab.pivot(i, enter);
    }
  }

  for (int k = 0; k < s.nart; ++k) barred[static_cast<std::size_t>(art0 + k)] = true;
  tab.load_costs(s.cost, barred);
  int rc = tab.run(max_iters, iters);
  res.iterations = iters;
  if (rc == 2) {
    res.status = LpStatus::NumericalFailure;
    res.note = "phase-2 iteration limit";
    return res;
  }
  if (rc == 1) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  // primal and dual from a fresh factorization of the final basis; the
  // tableau accumulates drift over many pivots
  std::vector<double> xstd(static_cast<std::size_t>(nc), 0.0);
  std::vector<double> ystd(static_cast<std::size_t>(s.m), 0.0);
  {
    KMatrix bmat(Field::Real, s.m, s.m);
    KVector brhs = KVector::zeros(Field::Real, s.m);
    KVector cb = KVector::zeros(Field::Real, s.m);
    for (int i = 0; i < s.m; ++i) {
      const int col = tab.basis()[static_cast<std::size_t>(i)];
      for (int r2 = 0; r2 < s.m; ++r2) bmat(r2, i) = s.a[static_cast<std::size_t>(r2) * nc + col];
      brhs[i] = s.b[static_cast<std::size_t>(i)];
      cb[i] = col < s.nstruct + s.nslack ? s.cost[static_cast<std::size_t>(col)] : 0.0;
    }
    // start from the tableau solution and apply residual correction; exact
    // tableau solutions stay bit-identical
    KVector xb = KVector::zeros(Field::Real, s.m);
    for (int i = 0; i < s.m; ++i) xb[i] = tab.rhs(i);
    KVector yv = KVector::zeros(Field::Real, s.m);
    {
      const double* objr0 = tab.obj_row();
      for (int i = 0; i < s.m; ++i) {
        const int idc = s.art_of_row[static_cast<std::size_t>(i)] >= 0
                            ? art0 + s.art_of_row[static_cast<std::size_t>(i)]
                            : s.nstruct + s.slack_of_row[static_cast<std::size_t>(i)];
        yv[i] = -objr0[idc];
      }
    }
    try {
      for (int pass = 0; pass < 2; ++pass) {
        KVector rx = sub(brhs, matvec(bmat, xb));
        if (norm(rx) > 0.0) xb = add(xb, lstsq(bmat, rx));
        KVector ry = sub(cb, matvec(adjoint(bmat), yv));
        if (norm(ry) > 0.0) yv = add(yv, lstsq(adjoint(bmat), ry));
      }
    } catch (const Error&) {
      // singular basis factorization: keep the raw tableau values
    }
    for (int i = 0; i < s.m; ++i) {
      xstd[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])] = std::real(xb[i]);
      ystd[static_cast<std::size_t>(i)] = std::real(yv[i]);
    }
  }
  res.x.assign(static_cast<std::size_t>(p.nvars), 0.0);
  for (int j = 0; j < p.nvars; ++j) res.x[static_cast<std::size_t>(j)] = s.shift[static_cast<std::size_t>(j)];
  for (int c = 0; c < s.nstruct; ++c) {
    const ColMap& cm = s.colmap[static_cast<std::size_t>(c)];
    res.x[static_cast<std::size_t>(cm.var)] += cm.sign * xstd[static_cast<std::size_t>(c)];
  }

  double obj = 0.0;
  for (int j = 0; j < p.nvars; ++j)
    obj += p.objective[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
  res.objective = obj;

  res.dual.assign(p.rows.size(), 0.0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double y = ystd[i] * s.rowsign[i];
    res.dual[i] = p.maximize ? -y : y;
  }
  // dual objective in min form: y^T b over all rows (incl. bound rows) plus
  // reduced-cost terms r_j * lo_j / r_j * up_j for finite bounds
  std::vector<double> ymin(static_cast<std::size_t>(s.m), 0.0);
  for (int i = 0; i < s.m; ++i)
    ymin[static_cast<std::size_t>(i)] = ystd[static_cast<std::size_t>(i)] * s.rowsign[static_cast<std::size_t>(i)];
  double dualobj = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) dualobj += ymin[i] * p.rows[i].rhs;
  for (std::size_t k = 0; k < bound_rows.size(); ++k)
    dualobj += ymin[p.rows.size() + k] * bound_rows[k].rhs;
  std::vector<double> bound_dual(static_cast<std::size_t>(p.nvars), 0.0);
  for (std::size_t k = 0; k < bound_rows.size(); ++k)
    bound_dual[static_cast<std::size_t>(bound_rows[k].var)] = ymin[p.rows.size() + k];
  for (int j = 0; j < p.nvars; ++j) {
    double r = (p.maximize ? -1.0 : 1.0) * p.objective[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < p.rows.size(); ++i)
      r -= ymin[i] * p.rows[i].coeffs[static_cast<std::size_t>(j)];
    r -= bound_dual[static_cast<std::size_t>(j)];
    if (std::abs(r) < 1e-9) continue;
    const double lo = p.lower[static_cast<std::size_t>(j)];
    const double up = p.upper[static_cast<std::size_t>(j)];
    if (r > 0.0 && std::isfinite(lo)) dualobj += r * lo;
    else if (r < 0.0 && std::isfinite(up) && !std::isfinite(lo)) dualobj += r * up;
  }
  res.dual_objective = p.maximize ? -dualobj : dualobj;

  // residuals
  double pres = 0.0;
  for (const auto& r : p.rows) {
    double ax = 0.0;
    for (int j = 0; j < p.nvars; ++j)
      ax += r.coeffs[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    double v = 0.0;
    if (r.sense == RowSense::Equal) v = std::abs(ax - r.rhs);
    else if (r.sense == RowSense::LessEq) v = std::max(0.0, ax - r.rhs);
    else v = std::max(0.0, r.rhs - ax);
    pres = std::max(pres, v);
  }
  for (int j = 0; j < p.nvars; ++j) {
    pres = std::max(pres, std::max(0.0, p.lower[static_cast<std::size_t>(j)] - res.x[static_cast<std::size_t>(j)]));
    pres = std::max(pres, std::max(0.0, res.x[static_cast<std::size_t>(j)] - p.upper[static_cast<std::size_t>(j)]));
  }
  res.primal_residual = pres;
  res.gap = std::abs(res.objective - res.dual_objective);
  res.status = LpStatus::Optimal;

  double scale = std::max(1.0, std::abs(res.objective));
  if (pres > tol.lp_tol * scale) {
    res.status = LpStatus::NumericalFailure;
    res.note = "primal residual above tolerance";
  }
  return res;
}

namespace {

// dense LL^T with diagonal bumping for near-semidefinite normal matrices
class Cholesky {
 public:
  explicit Cholesky(std::vector<double> m, int n) : l_(std::move(m)), n_(n) {
    double dmax = 0.0;
    for (int i = 0; i < n_; ++i) dmax = std::max(dmax, l_[static_cast<std::size_t>(i) * n_ + i]);
    const double bump = 1e-13 * std::max(1.0, dmax);
    for (int j = 0; j < n_; ++j) {
      double d = l_[static_cast<std::size_t>(j) * n_ + j];
      for (int k = 0; k < j; ++k) {
        const double v = l_[static_cast<std::size_t>(j) * n_ + k];
        d -= v * v;
      }
      if (d < bump) d = bump;
      d = std::sqrt(d);
      l_[static_cast<std::size_t>(j) * n_ + j] = d;
      for (int i = j + 1; i < n_; ++i) {
        double v = l_[static_cast<std::size_t>(i) * n_ + j];
        const double* ri = &l_[static_cast<std::size_t>(i) * n_];
        const double* rj = &l_[static_cast<std::size_t>(j) * n_];
        for (int k = 0; k < j; ++k) v -= ri[k] * rj[k];
        l_[static_cast<std::size_t>(i) * n_ + j] = v / d;
      }
    }
  }

  void solve(std::vector<double>& x) const {
    for (int i = 0; i < n_; ++i) {
      double v = x[static_cast<std::size_t>(i)];
      const double* ri = &l_[static_cast<std::size_t>(i) * n_];
      for (int k = 0; k < i; ++k) v -= ri[k] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = v / ri[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double v = x[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < n_; ++k)
        v -= l_[static_cast<std::size_t>(k) * n_ + i] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = v / l_[static_cast<std::size_t>(i) * n_ + i];
    }
  }

 private:
  std::vector<double> l_;
  int n_;
};

}  // namespace

LpResult solve_lp_interior(const LinearProgram& p, const ToleranceConfig& tol) {
  p.validate();
  LpResult res;

  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < p.nvars; ++j)
    if (std::isfinite(p.lower[static_cast<std::size_t>(j)]) &&
        std::isfinite(p.upper[static_cast<std::size_t>(j)]))
      bound_rows.push_back({j, p.upper[static_cast<std::size_t>(j)]});

  Standard s = build_standard(p, bound_rows);
  const int m = s.m;
  const int n = s.nstruct + s.nslack;  // artificial columns excluded

  // column-sparse view of A
  std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    const double* arow = &s.a[static_cast<std::size_t>(i) * s.ncols()];
    for (int j = 0; j < n; ++j)
      if (arow[j] != 0.0) cols[static_cast<std::size_t>(j)].emplace_back(i, arow[j]);
  }
  const std::vector<double>& b = s.b;
  std::vector<double> c(s.cost.begin(), s.cost.begin() + n);

  auto matvec_a = [&](const std::vector<double>& x) {
    std::vector<double> r(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < n; ++j) {
      const double xj = x[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      for (const auto& [i, v] : cols[static_cast<std::size_t>(j)]) r[static_cast<std::size_t>(i)] += v * xj;
    }
    return r;
  };
  auto matvec_at = [&](const std::vector<double>& y) {
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (const auto& [i, w] : cols[static_cast<std::size_t>(j)]) v += w * y[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(j)] = v;
    }
    return r;
  };
  auto normal_matrix = [&](const std::vector<double>& d) {
    std::vector<double> mm(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < n; ++j) {
      const double dj = d[static_cast<std::size_t>(j)];
      const auto& cj = cols[static_cast<std::size_t>(j)];
      for (std::size_t a = 0; a < cj.size(); ++a) {
        const double va = dj * cj[a].second;
        double* row = &mm[static_cast<std::size_t>(cj[a].first) * m];
        for (std::size_t bb = 0; bb <= a; ++bb) row[cj[bb].first] += va * cj[bb].second;
      }
    }
    // mirror the lower triangle
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        mm[static_cast<std::size_t>(i) * m + j] = mm[static_cast<std::size_t>(j) * m + i];
    return mm;
  };

  // starting point (Mehrotra's heuristic)
  std::vector<double> x, y, sl;
  {
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    Cholesky f(normal_matrix(ones), m);
    std::vector<double> w = b;
    f.solve(w);
    x = matvec_at(w);
    std::vector<double> ac = matvec_a(c);
    f.solve(ac);
    y = ac;
    sl = matvec_at(y);
    for (int j = 0; j < n; ++j) sl[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] - sl[static_cast<std::size_t>(j)];
    double dx = 0.0, ds = 0.0;
    for (double v : x) dx = std::max(dx, -1.5 * v);
    for (double v : sl) ds = std::max(ds, -1.5 * v);
    double px = 0.0, psum = 0.0, ssum = 0.0;
    for (int j = 0; j < n; ++j)
      px += (x[static_cast<std::size_t>(j)] + dx) * (sl[static_cast<std::size_t>(j)] + ds);
    for (int j = 0; j < n; ++j) {
      psum += x[static_cast<std::size_t>(j)] + dx;
      ssum += sl[static_cast<std::size_t>(j)] + ds;
    }
    const double dx2 = dx + 0.5 * px / std::max(ssum, 1e-8);
    const double ds2 = ds + 0.5 * px / std::max(psum, 1e-8);
    for (double& v : x) v += dx2 + 1e-8;
    for (double& v : sl) v += ds2 + 1e-8;
  }

  double bscale = 1.0, cscale = 1.0;
  for (double v : b) bscale = std::max(bscale, std::abs(v));
  for (double v : c) cscale = std::max(cscale, std::abs(v));

  // split pairs for free variables: their A-columns and costs are exact
  // opposites, so draining the common part keeps the iterate equivalent and
  // stops the pair from drifting to infinity
  std::vector<std::pair<int, int>> split_pairs;
  for (int j = 0; j < p.nvars; ++j)
    if (s.second_col_of_var[static_cast<std::size_t>(j)] >= 0)
      split_pairs.emplace_back(s.first_col_of_var[static_cast<std::size_t>(j)],
                               s.second_col_of_var[static_cast<std::size_t>(j)]);
  auto recenter = [&](double mu) {
    const double target = std::max(std::sqrt(std::max(mu, 0.0)), 1e-10);
    for (const auto& [jp, jm] : split_pairs) {
      double& xp = x[static_cast<std::size_t>(jp)];
      double& xm = x[static_cast<std::size_t>(jm)];
      const double drain = std::min(xp, xm) - target;
      if (drain > 0.0) {
        xp -= drain;
        xm -= drain;
      }
    }
  };

  bool converged = false;
  for (int it = 0; it < 120; ++it) {
    std::vector<double> ax = matvec_a(x);
    std::vector<double> rp(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rp[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - ax[static_cast<std::size_t>(i)];
    std::vector<double> aty = matvec_at(y);
    std::vector<double> rd(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      rd[static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(j)] - aty[static_cast<std::size_t>(j)] - sl[static_cast<std::size_t>(j)];
    double mu = 0.0, rpn = 0.0, rdn = 0.0;
    for (int j = 0; j < n; ++j) mu += x[static_cast<std::size_t>(j)] * sl[static_cast<std::size_t>(j)];
    mu /= n;
    for (double v : rp) rpn = std::max(rpn, std::abs(v));
    for (double v : rd) rdn = std::max(rdn, std::abs(v));
    if (std::getenv("MAXPROJ_IPM_TRACE"))
      std::fprintf(stderr, "ipm it=%d mu=%.3e rp=%.3e rd=%.3e\n", it, mu, rpn, rdn);
    if (rpn < 2e-9 * bscale && rdn < 1e-9 * cscale && mu < 1e-11 * std::max(1.0, cscale)) {
      converged = true;
      break;
    }

    std::vector<double> d(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      d[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] / sl[static_cast<std::size_t>(j)];
    Cholesky f(normal_matrix(d), m);

    auto solve_dirs = [&](const std::vector<double>& rxs, std::vector<double>& dx,
                          std::vector<double>& dy, std::vector<double>& ds) {
      // rhs = rp + A (D rd - rxs / s)
      std::vector<double> t(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        t[static_cast<std::size_t>(j)] =
            d[static_cast<std::size_t>(j)] * rd[static_cast<std::size_t>(j)] -
            rxs[static_cast<std::size_t>(j)] / sl[static_cast<std::size_t>(j)];
      std::vector<double> rhs = matvec_a(t);
      for (int i = 0; i < m; ++i) rhs[static_cast<std::size_t>(i)] += rp[static_cast<std::size_t>(i)];
      f.solve(rhs);
      dy = rhs;
      std::vector<double> atdy = matvec_at(dy);
      ds.assign(static_cast<std::size_t>(n), 0.0);
      dx.assign(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j < n; ++j) {
        ds[static_cast<std::size_t>(j)] = rd[static_cast<std::size_t>(j)] - atdy[static_cast<std::size_t>(j)];
        dx[static_cast<std::size_t>(j)] =
            rxs[static_cast<std::size_t>(j)] / sl[static_cast<std::size_t>(j)] -
            d[static_cast<std::size_t>(j)] * ds[static_cast<std::size_t>(j)];
      }
    };
    auto max_step = [&](const std::vector<double>& v, const std::vector<double>& dv) {
      double a = 1.0;
      for (int j = 0; j < n; ++j)
        if (dv[static_cast<std::size_t>(j)] < 0.0)
          a = std::min(a, -v[static_cast<std::size_t>(j)] / dv[static_cast<std::size_t>(j)]);
      return a;
    };

    // affine scaling step
    std::vector<double> rxs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      rxs[static_cast<std::size_t>(j)] = -x[static_cast<std::size_t>(j)] * sl[static_cast<std::size_t>(j)];
    std::vector<double> dxa, dya, dsa;
    solve_dirs(rxs, dxa, dya, dsa);
    const double apa = max_step(x, dxa), ada = max_step(sl, dsa);
    double mua = 0.0;
    for (int j = 0; j < n; ++j)
      mua += (x[static_cast<std::size_t>(j)] + apa * dxa[static_cast<std::size_t>(j)]) *
             (sl[static_cast<std::size_t>(j)] + ada * dsa[static_cast<std::size_t>(j)]);
    mua /= n;
    const double sigma = std::pow(std::max(0.0, mua / mu), 3.0);

    // corrector
    for (int j = 0; j < n; ++j)
      rxs[static_cast<std::size_t>(j)] =
          sigma * mu - x[static_cast<std::size_t>(j)] * sl[static_cast<std::size_t>(j)] -
          dxa[static_cast<std::size_t>(j)] * dsa[static_cast<std::size_t>(j)];
    std::vector<double> dx, dy, ds;
    solve_dirs(rxs, dx, dy, ds);
    const double ap = 0.995 * max_step(x, dx);
    const double ad = 0.995 * max_step(sl, ds);
    for (int j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(j)] += ap * dx[static_cast<std::size_t>(j)];
      sl[static_cast<std::size_t>(j)] += ad * ds[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < m; ++i) y[static_cast<std::size_t>(i)] += ad * dy[static_cast<std::size_t>(i)];
    double mu_now = 0.0;
    for (int j = 0; j < n; ++j) mu_now += x[static_cast<std::size_t>(j)] * sl[static_cast<std::size_t>(j)];
    recenter(mu_now / n);
  }

  if (!converged) {
    res.status = LpStatus::NumericalFailure;
    res.note = "interior-point iteration limit";
    return res;
  }

  // map back
  res.x.assign(static_cast<std::size_t>(p.nvars), 0.0);
  for (int j = 0; j < p.nvars; ++j) res.x[static_cast<std::size_t>(j)] = s.shift[static_cast<std::size_t>(j)];
  for (int cidx = 0; cidx < s.nstruct; ++cidx) {
    const ColMap& cm = s.colmap[static_cast<std::size_t>(cidx)];
    res.x[static_cast<std::size_t>(cm.var)] += cm.sign * x[static_cast<std::size_t>(cidx)];
  }
  double obj = 0.0;
  for (int j = 0; j < p.nvars; ++j)
    obj += p.objective[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
  res.objective = obj;

  res.dual.assign(p.rows.size(), 0.0);
  double dualobj = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const double ymin = y[i] * s.rowsign[i];
    res.dual[i] = p.maximize ? -ymin : ymin;
    dualobj += ymin * p.rows[i].rhs;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k)
    dualobj += y[p.rows.size() + k] * s.rowsign[p.rows.size() + k] * bound_rows[k].rhs;
  res.dual_objective = p.maximize ? -dualobj : dualobj;

  double pres = 0.0;
  for (const auto& r : p.rows) {
    double axv = 0.0;
    for (int j = 0; j < p.nvars; ++j)
      axv += r.coeffs[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    if (r.sense == RowSense::Equal) pres = std::max(pres, std::abs(axv - r.rhs));
    else if (r.sense == RowSense::LessEq) pres = std::max(pres, axv - r.rhs);
    else pres = std::max(pres, r.rhs - axv);
  }
  res.primal_residual = std::max(0.0, pres);
  res.gap = std::abs(res.objective - res.dual_objective);
  res.status = LpStatus::Optimal;
  if (res.primal_residual > tol.lp_tol * std::max(1.0, std::abs(res.objective))) {
    res.status = LpStatus::NumericalFailure;
    res.note = "interior-point primal residual above tolerance";
  }
  return res;
}

std::string lp_to_text(const LinearProgram& p) {
  std::ostringstream os;
  os << (p.maximize ? "max" : "min");
  for (int j = 0; j < p.nvars; ++j) os << ' ' << p.objective[static_cast<std::size_t>(j)];
  os << '\n';
  for (const auto& r : p.rows) {
    for (double v : r.coeffs) os << v << ' ';
    os << (r.sense == RowSense::LessEq ? "<=" : r.sense == RowSense::Equal ? "==" : ">=");
    os << ' ' << r.rhs << '\n';
  }
  os << "bounds";
  for (int j = 0; j < p.nvars; ++j)
    os << " [" << p.lower[static_cast<std::size_t>(j)] << ',' << p.upper[static_cast<std::size_t>(j)] << ']';
  os << '\n';
  return os.str();
}

}  // namespace maxproj
