#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iegs/matrix.hpp"

namespace iegs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterLimit: return "iteration-limit";
  }
  return "?";
}

// Minimization LP over bounded variables with <=, >=, = rows.
struct LpProblem {
  std::vector<double> obj;
  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<std::string> var_names;

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<char> senses;  // 'L' <=, 'G' >=, 'E' =
  std::vector<double> rhs;
  std::vector<std::string> row_names;

  int num_vars() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(double lower, double upper, double cost, std::string name = {}) {
    obj.push_back(cost);
    lb.push_back(lower);
    ub.push_back(upper);
    if (name.empty()) name = "x" + std::to_string(obj.size() - 1);
    var_names.push_back(std::move(name));
    return num_vars() - 1;
  }

  int add_row(std::vector<std::pair<int, double>> coefs, char sense, double b,
              std::string name = {}) {
    if (sense != 'L' && sense != 'G' && sense != 'E')
      throw std::invalid_argument("row sense must be L, G, or E");
    // merge duplicate column entries so downstream consumers see one coef per var
    std::sort(coefs.begin(), coefs.end(),
              [](const auto& a, const auto& b2) { return a.first < b2.first; });
    std::vector<std::pair<int, double>> merged;
    for (const auto& [j, v] : coefs) {
      if (j < 0 || j >= num_vars()) throw std::out_of_range("row references unknown variable");
      if (!merged.empty() && merged.back().first == j)
        merged.back().second += v;
      else
        merged.emplace_back(j, v);
    }
    rows.push_back(std::move(merged));
    senses.push_back(sense);
    rhs.push_back(b);
    if (name.empty()) name = "r" + std::to_string(rows.size() - 1);
    row_names.push_back(std::move(name));
    return num_rows() - 1;
  }

  double row_activity(int i, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& [j, v] : rows[i]) a += v * x[j];
    return a;
  }

  // max violation of rows and bounds at x
  double feasibility_residual(const std::vector<double>& x) const {
    double r = 0.0;
    for (int i = 0; i < num_rows(); ++i) {
      const double a = row_activity(i, x);
      if (senses[i] == 'L') r = std::max(r, a - rhs[i]);
      else if (senses[i] == 'G') r = std::max(r, rhs[i] - a);
      else r = std::max(r, std::fabs(a - rhs[i]));
    }
    for (int j = 0; j < num_vars(); ++j) {
      if (lb[j] > -kInf) r = std::max(r, lb[j] - x[j]);
      if (ub[j] < kInf) r = std::max(r, x[j] - ub[j]);
    }
    return r;
  }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  // |primal - dual| objective gap of the internal standard form; filled on Optimal
  double duality_gap = 0.0;
  // rows whose phase-1 artificial stayed positive (first-failure diagnostics)
  std::vector<int> infeasible_rows;
};

namespace detail {

// Two-phase dense tableau simplex over the standard form
//   min c y  s.t.  A y = b (b >= 0), y >= 0,
// built from an LpProblem by bound shifting, free-variable splitting and
// upper bounds as extra rows.
class SimplexTableau {
 public:
  explicit SimplexTableau(const LpProblem& p, bool stable = false)
      : p_(p), stable_(stable) {
    build();
  }

  LpSolution solve(int iter_limit) {
    LpSolution sol;
    if (!phase(true, iter_limit, sol)) return sol;
    if (phase1_obj_ > 1e-7) {
      sol.status = LpStatus::Infeasible;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        const int j = basis_[i];
        if (j >= art_begin_ && tab_[i].back() > 1e-7) {
          const int orig = art_row_origin_[j - art_begin_];
          if (orig >= 0) sol.infeasible_rows.push_back(orig);
        }
      }
      return sol;
    }
    drive_out_artificials();
    if (!phase(false, iter_limit, sol)) return sol;
    extract(sol);
    return sol;
  }

 private:
  void build() {
    const int nv = p_.num_vars();
    col_of_.assign(nv, -1);
    neg_col_of_.assign(nv, -1);
    shift_.assign(nv, 0.0);
    negated_.assign(nv, false);
    int n = 0;
    for (int j = 0; j < nv; ++j) {
      const double l = p_.lb[j], u = p_.ub[j];
      if (l > u) throw std::invalid_argument("variable with lb > ub");
      if (l > -kInf) {
        shift_[j] = l;
        col_of_[j] = n++;
      } else if (u < kInf) {
        shift_[j] = u;  // x = u - y
        negated_[j] = true;
        col_of_[j] = n++;
      } else {
        col_of_[j] = n++;
        neg_col_of_[j] = n++;
      }
    }
    struct StdRow {
      std::vector<std::pair<int, double>> a;
      double b;
      int slack_sign;  // +1 slack usable for start basis, 0 none
      int origin;      // original row index or -1 for a bound row
    };
    std::vector<StdRow> srows;
    auto push_row = [&](std::vector<std::pair<int, double>> a, char sense, double b, int origin) {
      int slack_sign = 0;
      if (sense == 'G') {
        for (auto& [c, v] : a) v = -v;
        b = -b;
        sense = 'L';
      }
      if (b < 0.0) {
        for (auto& [c, v] : a) v = -v;
        b = -b;
        if (sense == 'L') slack_sign = -1;
      } else if (sense == 'L') {
        slack_sign = +1;
      }
      srows.push_back({std::move(a), b, slack_sign, origin});
    };
    for (int i = 0; i < p_.num_rows(); ++i) {
      std::vector<std::pair<int, double>> a;
      double b = p_.rhs[i];
      for (const auto& [j, v] : p_.rows[i]) {
        b -= v * shift_[j];
        const double vj = negated_[j] ? -v : v;
        a.emplace_back(col_of_[j], vj);
        if (neg_col_of_[j] >= 0) a.emplace_back(neg_col_of_[j], -v);
      }
      push_row(std::move(a), p_.senses[i], b, i);
    }
    // finite upper bounds on lb-shifted vars become y <= u - l rows
    for (int j = 0; j < nv; ++j) {
      if (p_.lb[j] > -kInf && p_.ub[j] < kInf) {
        push_row({{col_of_[j], 1.0}}, 'L', p_.ub[j] - p_.lb[j], -1);
      }
    }

    const int m = static_cast<int>(srows.size());
    int nslack = 0, nart = 0;
    for (const auto& r : srows) {
      if (r.slack_sign != 0) ++nslack;
      if (r.slack_sign != +1) ++nart;
    }
    slack_begin_ = n;
    art_begin_ = n + nslack;
    const int ncols = n + nslack + nart;
    tab_.assign(m, std::vector<double>(ncols + 1, 0.0));
    basis_.assign(m, -1);
    art_row_origin_.assign(nart, -1);
    cost_.assign(ncols, 0.0);
    row_origin_.assign(m, -1);
    int scol = slack_begin_, acol = art_begin_;
    for (int i = 0; i < m; ++i) {
      auto& t = tab_[i];
      for (const auto& [c, v] : srows[i].a) t[c] += v;
      t[ncols] = srows[i].b;
      row_origin_[i] = srows[i].origin;
      if (srows[i].slack_sign != 0) t[scol] = static_cast<double>(srows[i].slack_sign), ++scol;
      if (srows[i].slack_sign == +1) {
        basis_[i] = scol - 1;
      } else {
        t[acol] = 1.0;
        art_row_origin_[acol - art_begin_] = srows[i].origin;
        basis_[i] = acol++;
      }
    }
    // objective over structural columns; constant from shifts
    obj_shift_ = 0.0;
    for (int j = 0; j < nv; ++j) {
      obj_shift_ += p_.obj[j] * shift_[j];
      const double cj = negated_[j] ? -p_.obj[j] : p_.obj[j];
      cost_[col_of_[j]] += cj;
      if (neg_col_of_[j] >= 0) cost_[neg_col_of_[j]] -= p_.obj[j];
    }
    cost_scale_ = 0.0;
    for (double c : cost_) cost_scale_ = std::max(cost_scale_, std::fabs(c));
    ncols_ = ncols;
    snapshot();  // refresh() needs the pre-pivot matrix
  }

  // returns false and fills sol.status on unbounded / iteration limit
  bool phase(bool phase1, int iter_limit, LpSolution& sol) {
    const int m = static_cast<int>(tab_.size());
    std::vector<double> z(ncols_ + 1, 0.0);  // reduced-cost row
    auto rebuild_costs = [&] {
      std::fill(z.begin(), z.end(), 0.0);
      if (phase1) {
        for (int j = art_begin_; j < ncols_; ++j) z[j] = 1.0;
      } else {
        for (int j = 0; j < ncols_; ++j) z[j] = cost_[j];
      }
      for (int i = 0; i < m; ++i) {
        const double cb = z[basis_[i]];
        if (cb == 0.0) continue;
        for (int j = 0; j <= ncols_; ++j) z[j] -= cb * tab_[i][j];
        z[basis_[i]] = 0.0;
      }
    };
    rebuild_costs();
    int degenerate_streak = 0;
    bool bland = stable_;
    int refresh_budget = 8;
    bool just_refreshed = false;
    const int refresh_every = stable_ ? 32 : 128;
    for (int iter = 0;; ++iter) {
      if (iter >= iter_limit) {
        sol.status = LpStatus::IterLimit;
        sol.iterations += iter;
        return false;
      }
      // tableau pivots accumulate error; periodically recompute B^-1 A from
      // the untouched snapshot so drift cannot flip the phase verdict
      if (iter > 0 && iter % refresh_every == 0 && refresh()) rebuild_costs();
      int enter = -1;
      if (bland) {
        for (int j = 0; j < ncols_; ++j) {
          if (!phase1 && j >= art_begin_) break;
          if (z[j] < -1e-9) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -1e-9;
        const int jmax = phase1 ? ncols_ : art_begin_;
        for (int j = 0; j < jmax; ++j) {
          if (z[j] < best) {
            best = z[j];
            enter = j;
          }
        }
      }
      if (enter < 0) {
        // claimed optimum: refresh once and re-price before trusting it
        if (!just_refreshed && refresh_budget > 0) {
          --refresh_budget;
          if (refresh()) {
            rebuild_costs();
            just_refreshed = true;
            continue;
          }
        }
        sol.iterations += iter;
        phase_obj_ = -z[ncols_];
        if (phase1) phase1_obj_ = phase_obj_;
        return true;
      }
      int leave = -1;
      double best_ratio = kInf, best_piv = 0.0;
      // entries below the pivot floor are elimination roundoff; pivoting on
      // one yields a numerically singular basis
      for (int i = 0; i < m; ++i) {
        const double a = tab_[i][enter];
        if (a > 1e-7) {
          const double ratio = tab_[i][ncols_] / a;
          const double tie = 1e-9 * (1.0 + std::fabs(best_ratio));
          if (ratio < best_ratio - tie) {
            best_ratio = ratio;
            best_piv = a;
            leave = i;
          } else if (ratio < best_ratio + tie) {
            // among tied rows take the largest pivot: small pivots amplify
            // roundoff with every elimination
            if (a > best_piv || (a == best_piv && (leave < 0 || basis_[i] < basis_[leave]))) {
              best_ratio = std::min(best_ratio, ratio);
              best_piv = a;
              leave = i;
            }
          }
        }
      }
      if (leave < 0) {
        // claimed unbounded ray: refresh once and re-price before trusting it
        if (!just_refreshed && refresh_budget > 0) {
          --refresh_budget;
          if (refresh()) {
            rebuild_costs();
            just_refreshed = true;
            continue;
          }
        }
        // free-variable splitting creates cost-neutral rays; roundoff in the
        // re-priced costs can make one look improving, so only a decisively
        // negative ray counts as unbounded
        if (z[enter] > -1e-5 * (1.0 + cost_scale_)) {
          z[enter] = 0.0;
          continue;
        }
        sol.status = LpStatus::Unbounded;
        sol.iterations += iter;
        return false;
      }
      if (best_ratio < 1e-10) {
        if (++degenerate_streak > 2 * (m + ncols_)) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, enter, z);
      just_refreshed = false;
    }
  }

  // exact recomputation of the tableau from the current basis: solves
  // B z = a_j column by column against the pre-pivot snapshot
  bool refresh() {
    const int m = static_cast<int>(tab_.size());
    Matrix B(m, m);
    for (int i = 0; i < m; ++i)
      for (int r = 0; r < m; ++r) B(r, i) = orig_cols_[basis_[i]][r];
    LuFactor lu(B);
    if (lu.singular()) return false;
    for (int j = 0; j <= ncols_; ++j) {
      const auto& col = j == ncols_ ? orig_rhs_ : orig_cols_[j];
      const auto zc = lu.solve(col);
      for (int i = 0; i < m; ++i) tab_[i][j] = zc[i];
    }
    // pivot error can leave the refreshed rhs marginally negative
    for (int i = 0; i < m; ++i)
      if (tab_[i][ncols_] < 0.0 && tab_[i][ncols_] > -1e-7) tab_[i][ncols_] = 0.0;
    return true;
  }

  void pivot(int leave, int enter, std::vector<double>& z) {
    const int m = static_cast<int>(tab_.size());
    auto& prow = tab_[leave];
    const double pv = prow[enter];
    for (int j = 0; j <= ncols_; ++j) prow[j] /= pv;
    prow[enter] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = tab_[i][enter];
      if (f == 0.0) continue;
      auto& row = tab_[i];
      for (int j = 0; j <= ncols_; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    const double fz = z[enter];
    if (fz != 0.0) {
      for (int j = 0; j <= ncols_; ++j) z[j] -= fz * prow[j];
      z[enter] = 0.0;
    }
    basis_[leave] = enter;
  }

  void drive_out_artificials() {
    const int m = static_cast<int>(tab_.size());
    std::vector<double> dummy(ncols_ + 1, 0.0);
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < art_begin_) continue;
      int enter = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::fabs(tab_[i][j]) > 1e-9) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        pivot(i, enter, dummy);
      } else {
        // The row is redundant: every structural entry is numerical noise.
        // Zero it outright so later pivots cannot scale the noise back up
        // and drift the rhs away from zero; the artificial stays basic at 0.
        std::fill(tab_[i].begin(), tab_[i].end(), 0.0);
        tab_[i][basis_[i]] = 1.0;
      }
    }
  }

  void extract(LpSolution& sol) {
    const int m = static_cast<int>(tab_.size());
    std::vector<double> y(ncols_, 0.0);
    for (int i = 0; i < m; ++i) y[basis_[i]] = tab_[i][ncols_];
    const int nv = p_.num_vars();
    sol.x.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
      double v = y[col_of_[j]];
      if (neg_col_of_[j] >= 0) v -= y[neg_col_of_[j]];
      sol.x[j] = negated_[j] ? shift_[j] - v : shift_[j] + v;
    }
    sol.objective = phase_obj_ + obj_shift_;
    sol.status = LpStatus::Optimal;
    sol.duality_gap = duality_gap(y);
  }

  // dual certificate via B^T yd = c_B on the original standard-form columns
  double duality_gap(const std::vector<double>& y) const {
    const int m = static_cast<int>(tab_.size());
    // rebuild original standard-form basis matrix column by column
    Matrix B(m, m);
    std::vector<double> cb(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const int j = basis_[i];
      cb[i] = (j < ncols_ && j < art_begin_) ? cost_[j] : 0.0;
      for (int r = 0; r < m; ++r) B(r, i) = orig_entry(r, j);
    }
    LuFactor lu(B.transposed());
    if (lu.singular()) return 0.0;
    const auto yd = lu.solve(cb);
    double dual_obj = 0.0;
    for (int i = 0; i < m; ++i) dual_obj += yd[i] * orig_rhs_[i];
    double primal_obj = 0.0;
    for (int j = 0; j < ncols_; ++j) primal_obj += (j < art_begin_ ? cost_[j] : 0.0) * y[j];
    return std::fabs(primal_obj - dual_obj);
  }

  double orig_entry(int row, int col) const {
    return orig_cols_.empty() ? 0.0 : orig_cols_[col][row];
  }

 public:
  // snapshot of the standard form taken before any pivoting; used for the
  // dual certificate
  void snapshot() {
    const int m = static_cast<int>(tab_.size());
    orig_cols_.assign(ncols_, std::vector<double>(m, 0.0));
    orig_rhs_.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < ncols_; ++j) orig_cols_[j][i] = tab_[i][j];
      orig_rhs_[i] = tab_[i][ncols_];
    }
  }

 private:
  const LpProblem& p_;
  std::vector<std::vector<double>> tab_;
  std::vector<int> basis_;
  std::vector<double> cost_;
  std::vector<int> col_of_, neg_col_of_;
  std::vector<double> shift_;
  std::vector<bool> negated_;
  std::vector<int> art_row_origin_;
  std::vector<int> row_origin_;
  std::vector<std::vector<double>> orig_cols_;
  std::vector<double> orig_rhs_;
  int slack_begin_ = 0, art_begin_ = 0, ncols_ = 0;
  bool stable_ = false;
  double phase_obj_ = 0.0, phase1_obj_ = 0.0, obj_shift_ = 0.0;
  double cost_scale_ = 0.0;
};

}  // namespace detail

struct LpOptions {
  int iteration_limit = 200000;
  bool dual_certificate = true;
};

inline LpSolution solve_lp(const LpProblem& p, const LpOptions& opts = {}) {
  // a degenerate pivot path can corrupt the tableau into a bogus optimum or a
  // fake unbounded ray; both verdicts are re-checked on a row-permuted copy,
  // which is the same LP walked in a completely different pivot order
  auto suspect = [&](const LpSolution& s) {
    if (s.status == LpStatus::Optimal) return p.feasibility_residual(s.x) > 1e-6;
    return s.status == LpStatus::Unbounded;
  };
  detail::SimplexTableau tab(p);
  LpSolution sol = tab.solve(opts.iteration_limit);
  if (!suspect(sol)) return sol;
  for (unsigned seed : {0x5bd1e995u, 0x9e3779b9u, 0x85ebca6bu}) {
    std::vector<int> perm(p.num_rows());
    for (int i = 0; i < p.num_rows(); ++i) perm[i] = i;
    std::mt19937 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    LpProblem q;
    q.obj = p.obj;
    q.lb = p.lb;
    q.ub = p.ub;
    q.var_names = p.var_names;
    for (int i : perm) {
      q.rows.push_back(p.rows[i]);
      q.senses.push_back(p.senses[i]);
      q.rhs.push_back(p.rhs[i]);
      q.row_names.push_back(p.row_names[i]);
    }
    detail::SimplexTableau retry(q);
    LpSolution alt = retry.solve(opts.iteration_limit);
    if (alt.status == LpStatus::Optimal && q.feasibility_residual(alt.x) <= 1e-6) {
      for (int& r : alt.infeasible_rows) r = perm[r];
      return alt;
    }
    if (alt.status == LpStatus::Infeasible) {
      for (int& r : alt.infeasible_rows) r = perm[r];
      return alt;
    }
  }
  if (sol.status == LpStatus::Optimal)
    throw std::runtime_error("simplex returned optimal with residual " +
                             std::to_string(p.feasibility_residual(sol.x)));
  return sol;
}

}  // namespace iegs
