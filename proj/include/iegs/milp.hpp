#pragma once

#include <cmath>
#include <queue>
#include <set>
#include <vector>

#include "iegs/lp.hpp"

namespace iegs {

struct BnbOptions {
  double integrality_tol = 1e-6;
  double relative_gap = 1e-6;
  int node_limit = 200000;
  LpOptions lp;
};

struct MilpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  double bound = -kInf;  // proven lower bound (min sense)
  int nodes = 0;
  bool node_limit_hit = false;
};

// Branch-and-bound: best-bound node selection, most-fractional branching.
inline MilpSolution solve_milp(const LpProblem& p, const std::vector<int>& binaries,
                               const BnbOptions& opts = {}) {
  for (int j : binaries)
    if (j < 0 || j >= p.num_vars() || p.lb[j] < -1e-12 || p.ub[j] > 1.0 + 1e-12)
      throw std::invalid_argument("binary variable must have bounds within [0,1]");

  struct Node {
    double bound;
    int serial;
    std::vector<std::pair<int, char>> fixes;  // (var, 0 or 1)
    bool operator<(const Node& o) const {
      if (bound != o.bound) return bound > o.bound;  // min-heap on bound
      return serial > o.serial;
    }
  };

  MilpSolution best;
  LpProblem work = p;
  std::priority_queue<Node> open;
  open.push({-kInf, 0, {}});
  int serial = 1;

  auto apply = [&](const std::vector<std::pair<int, char>>& fixes) {
    for (int j : binaries) {
      work.lb[j] = p.lb[j];
      work.ub[j] = p.ub[j];
    }
    for (const auto& [j, v] : fixes) {
      work.lb[j] = v;
      work.ub[j] = v;
    }
  };

  while (!open.empty()) {
    if (best.nodes >= opts.node_limit) {
      best.node_limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (best.status == LpStatus::Optimal) {
      const double gap = best.objective - node.bound;
      if (gap <= opts.relative_gap * std::max(1.0, std::fabs(best.objective))) continue;
    }
    apply(node.fixes);
    ++best.nodes;
    const LpSolution rel = solve_lp(work, opts.lp);
    if (rel.status == LpStatus::Unbounded) {
      best.status = LpStatus::Unbounded;
      return best;
    }
    if (rel.status != LpStatus::Optimal) continue;  // pruned by infeasibility
    if (best.status == LpStatus::Optimal &&
        rel.objective >= best.objective -
                             opts.relative_gap * std::max(1.0, std::fabs(best.objective)))
      continue;
    // most fractional binary
    int branch = -1;
    double most = opts.integrality_tol;
    for (int j : binaries) {
      const double f = std::fabs(rel.x[j] - std::round(rel.x[j]));
      if (f > most) {
        most = f;
        branch = j;
      }
    }
    if (branch < 0) {
      if (best.status != LpStatus::Optimal || rel.objective < best.objective) {
        best.status = LpStatus::Optimal;
        best.objective = rel.objective;
        best.x = rel.x;
      }
      continue;
    }
    for (char v : {static_cast<char>(0), static_cast<char>(1)}) {
      Node child{rel.objective, serial++, node.fixes};
      child.fixes.emplace_back(branch, v);
      open.push(child);
    }
  }
  if (best.status == LpStatus::Optimal) {
    best.bound = best.objective;
    if (best.node_limit_hit && !open.empty()) best.bound = open.top().bound;
  } else if (!best.node_limit_hit) {
    best.status = LpStatus::Infeasible;
  }
  return best;
}

}  // namespace iegs
