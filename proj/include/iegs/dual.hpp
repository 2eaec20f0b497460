#pragma once

#include <map>
#include <string>
#include <vector>

#include "iegs/milp.hpp"
#include "iegs/reduction.hpp"

namespace iegs {

namespace detail {

inline void add_expr_row(LpProblem& lp, const LinExpr& e, char sense, std::string name) {
  lp.add_row(e.terms, sense, -e.offset, std::move(name));
}

// dual block for max of sum_w q_w(y) p_w over the one-norm ball: a bound
// variable, a box multiplier pair per farm, and the norm rows tying them
struct BallDual {
  int lambda = -1;
  std::vector<int> gp, gm;
};

inline BallDual add_ball_dual(LpProblem& lp, const UncertaintyBall& ball,
                              const std::vector<LinExpr>& q, const std::string& tag) {
  BallDual d;
  d.lambda = lp.add_var(0.0, kInf, 0.0, "lam_" + tag);
  for (int w = 0; w < ball.dim(); ++w) {
    d.gp.push_back(lp.add_var(0.0, kInf, 0.0, "gp" + std::to_string(w) + "_" + tag));
    d.gm.push_back(lp.add_var(0.0, kInf, 0.0, "gm" + std::to_string(w) + "_" + tag));
  }
  for (int w = 0; w < ball.dim(); ++w) {
    LinExpr hi;  // lambda - q_w - gp_w + gm_w >= 0
    hi.add(d.lambda, 1.0).add(q[w], -1.0).add(d.gp[w], -1.0).add(d.gm[w], 1.0);
    hi.compress();
    add_expr_row(lp, hi, 'G', "norm+" + std::to_string(w) + "_" + tag);
    LinExpr lo;  // lambda + q_w + gp_w - gm_w >= 0
    lo.add(d.lambda, 1.0).add(q[w], 1.0).add(d.gp[w], 1.0).add(d.gm[w], -1.0);
    lo.compress();
    add_expr_row(lp, lo, 'G', "norm-" + std::to_string(w) + "_" + tag);
  }
  return d;
}

// worth of the dual block at the sample: q^T center + radius * lambda
// + (center - lo)^T gp + (hi - center)^T gm, returned as a linear form
inline LinExpr ball_dual_value(const UncertaintyBall& ball, const std::vector<LinExpr>& q,
                               const BallDual& d) {
  LinExpr v;
  for (int w = 0; w < ball.dim(); ++w) {
    v.add(q[w], ball.center[w]);
    v.add(d.gp[w], ball.center[w] - ball.box_min[w]);
    v.add(d.gm[w], ball.box_max[w] - ball.center[w]);
  }
  v.add(d.lambda, ball.radius);
  v.compress();
  return v;
}

}  // namespace detail

struct DualModel {
  LpProblem lp;
  std::vector<int> binaries;
  double objective_offset = 0.0;
  std::vector<std::vector<detail::BallDual>> objective_duals;  // [s][t]
  std::map<std::string, int> theta;                            // robust row -> bound var
};

// single-level counterpart: the inner maxima of the stage costs move into the
// objective through their duals, surviving thermal rows get their own
inline DualModel dualize(const ReducedModel& red, const IegsNetwork& net,
                         const ScenarioSet& sc) {
  DualModel dm;
  auto& lp = dm.lp;
  const auto& vt = red.vars;
  for (int j = 0; j < vt.num_vars(); ++j)
    lp.add_var(vt.lb[j] == -std::numeric_limits<double>::infinity() ? -kInf : vt.lb[j],
               vt.ub[j] == std::numeric_limits<double>::infinity() ? kInf : vt.ub[j], 0.0,
               vt.names[j]);
  dm.binaries = vt.binaries;

  for (const auto& row : red.fixed) detail::add_expr_row(lp, row.constant, row.sense, row.name);

  std::vector<std::vector<UncertaintyBall>> balls(sc.num_scenarios);
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t)
      balls[s].push_back(ball_of(sc, net.power, t, s));

  const double share = 1.0 / sc.num_scenarios;
  LinExpr objective = red.objective.fixed;
  dm.objective_duals.resize(sc.num_scenarios);
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t) {
      const auto& ball = balls[s][t];
      const std::string tag = "obj_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
      // same sum coefficient for every farm
      std::vector<LinExpr> q(ball.dim(), red.objective.stage_sigma[s][t]);
      const auto d = detail::add_ball_dual(lp, ball, q, tag);
      dm.objective_duals[s].push_back(d);
      objective.add(red.objective.stage[s][t], share);
      objective.add(detail::ball_dual_value(ball, q, d), share);
    }

  for (const auto& row : red.robust) {
    const auto& ball = balls[row.s][row.t];
    // worst case of the uncertain part: q_w = -(sigma + farm_w)
    std::vector<LinExpr> q(ball.dim());
    for (int w = 0; w < ball.dim(); ++w) {
      q[w].add(row.sigma, -1.0);
      if (w < static_cast<int>(row.farm.size())) q[w].offset -= row.farm[w];
      q[w].compress();
    }
    const auto d = detail::add_ball_dual(lp, ball, q, row.name);
    dm.theta[row.name] = d.lambda;
    LinExpr guard = row.constant;  // constant - worst uncertain draw >= 0
    guard.add(detail::ball_dual_value(ball, q, d), -1.0);
    guard.compress();
    detail::add_expr_row(lp, guard, 'G', row.name);
  }

  objective.compress();
  for (const auto& [j, c] : objective.terms) lp.obj[j] += c;
  dm.objective_offset = objective.offset;
  return dm;
}

struct SroSolution {
  MilpSolution milp;
  double objective = 0.0;  // includes the constant offset
};

inline SroSolution solve_dual(const DualModel& dm, const BnbOptions& opts = {}) {
  SroSolution out;
  out.milp = solve_milp(dm.lp, dm.binaries, opts);
  out.objective = out.milp.objective + dm.objective_offset;
  return out;
}

}  // namespace iegs
