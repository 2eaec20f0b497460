#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "iegs/pipeline.hpp"

namespace iegs {

struct BallMax {
  double value = 0.0;
  std::vector<double> argmax;
};

// exact maximizer of q^T p over the one-norm ball, via a small LP
inline BallMax max_over_ball(const UncertaintyBall& ball, const std::vector<double>& q) {
  LpProblem p;
  std::vector<int> pv(ball.dim());
  std::vector<std::pair<int, double>> budget;
  for (int w = 0; w < ball.dim(); ++w) {
    pv[w] = p.add_var(ball.box_min[w], ball.box_max[w], -q[w]);
    const int dp = p.add_var(0.0, kInf, 0.0);
    const int dm = p.add_var(0.0, kInf, 0.0);
    p.add_row({{pv[w], 1.0}, {dp, -1.0}, {dm, 1.0}}, 'E', ball.center[w]);
    budget.emplace_back(dp, 1.0);
    budget.emplace_back(dm, 1.0);
  }
  p.add_row(budget, 'L', ball.radius);
  const auto sol = solve_lp(p);
  if (sol.status != LpStatus::Optimal)
    throw LdrError("ball maximization subproblem not optimal");
  BallMax out;
  out.value = -sol.objective;
  for (int w = 0; w < ball.dim(); ++w) out.argmax.push_back(sol.x[pv[w]]);
  return out;
}

// ---------------------------------------------------------------------------
// out-of-sample accommodation

inline std::string constraint_family(const std::string& row_name) {
  const auto cut = row_name.find('_');
  const std::string head = row_name.substr(0, cut);
  if (head == "balance") return "power balance";
  if (head == "gasbal") return "gas balance";
  if (head == "thermal") return "line limit";
  if (head == "pmax" || head == "pmin") return "output window";
  if (head == "rampup" || head == "rampdn") return "ramping";
  if (head == "pipe") return "pipe equation";
  if (head == "ratlo" || head == "rathi") return "compressor ratio";
  if (head == "state" || head == "minon" || head == "minoff") return "commitment logic";
  return head;
}

// Feasibility of one wind realization under a frozen commitment schedule:
// phase-1 simplex on the dispatch model decides, and on failure the first
// stuck artificial names the violated constraint family.
inline std::optional<std::string> accommodates(
    const IegsNetwork& net, const Ptdf& ptdf, const UcFix& uc,
    const std::vector<std::vector<WeymouthCoef>>& coef,
    const std::vector<std::vector<double>>& wind) {
  DetOptions opts;
  opts.fix = &uc;
  opts.feasibility_only = true;
  auto multi = build_deterministic_multi(net, ptdf, {wind}, {coef}, opts);
  const auto sol = solve_lp(multi.lp);
  if (sol.status == LpStatus::Optimal) return std::nullopt;
  if (!sol.infeasible_rows.empty())
    return constraint_family(multi.lp.row_names[sol.infeasible_rows.front()]);
  return std::string("unknown");
}

struct OutOfSampleReport {
  int total = 0;
  int accommodated = 0;
  double rate = 0.0;
  std::vector<int> infeasible;            // draw indices, 0-based
  std::map<std::string, int> violated;    // family -> count
};

// Each draw borrows the tangent planes of its nearest training scenario so
// the feasibility question is posed against the same linearized gas physics.
inline OutOfSampleReport out_of_sample(
    const IegsNetwork& net, const Ptdf& ptdf, const UcFix& uc, const ScenarioSet& train,
    const WeymouthLinearization& lin,
    const std::vector<std::vector<std::vector<double>>>& draws) {
  OutOfSampleReport rep;
  rep.total = static_cast<int>(draws.size());
  for (int d = 0; d < rep.total; ++d) {
    int best = 0;
    double best_dist = kInf;
    for (int s = 0; s < train.num_scenarios; ++s) {
      double dist = 0.0;
      for (int t = 0; t < train.horizon; ++t)
        for (int w = 0; w < train.num_farms; ++w)
          dist += std::fabs(draws[d][t][w] - train.samples[s][t][w]);
      if (dist < best_dist) {
        best_dist = dist;
        best = s;
      }
    }
    const auto verdict = accommodates(net, ptdf, uc, lin.coef[best], draws[d]);
    if (!verdict) {
      ++rep.accommodated;
    } else {
      rep.infeasible.push_back(d);
      ++rep.violated[*verdict];
    }
  }
  rep.rate = rep.total ? static_cast<double>(rep.accommodated) / rep.total : 1.0;
  return rep;
}

// seeded synthetic test profiles: a training sample plus uniform noise sized
// by the farm box, clipped back into the box
inline std::vector<std::vector<std::vector<double>>> synthetic_draws(
    const IegsNetwork& net, const ScenarioSet& sc, int count, unsigned seed,
    double spread = 0.25) {
  const auto& farms = net.power.wind_farms;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, sc.num_scenarios - 1);
  std::uniform_real_distribution<double> noise(-spread, spread);
  std::vector<std::vector<std::vector<double>>> draws;
  for (int d = 0; d < count; ++d) {
    const int s = pick(rng);
    std::vector<std::vector<double>> profile(sc.horizon);
    for (int t = 0; t < sc.horizon; ++t)
      for (std::size_t w = 0; w < farms.size(); ++w) {
        const double span = farms[w].output_max - farms[w].output_min;
        double v = sc.samples[s][t][w] + noise(rng) * span;
        v = std::min(std::max(v, farms[w].output_min), farms[w].output_max);
        profile[t].push_back(v);
      }
    draws.push_back(std::move(profile));
  }
  return draws;
}

// ---------------------------------------------------------------------------
// constraint-generation oracle

struct CgOptions {
  double tol = 1e-7;
  int max_rounds = 60;
  BnbOptions bnb;
};

struct CgResult {
  double objective = 0.0;
  int rounds = 0;
  bool converged = false;
  std::vector<double> x;
};

// Independent check on the dualized model: a master MILP over accumulated
// extreme points alternates with exact per-row separation LPs until nothing
// in any ball is violated.
inline CgResult constraint_generation(const ReducedModel& red, const IegsNetwork& net,
                                      const ScenarioSet& sc, const CgOptions& opts = {}) {
  const auto& vt = red.vars;
  const double share = 1.0 / sc.num_scenarios;

  std::vector<std::vector<UncertaintyBall>> balls(sc.num_scenarios);
  std::vector<std::vector<std::vector<double>>> obj_points(sc.num_scenarios);
  for (int s = 0; s < sc.num_scenarios; ++s) {
    obj_points[s].resize(sc.horizon);
    for (int t = 0; t < sc.horizon; ++t) {
      balls[s].push_back(ball_of(sc, net.power, t, s));
      obj_points[s][t] = {red.extremes[s][t].sigma_max, red.extremes[s][t].sigma_min};
    }
  }
  std::vector<std::vector<std::vector<double>>> row_points(red.robust.size());
  for (std::size_t i = 0; i < red.robust.size(); ++i)
    row_points[i] = {balls[red.robust[i].s][red.robust[i].t].center};

  CgResult out;
  for (int round = 0; round < opts.max_rounds; ++round) {
    ++out.rounds;
    LpProblem lp;
    for (int j = 0; j < vt.num_vars(); ++j) {
      const double inf = std::numeric_limits<double>::infinity();
      lp.add_var(vt.lb[j] == -inf ? -kInf : vt.lb[j], vt.ub[j] == inf ? kInf : vt.ub[j], 0.0,
                 vt.names[j]);
    }
    for (const auto& row : red.fixed)
      detail::add_expr_row(lp, row.constant, row.sense, row.name);

    std::vector<std::vector<int>> epi(sc.num_scenarios);
    for (int s = 0; s < sc.num_scenarios; ++s)
      for (int t = 0; t < sc.horizon; ++t) {
        epi[s].push_back(lp.add_var(-kInf, kInf, share,
                                    "epi_t" + std::to_string(t + 1) + "_s" +
                                        std::to_string(s + 1)));
        for (double sigma : obj_points[s][t]) {
          LinExpr gap;  // epi dominates the stage cost at this wind sum
          gap.add(epi[s][t], 1.0);
          gap.add(red.objective.stage[s][t], -1.0);
          gap.add(red.objective.stage_sigma[s][t], -sigma);
          gap.compress();
          detail::add_expr_row(lp, gap, 'G', "cut");
        }
      }
    for (std::size_t i = 0; i < red.robust.size(); ++i) {
      const auto& row = red.robust[i];
      for (const auto& p : row_points[i]) {
        double sigma = 0.0, farm = 0.0;
        for (std::size_t w = 0; w < p.size(); ++w) {
          sigma += p[w];
          if (w < row.farm.size()) farm += row.farm[w] * p[w];
        }
        LinExpr body = row.constant;
        body.add(row.sigma, sigma);
        body.offset += farm;
        body.compress();
        detail::add_expr_row(lp, body, row.sense, row.name + "@cg");
      }
    }
    LinExpr fixed_obj = red.objective.fixed;
    fixed_obj.compress();
    for (const auto& [j, c] : fixed_obj.terms) lp.obj[j] += c;

    const auto sol = solve_milp(lp, vt.binaries, opts.bnb);
    if (sol.status != LpStatus::Optimal)
      throw LdrError("constraint generation master not optimal");
    out.objective = sol.objective + fixed_obj.offset;
    out.x = sol.x;

    bool violated = false;
    for (int s = 0; s < sc.num_scenarios; ++s)
      for (int t = 0; t < sc.horizon; ++t) {
        const double slope = red.objective.stage_sigma[s][t].value(sol.x);
        const double sigma =
            slope >= 0.0 ? red.extremes[s][t].sigma_max : red.extremes[s][t].sigma_min;
        const double worst = red.objective.stage[s][t].value(sol.x) + slope * sigma;
        if (worst > sol.x[epi[s][t]] + opts.tol) {
          obj_points[s][t].push_back(sigma);
          violated = true;
        }
      }
    for (std::size_t i = 0; i < red.robust.size(); ++i) {
      const auto& row = red.robust[i];
      const auto& ball = balls[row.s][row.t];
      const double sv = row.sigma.value(sol.x);
      std::vector<double> q(ball.dim());
      for (int w = 0; w < ball.dim(); ++w) {
        q[w] = -sv;
        if (w < static_cast<int>(row.farm.size())) q[w] -= row.farm[w];
      }
      const auto bm = max_over_ball(ball, q);
      const double worst_body = row.constant.value(sol.x) - bm.value;
      if (worst_body < -opts.tol) {
        row_points[i].push_back(bm.argmax);
        violated = true;
      }
    }
    if (!violated) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// reduction audit

struct ReductionAudit {
  double worst_slack = kInf;
  std::string worst_row;
  int rows_checked = 0;
};

// Re-checks every transformed or eliminated inequality at a solved point by
// exact worst-case evaluation over its ball; a negative slack means the
// reduction cut a corner.
inline ReductionAudit audit_reduction(const LdrModel& model, const ReducedModel& red,
                                      const IegsNetwork& net, const ScenarioSet& sc,
                                      const std::vector<double>& x) {
  std::set<std::string> surviving;
  for (const auto& row : red.robust) surviving.insert(row.name);

  ReductionAudit audit;
  auto note = [&](double slack, const std::string& name) {
    ++audit.rows_checked;
    if (slack < audit.worst_slack) {
      audit.worst_slack = slack;
      audit.worst_row = name;
    }
  };
  for (const auto& row : model.rows) {
    if (row.kind == RowKind::NonRobust) continue;
    if (row.kind == RowKind::RobustSum) {
      const auto& ext = red.extremes[row.s][row.t];
      const double sv = row.sigma.value(x);
      double worst = row.constant.value(x) +
                     std::min(sv * ext.sigma_max, sv * ext.sigma_min);
      if (!row.sigma_prev.terms.empty()) {
        const auto& pext = red.extremes[row.s][row.t - 1];
        const double pv = row.sigma_prev.value(x);
        worst += std::min(pv * pext.sigma_max, pv * pext.sigma_min);
      }
      note(worst, row.name);
    } else if (!surviving.count(row.name)) {  // eliminated by screening
      const auto ball = ball_of(sc, net.power, row.t, row.s);
      const double sv = row.sigma.value(x);
      std::vector<double> q(ball.dim());
      for (int w = 0; w < ball.dim(); ++w) {
        q[w] = -sv;
        if (w < static_cast<int>(row.farm.size())) q[w] -= row.farm[w];
      }
      note(row.constant.value(x) - max_over_ball(ball, q).value, row.name);
    }
  }
  return audit;
}

// ---------------------------------------------------------------------------
// exact-recourse reference and model variants

struct ExactSaa {
  double objective = 0.0;
  UcFix uc;
  MilpSolution milp;
};

// SAA optimum with one full dispatch block per sample and no decision rule;
// the reference the adjustable model's optimum must stay above
inline ExactSaa solve_exact_saa(const IegsNetwork& net, const Ptdf& ptdf, const ScenarioSet& sc,
                                const WeymouthLinearization& lin, const BnbOptions& opts = {}) {
  auto multi = build_deterministic_multi(net, ptdf, sc.samples, lin.coef);
  ExactSaa out;
  out.milp = solve_milp(multi.lp, multi.binaries, opts);
  if (out.milp.status != LpStatus::Optimal)
    throw LdrError("exact recourse reference model not optimal");
  out.objective = out.milp.objective;
  const auto& idx = multi.idx[0];
  const int T = net.horizon;
  const int ng = static_cast<int>(net.power.generators.size());
  out.uc.on.assign(T, std::vector<double>(ng));
  out.uc.start = out.uc.on;
  out.uc.stop = out.uc.on;
  for (int t = 0; t < T; ++t)
    for (int g = 0; g < ng; ++g) {
      out.uc.on[t][g] = std::round(out.milp.x[idx.x[t][g]]);
      out.uc.start[t][g] = std::round(out.milp.x[idx.u[t][g]]);
      out.uc.stop[t][g] = std::round(out.milp.x[idx.v[t][g]]);
    }
  return out;
}

// Single-scenario variant whose ball covers every training ball: center is
// the sample mean, and the radius gains the largest total deviation of any
// sample from that mean.
inline ScenarioSet build_ro_variant(const ScenarioSet& sc) {
  ScenarioSet ro;
  ro.horizon = sc.horizon;
  ro.num_scenarios = 1;
  ro.num_farms = sc.num_farms;
  ro.samples.assign(1, std::vector<std::vector<double>>(
                           sc.horizon, std::vector<double>(sc.num_farms, 0.0)));
  ro.budgets.assign(1, std::vector<double>(sc.horizon, 0.0));
  ro.radius_offset.assign(1, std::vector<double>(sc.horizon, 0.0));
  for (int t = 0; t < sc.horizon; ++t) {
    for (int w = 0; w < sc.num_farms; ++w) {
      double mean = 0.0;
      for (int s = 0; s < sc.num_scenarios; ++s) mean += sc.samples[s][t][w];
      ro.samples[0][t][w] = mean / sc.num_scenarios;
    }
    double max_dev = 0.0, max_radius = 0.0;
    for (int s = 0; s < sc.num_scenarios; ++s) {
      double dev = 0.0;
      for (int w = 0; w < sc.num_farms; ++w)
        dev += std::fabs(sc.samples[s][t][w] - ro.samples[0][t][w]);
      max_dev = std::max(max_dev, dev);
      max_radius = std::max(
          max_radius, sc.budgets[s][t] * sc.sample_sum(s, t) + sc.radius_offset[s][t]);
    }
    // widest per-sample radius plus the largest excursion of any sample from
    // the mean: this is what makes the single ball cover every training ball
    ro.radius_offset[0][t] = max_dev + max_radius;
  }
  return ro;
}

// ---------------------------------------------------------------------------
// accuracy of the linearized gas physics at a solved point

struct ResidualReport {
  double max_residual = 0.0;               // relative to the pipe flow limit
  std::string worst;                       // "pipe_t#_s#" of the max
  std::vector<std::string> ordering_violations;  // downstream pressure above upstream
};

inline ResidualReport pipeline_residuals(const IegsNetwork& net, const PipelineResult& r,
                                         const ScenarioSet& sc) {
  const auto& gs = net.gas;
  const auto& vt = r.model.vars;
  const auto& x = r.x();
  const int np = static_cast<int>(gs.pipelines.size());
  ResidualReport rep;
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t) {
      const double sigma = sc.sample_sum(s, t);
      const auto& red = r.rs.per[s][t];
      const auto inj = detail::gas_injections(net, r.inc, vt, t, s);
      std::vector<double> g(inj.cons.size());
      for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = inj.cons[k].value(x) + sigma * inj.sigma[k].value(x);
      for (int l = 0; l < np; ++l) {
        const auto& pl = gs.pipelines[l];
        double flow = 0.0;
        for (std::size_t k = 0; k < red.q_edges.cols(); ++k)
          flow += red.q_edges(l, k) * g[k];
        auto eval_pressure = [&](int node) {
          const auto [cons, sig] = detail::pressure_expr(red, inj, vt, t, s, node);
          return cons.value(x) + sigma * sig.value(x);
        };
        const double pm = eval_pressure(gs.node_index(pl.from));
        const double pn = eval_pressure(gs.node_index(pl.to));
        const std::string tag =
            pl.id + "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
        if (pm < pn - 1e-9) rep.ordering_violations.push_back(tag);
        const double arg = std::max(pm * pm - pn * pn, 0.0);
        const double truth = pl.weymouth * std::sqrt(arg);
        const double res = std::fabs(flow - truth) / pl.flow_limit;
        if (res > rep.max_residual) {
          rep.max_residual = res;
          rep.worst = tag;
        }
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// budget sweeps and model comparison

struct GapPoint {
  double eps = 0.0;
  double objective = 0.0;
};

struct GapCurve {
  double exact_reference = 0.0;  // SAA optimum with exact per-sample recourse
  std::vector<GapPoint> points;
};

inline GapCurve gap_curve(const IegsNetwork& net, const ScenarioSet& sc,
                          const std::vector<double>& eps_grid,
                          const PipelineOptions& opts = {}) {
  GapCurve curve;
  const auto ptdf = compute_ptdf(net.power);
  const auto lin = select_linearization_points(net, ptdf, sc, opts.lin);
  curve.exact_reference = solve_exact_saa(net, ptdf, sc, lin, opts.bnb).objective;
  for (double eps : eps_grid) {
    ScenarioSet swept = sc;
    swept.set_budget(eps);
    const auto r = solve_pipeline(net, swept, opts);
    if (r.sol.milp.status != LpStatus::Optimal)
      throw LdrError("budget sweep solve not optimal");
    curve.points.push_back({eps, r.objective()});
  }
  return curve;
}

struct VariantResult {
  std::string mode;  // "saa", "ro", or "sro"
  double eps = 0.0;
  double objective = 0.0;
  double oos_rate = 0.0;
};

struct ComparisonReport {
  std::vector<VariantResult> rows;
};

inline ComparisonReport run_comparison(const IegsNetwork& net, const ScenarioSet& sc,
                                       const std::vector<double>& eps_grid,
                                       const std::vector<std::vector<std::vector<double>>>& draws,
                                       const PipelineOptions& opts = {}) {
  ComparisonReport rep;
  auto run_one = [&](const std::string& mode, double eps, const ScenarioSet& variant) {
    const auto r = solve_pipeline(net, variant, opts);
    if (r.sol.milp.status != LpStatus::Optimal)
      throw LdrError("comparison solve not optimal for mode " + mode);
    const auto uc = extract_uc(r.model.vars, r.x());
    const auto oos = out_of_sample(net, r.ptdf, uc, variant, r.lin, draws);
    rep.rows.push_back({mode, eps, r.objective(), oos.rate});
  };
  {
    ScenarioSet saa = sc;
    saa.set_budget(0.0);
    for (auto& row : saa.radius_offset)
      for (auto& v : row) v = 0.0;
    run_one("saa", 0.0, saa);
  }
  if (!eps_grid.empty()) {
    const double eps_max = *std::max_element(eps_grid.begin(), eps_grid.end());
    ScenarioSet widest = sc;
    widest.set_budget(eps_max);
    run_one("ro", eps_max, build_ro_variant(widest));
  }
  for (double eps : eps_grid) {
    ScenarioSet swept = sc;
    swept.set_budget(eps);
    run_one("sro", eps, swept);
  }
  return rep;
}

}  // namespace iegs
