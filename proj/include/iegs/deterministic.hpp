#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iegs/gas_reduction.hpp"
#include "iegs/lp.hpp"
#include "iegs/network.hpp"
#include "iegs/scenario.hpp"

namespace iegs {

// commitment values to freeze into the model, [t][g]
struct UcFix {
  std::vector<std::vector<double>> on, start, stop;
};

struct DetOptions {
  bool relax_binaries = false;
  const UcFix* fix = nullptr;
  bool feasibility_only = false;
};

struct DetIndex {
  std::vector<std::vector<int>> x, u, v;  // [t][g], shared across profiles
  std::vector<std::vector<int>> pg;       // [t][g]
  std::vector<std::vector<int>> gw;       // [t][well]
  std::vector<std::vector<int>> pi;       // [t][node]
  std::vector<std::vector<int>> flow;     // [t][edge], pipelines then compressors
};

struct MultiDetModel {
  LpProblem lp;
  std::vector<DetIndex> idx;  // one per wind profile
  std::vector<int> binaries;
};

// Scheduling model with explicit gas variables and tangent-plane pipe
// equations. One commitment schedule serves every wind profile; each profile
// gets its own dispatch block, and stage costs are averaged over profiles.
inline MultiDetModel build_deterministic_multi(
    const IegsNetwork& net, const Ptdf& ptdf,
    const std::vector<std::vector<std::vector<double>>>& winds,   // [s][t][w]
    const std::vector<std::vector<std::vector<WeymouthCoef>>>& coefs,  // [s][t][l]
    const DetOptions& opts = {}) {
  const auto& pw = net.power;
  const auto& gs = net.gas;
  const int T = net.horizon;
  const int S = static_cast<int>(winds.size());
  const int ng = static_cast<int>(pw.generators.size());
  const int nw = static_cast<int>(gs.wells.size());
  const int nn = static_cast<int>(gs.nodes.size());
  const int ne = gs.num_edges();
  const int np = static_cast<int>(gs.pipelines.size());

  MultiDetModel m;
  auto& lp = m.lp;
  m.idx.resize(S);
  const double cost_on = opts.feasibility_only ? 0.0 : 1.0;
  const double share = cost_on / std::max(S, 1);

  std::vector<std::vector<int>> x(T), u(T), v(T);
  for (int t = 0; t < T; ++t) {
    const std::string tt = "_t" + std::to_string(t + 1);
    for (int g = 0; g < ng; ++g) {
      const auto& gen = pw.generators[g];
      double xlo = 0.0, xhi = 1.0, ulo = 0.0, uhi = 1.0, vlo = 0.0, vhi = 1.0;
      if (opts.fix) {
        xlo = xhi = opts.fix->on[t][g];
        ulo = uhi = opts.fix->start[t][g];
        vlo = vhi = opts.fix->stop[t][g];
      }
      x[t].push_back(lp.add_var(xlo, xhi, cost_on * gen.no_load_cost, "x_" + gen.id + tt));
      u[t].push_back(lp.add_var(ulo, uhi, cost_on * gen.startup_cost, "u_" + gen.id + tt));
      v[t].push_back(lp.add_var(vlo, vhi, cost_on * gen.shutdown_cost, "v_" + gen.id + tt));
      if (!opts.fix && !opts.relax_binaries) {
        m.binaries.push_back(x[t][g]);
        m.binaries.push_back(u[t][g]);
        m.binaries.push_back(v[t][g]);
      }
    }
  }

  for (int s = 0; s < S; ++s) {
    auto& idx = m.idx[s];
    idx.x = x;
    idx.u = u;
    idx.v = v;
    idx.pg.resize(T);
    idx.gw.resize(T);
    idx.pi.resize(T);
    idx.flow.resize(T);
    const std::string ss = S > 1 ? "_s" + std::to_string(s + 1) : "";
    for (int t = 0; t < T; ++t) {
      const std::string tt = "_t" + std::to_string(t + 1) + ss;
      for (int g = 0; g < ng; ++g)
        idx.pg[t].push_back(
            lp.add_var(0.0, kInf, share * pw.generators[g].cost, "p_" + pw.generators[g].id + tt));
      for (int w = 0; w < nw; ++w)
        idx.gw[t].push_back(lp.add_var(gs.wells[w].output_min, gs.wells[w].output_max,
                                       share * gs.wells[w].cost, "gw_" + gs.wells[w].id + tt));
      for (int n = 0; n < nn; ++n)
        idx.pi[t].push_back(lp.add_var(gs.nodes[n].pressure_min, gs.nodes[n].pressure_max, 0.0,
                                       "pi_" + gs.nodes[n].id + tt));
      for (int e = 0; e < ne; ++e) {
        const double lim = e < np ? gs.pipelines[e].flow_limit : gs.compressors[e - np].flow_limit;
        const std::string id = e < np ? gs.pipelines[e].id : gs.compressors[e - np].id;
        idx.flow[t].push_back(lp.add_var(0.0, lim, 0.0, "gf_" + id + tt));
      }
    }
  }

  // commitment logic, shared
  for (int t = 0; t < T; ++t) {
    const std::string tt = "_t" + std::to_string(t + 1);
    for (int g = 0; g < ng; ++g) {
      const auto& gen = pw.generators[g];
      if (t == 0)
        lp.add_row({{x[t][g], 1.0}, {u[t][g], -1.0}, {v[t][g], 1.0}}, 'E',
                   gen.initial_on ? 1.0 : 0.0, "state_" + gen.id + tt);
      else
        lp.add_row({{x[t][g], 1.0}, {x[t - 1][g], -1.0}, {u[t][g], -1.0}, {v[t][g], 1.0}}, 'E',
                   0.0, "state_" + gen.id + tt);
      std::vector<std::pair<int, double>> up{{x[t][g], -1.0}};
      for (int tau = std::max(0, t - gen.min_on + 1); tau <= t; ++tau)
        up.emplace_back(u[tau][g], 1.0);
      lp.add_row(up, 'L', 0.0, "minon_" + gen.id + tt);
      std::vector<std::pair<int, double>> dn{{x[t][g], 1.0}};
      for (int tau = std::max(0, t - gen.min_off + 1); tau <= t; ++tau)
        dn.emplace_back(v[tau][g], 1.0);
      lp.add_row(dn, 'L', 1.0, "minoff_" + gen.id + tt);
    }
  }

  for (int s = 0; s < S; ++s) {
    const auto& idx = m.idx[s];
    const auto& wind = winds[s];
    const auto& coef = coefs[s];
    const std::string ss = S > 1 ? "_s" + std::to_string(s + 1) : "";
    for (int t = 0; t < T; ++t) {
      const std::string tt = "_t" + std::to_string(t + 1) + ss;
      for (int g = 0; g < ng; ++g) {
        const auto& gen = pw.generators[g];
        const int p = idx.pg[t][g];
        lp.add_row({{p, 1.0}, {x[t][g], -gen.output_max}}, 'L', 0.0, "pmax_" + gen.id + tt);
        lp.add_row({{p, 1.0}, {x[t][g], -gen.output_min}}, 'G', 0.0, "pmin_" + gen.id + tt);
        if (t == 0) {
          const double x0 = gen.initial_on ? 1.0 : 0.0, p0 = gen.initial_output;
          lp.add_row({{p, 1.0}, {u[t][g], -gen.startup_ramp}}, 'L', p0 + gen.ramp_up * x0,
                     "rampup_" + gen.id + tt);
          lp.add_row({{p, -1.0}, {x[t][g], -gen.ramp_down}, {v[t][g], -gen.shutdown_ramp}}, 'L',
                     -p0, "rampdn_" + gen.id + tt);
        } else {
          lp.add_row({{p, 1.0}, {idx.pg[t - 1][g], -1.0}, {x[t - 1][g], -gen.ramp_up},
                      {u[t][g], -gen.startup_ramp}},
                     'L', 0.0, "rampup_" + gen.id + tt);
          lp.add_row({{p, -1.0}, {idx.pg[t - 1][g], 1.0}, {x[t][g], -gen.ramp_down},
                      {v[t][g], -gen.shutdown_ramp}},
                     'L', 0.0, "rampdn_" + gen.id + tt);
        }
      }

      {
        double wind_sum = 0.0;
        for (double wv : wind[t]) wind_sum += wv;
        std::vector<std::pair<int, double>> bal;
        for (int g = 0; g < ng; ++g) bal.emplace_back(idx.pg[t][g], 1.0);
        lp.add_row(bal, 'E', pw.total_load(t) - wind_sum, "balance" + tt);
      }

      for (std::size_t l = 0; l < pw.lines.size(); ++l) {
        std::vector<std::pair<int, double>> row;
        double fixed = 0.0;
        for (int g = 0; g < ng; ++g) {
          const double b = ptdf.beta(l, pw.bus_index(pw.generators[g].bus));
          if (b != 0.0) row.emplace_back(idx.pg[t][g], b);
        }
        for (std::size_t w = 0; w < pw.wind_farms.size(); ++w)
          fixed += ptdf.beta(l, pw.bus_index(pw.wind_farms[w].bus)) * wind[t][w];
        for (std::size_t b = 0; b < pw.buses.size(); ++b)
          fixed -= ptdf.beta(l, b) * pw.load_at(static_cast<int>(b), t);
        const double lim = pw.lines[l].thermal_limit;
        lp.add_row(row, 'L', lim - fixed, "thermal_" + pw.lines[l].id + tt + "_pos");
        lp.add_row(row, 'G', -lim - fixed, "thermal_" + pw.lines[l].id + tt + "_neg");
      }

      for (int n = 0; n < nn; ++n) {
        std::vector<std::pair<int, double>> row;
        for (int e = 0; e < ne; ++e) {
          const auto [a, b] = gs.edge_ends(e);
          if (a == n) row.emplace_back(idx.flow[t][e], 1.0);
          if (b == n) row.emplace_back(idx.flow[t][e], -1.0);
        }
        for (int w = 0; w < nw; ++w)
          if (gs.node_index(gs.wells[w].node) == n) row.emplace_back(idx.gw[t][w], -1.0);
        for (int g = 0; g < ng; ++g) {
          if (pw.generators[g].kind != GenKind::GasFired) continue;
          const auto& c = net.coupling_of(pw.generators[g]);
          if (gs.node_index(c.gas_node) == n) row.emplace_back(idx.pg[t][g], c.conversion);
        }
        lp.add_row(row, 'E', -gs.load_at(n, t), "gasbal_" + gs.nodes[n].id + tt);
      }

      for (int l = 0; l < np; ++l) {
        const auto& pl = gs.pipelines[l];
        const auto& k = coef[t][l];
        lp.add_row({{idx.flow[t][l], 1.0},
                    {idx.pi[t][gs.node_index(pl.from)], -k.k_m},
                    {idx.pi[t][gs.node_index(pl.to)], k.k_n}},
                   'E', 0.0, "pipe_" + pl.id + tt);
      }

      for (std::size_t c = 0; c < gs.compressors.size(); ++c) {
        const auto& cp = gs.compressors[c];
        const int pf = idx.pi[t][gs.node_index(cp.from)];
        const int pt = idx.pi[t][gs.node_index(cp.to)];
        lp.add_row({{pt, 1.0}, {pf, -cp.ratio_min}}, 'G', 0.0, "ratlo_" + cp.id + tt);
        lp.add_row({{pt, 1.0}, {pf, -cp.ratio_max}}, 'L', 0.0, "rathi_" + cp.id + tt);
      }
    }
  }
  return m;
}

struct DetModel {
  LpProblem lp;
  DetIndex idx;
  std::vector<int> binaries;
};

inline DetModel build_deterministic(const IegsNetwork& net, const Ptdf& ptdf,
                                    const std::vector<std::vector<double>>& wind,
                                    const std::vector<std::vector<WeymouthCoef>>& coef,
                                    const DetOptions& opts = {}) {
  auto multi = build_deterministic_multi(net, ptdf, {wind}, {coef}, opts);
  return {std::move(multi.lp), std::move(multi.idx[0]), std::move(multi.binaries)};
}

struct LinearizationOptions {
  double tol = 1e-4;
  int max_iters = 20;
  double min_gap = 1e-2;  // smallest pressure drop allowed at an expansion point
};

namespace detail {

inline void enforce_drop(double& pi_m, double& pi_n, double gap) {
  if (pi_m < pi_n + gap) {
    const double mid = 0.5 * (pi_m + pi_n);
    pi_m = mid + 0.5 * gap;
    pi_n = std::max(mid - 0.5 * gap, 0.5 * gap);
    pi_m = std::max(pi_m, pi_n + gap);
  }
}

}  // namespace detail

// Picks tangent points per (scenario, period, pipeline) by re-solving the
// relaxed single-scenario model until the pressures it returns match the
// points the tangents were taken at.
inline WeymouthLinearization select_linearization_points(const IegsNetwork& net, const Ptdf& ptdf,
                                                         const ScenarioSet& sc,
                                                         const LinearizationOptions& lopt = {}) {
  const auto& gs = net.gas;
  const int T = net.horizon;
  const int np = static_cast<int>(gs.pipelines.size());

  WeymouthLinearization lin;
  lin.coef.resize(sc.num_scenarios);
  lin.converged = true;
  for (int s = 0; s < sc.num_scenarios; ++s) {
    auto& per_t = lin.coef[s];
    per_t.assign(T, std::vector<WeymouthCoef>(np));
    for (int t = 0; t < T; ++t)
      for (int l = 0; l < np; ++l) {
        const auto& pl = gs.pipelines[l];
        const auto& nm = gs.nodes[gs.node_index(pl.from)];
        const auto& nn2 = gs.nodes[gs.node_index(pl.to)];
        auto& k = per_t[t][l];
        k.pi_m = 0.5 * (nm.pressure_min + nm.pressure_max);
        k.pi_n = 0.5 * (nn2.pressure_min + nn2.pressure_max);
        detail::enforce_drop(k.pi_m, k.pi_n, lopt.min_gap);
        std::tie(k.k_m, k.k_n) = linearize_weymouth(pl.weymouth, k.pi_m, k.pi_n);
      }

    bool scenario_converged = false;
    for (int it = 0; it < lopt.max_iters && !scenario_converged; ++it) {
      const auto model =
          build_deterministic(net, ptdf, sc.samples[s], per_t, {.relax_binaries = true});
      const auto sol = solve_lp(model.lp);
      if (sol.status != LpStatus::Optimal)
        throw GasReductionError("linearization subproblem not optimal for scenario " +
                                std::to_string(s + 1));
      double shift = 0.0;
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < np; ++l) {
          const auto& pl = gs.pipelines[l];
          double pm = sol.x[model.idx.pi[t][gs.node_index(pl.from)]];
          double pn = sol.x[model.idx.pi[t][gs.node_index(pl.to)]];
          detail::enforce_drop(pm, pn, lopt.min_gap);
          auto& k = per_t[t][l];
          shift = std::max(shift, std::max(std::fabs(pm - k.pi_m), std::fabs(pn - k.pi_n)));
          k.pi_m = pm;
          k.pi_n = pn;
          std::tie(k.k_m, k.k_n) = linearize_weymouth(pl.weymouth, pm, pn);
        }
      lin.fixed_point_history.push_back(shift);
      lin.last_shift = shift;
      ++lin.iterations;
      scenario_converged = shift < lopt.tol;
    }
    if (!scenario_converged) lin.converged = false;
  }
  return lin;
}

// relative gap between the nonlinear pipe equation and the achieved flow
inline double weymouth_residual(const GasSystem& gs, int l, double flow, double pi_m,
                                double pi_n) {
  const double arg = pi_m * pi_m - pi_n * pi_n;
  const double truth = gs.pipelines[l].weymouth * std::sqrt(std::max(arg, 0.0));
  const double denom = std::max(std::fabs(truth), 1e-9);
  return std::fabs(flow - truth) / denom;
}

}  // namespace iegs
