#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "iegs/gas_reduction.hpp"
#include "iegs/network.hpp"
#include "iegs/scenario.hpp"

namespace iegs {

struct LdrError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// sparse linear form over decision variables plus a scalar offset
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double offset = 0.0;

  LinExpr& add(int var, double coef) {
    if (coef != 0.0) terms.emplace_back(var, coef);
    return *this;
  }

  LinExpr& add(const LinExpr& other, double scale = 1.0) {
    if (scale == 0.0) return *this;
    for (const auto& [j, v] : other.terms) terms.emplace_back(j, scale * v);
    offset += scale * other.offset;
    return *this;
  }

  void compress() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, double>> merged;
    for (const auto& [j, v] : terms) {
      if (!merged.empty() && merged.back().first == j)
        merged.back().second += v;
      else
        merged.emplace_back(j, v);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& e) { return e.second == 0.0; }),
                 merged.end());
    terms = std::move(merged);
  }

  double value(const std::vector<double>& x) const {
    double v = offset;
    for (const auto& [j, c] : terms) v += c * x[j];
    return v;
  }

  bool empty() const { return terms.empty() && offset == 0.0; }
};

enum class RowKind {
  NonRobust,   // no dependence on the wind realization
  RobustSum,   // depends on wind only through the farm-output sum
  RobustFull,  // carries individual farm coefficients as well
};

// One constraint of the adjustable model, normalized so the body must be
// >= 0 (or == 0) for every wind vector in the period ball:
//   constant + sigma * sum_w p_w^t + sigma_prev * sum_w p_w^{t-1}
//            + sum_w farm[w] * p_w^t   {>=,==}  0
struct ModelRow {
  std::string name;
  int t = -1, s = -1;
  RowKind kind = RowKind::NonRobust;
  char sense = 'G';  // 'G' or 'E'
  LinExpr constant;
  LinExpr sigma;
  LinExpr sigma_prev;
  std::vector<double> farm;

  bool has_farm_terms() const {
    return std::any_of(farm.begin(), farm.end(), [](double v) { return v != 0.0; });
  }
};

// decision variable registry for the adjustable model
struct VarTable {
  int T = 0, S = 0;
  std::vector<std::string> names;
  std::vector<double> lb, ub;
  std::vector<int> binaries;

  std::vector<std::vector<int>> x, u, v;                 // [t][g]
  std::vector<std::vector<std::vector<int>>> r, rc;      // [s][t][g]
  std::vector<std::vector<std::vector<int>>> sw, swc;    // [s][t][well]
  std::vector<std::vector<std::vector<int>>> o, oc;      // [s][t][n1 position]

  int num_vars() const { return static_cast<int>(names.size()); }

  int add(std::string name, double lower, double upper, bool binary = false) {
    names.push_back(std::move(name));
    lb.push_back(lower);
    ub.push_back(upper);
    if (binary) binaries.push_back(num_vars() - 1);
    return num_vars() - 1;
  }
};

struct ReductionSet {
  std::vector<std::vector<ReductionMatrices>> per;  // [s][t]
  FreeNodeSet free_nodes;
};

inline ReductionSet build_reduction_set(const IegsNetwork& net, const GasIncidence& inc,
                                        const WeymouthLinearization& lin) {
  ReductionSet rs;
  rs.free_nodes = locate_free_nodes(net.gas);
  rs.per.resize(lin.coef.size());
  for (std::size_t s = 0; s < lin.coef.size(); ++s)
    for (int t = 0; t < net.horizon; ++t)
      rs.per[s].push_back(build_reduction(net.gas, inc, rs.free_nodes, lin.coef[s][t]));
  return rs;
}

inline VarTable build_vars(const IegsNetwork& net, const ReductionSet& rs, int num_scenarios) {
  const auto& pw = net.power;
  const auto& gs = net.gas;
  const int T = net.horizon;
  VarTable vt;
  vt.T = T;
  vt.S = num_scenarios;
  vt.x.resize(T);
  vt.u.resize(T);
  vt.v.resize(T);
  for (int t = 0; t < T; ++t) {
    const std::string tt = "_t" + std::to_string(t + 1);
    for (const auto& g : pw.generators) {
      vt.x[t].push_back(vt.add("x_" + g.id + tt, 0.0, 1.0, true));
      vt.u[t].push_back(vt.add("u_" + g.id + tt, 0.0, 1.0, true));
      vt.v[t].push_back(vt.add("v_" + g.id + tt, 0.0, 1.0, true));
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  vt.r.resize(num_scenarios);
  vt.rc.resize(num_scenarios);
  vt.sw.resize(num_scenarios);
  vt.swc.resize(num_scenarios);
  vt.o.resize(num_scenarios);
  vt.oc.resize(num_scenarios);
  for (int s = 0; s < num_scenarios; ++s) {
    vt.r[s].resize(T);
    vt.rc[s].resize(T);
    vt.sw[s].resize(T);
    vt.swc[s].resize(T);
    vt.o[s].resize(T);
    vt.oc[s].resize(T);
    for (int t = 0; t < T; ++t) {
      const std::string ts = "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
      for (const auto& g : pw.generators) {
        vt.r[s][t].push_back(vt.add("r_" + g.id + ts, -inf, inf));
        vt.rc[s][t].push_back(vt.add("R_" + g.id + ts, -inf, inf));
      }
      for (const auto& w : gs.wells) {
        vt.sw[s][t].push_back(vt.add("s_" + w.id + ts, -inf, inf));
        vt.swc[s][t].push_back(vt.add("S_" + w.id + ts, -inf, inf));
      }
      for (int n : rs.per[s][t].n1) {
        vt.o[s][t].push_back(vt.add("o_" + gs.nodes[n].id + ts, -inf, inf));
        vt.oc[s][t].push_back(vt.add("O_" + gs.nodes[n].id + ts, -inf, inf));
      }
    }
  }
  return vt;
}

// commitment logic: state transitions, run and rest windows, all non-robust
inline void build_uc_rows(const IegsNetwork& net, const VarTable& vt,
                          std::vector<ModelRow>& rows) {
  const auto& pw = net.power;
  for (int t = 0; t < vt.T; ++t) {
    const std::string tt = "_t" + std::to_string(t + 1);
    for (std::size_t g = 0; g < pw.generators.size(); ++g) {
      const auto& gen = pw.generators[g];
      {
        ModelRow row;
        row.name = "state_" + gen.id + tt;
        row.t = t;
        row.sense = 'E';
        row.constant.add(vt.x[t][g], 1.0).add(vt.u[t][g], -1.0).add(vt.v[t][g], 1.0);
        if (t == 0)
          row.constant.offset -= gen.initial_on ? 1.0 : 0.0;
        else
          row.constant.add(vt.x[t - 1][g], -1.0);
        rows.push_back(std::move(row));
      }
      {
        ModelRow row;  // x - sum u >= 0 over the run window
        row.name = "minon_" + gen.id + tt;
        row.t = t;
        row.constant.add(vt.x[t][g], 1.0);
        for (int tau = std::max(0, t - gen.min_on + 1); tau <= t; ++tau)
          row.constant.add(vt.u[tau][g], -1.0);
        rows.push_back(std::move(row));
      }
      {
        ModelRow row;  // 1 - x - sum v >= 0 over the rest window
        row.name = "minoff_" + gen.id + tt;
        row.t = t;
        row.constant.offset = 1.0;
        row.constant.add(vt.x[t][g], -1.0);
        for (int tau = std::max(0, t - gen.min_off + 1); tau <= t; ++tau)
          row.constant.add(vt.v[tau][g], -1.0);
        rows.push_back(std::move(row));
      }
    }
  }
}

inline void build_power_rows(const IegsNetwork& net, const Ptdf& ptdf, const VarTable& vt,
                             std::vector<ModelRow>& rows) {
  const auto& pw = net.power;
  const int ng = static_cast<int>(pw.generators.size());
  const int nw = static_cast<int>(pw.wind_farms.size());
  for (int s = 0; s < vt.S; ++s)
    for (int t = 0; t < vt.T; ++t) {
      const std::string ts = "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
      for (int g = 0; g < ng; ++g) {
        const auto& gen = pw.generators[g];
        const int r = vt.r[s][t][g], rc = vt.rc[s][t][g];
        {
          ModelRow row;  // output above the commitment floor
          row.name = "pmin_" + gen.id + ts;
          row.t = t;
          row.s = s;
          row.kind = RowKind::RobustSum;
          row.constant.add(r, 1.0).add(vt.x[t][g], -gen.output_min);
          row.sigma.add(rc, 1.0);
          rows.push_back(std::move(row));
        }
        {
          ModelRow row;  // and below the cap
          row.name = "pmax_" + gen.id + ts;
          row.t = t;
          row.s = s;
          row.kind = RowKind::RobustSum;
          row.constant.add(vt.x[t][g], gen.output_max).add(r, -1.0);
          row.sigma.add(rc, -1.0);
          rows.push_back(std::move(row));
        }
        {
          ModelRow up;  // ramp-up headroom against the previous rule
          up.name = "rampup_" + gen.id + ts;
          up.t = t;
          up.s = s;
          up.kind = RowKind::RobustSum;
          up.constant.add(vt.u[t][g], gen.startup_ramp).add(r, -1.0);
          up.sigma.add(rc, -1.0);
          if (t == 0) {
            up.constant.offset += gen.initial_output;
            if (gen.initial_on) up.constant.offset += gen.ramp_up;
          } else {
            up.constant.add(vt.x[t - 1][g], gen.ramp_up).add(vt.r[s][t - 1][g], 1.0);
            up.sigma_prev.add(vt.rc[s][t - 1][g], 1.0);
          }
          rows.push_back(std::move(up));

          ModelRow dn;
          dn.name = "rampdn_" + gen.id + ts;
          dn.t = t;
          dn.s = s;
          dn.kind = RowKind::RobustSum;
          dn.constant.add(vt.x[t][g], gen.ramp_down)
              .add(vt.v[t][g], gen.shutdown_ramp)
              .add(r, 1.0);
          dn.sigma.add(rc, 1.0);
          if (t == 0) {
            dn.constant.offset -= gen.initial_output;
          } else {
            dn.constant.add(vt.r[s][t - 1][g], -1.0);
            dn.sigma_prev.add(vt.rc[s][t - 1][g], -1.0);
          }
          rows.push_back(std::move(dn));
        }
      }

      // line limits keep individual farm coefficients
      for (std::size_t l = 0; l < pw.lines.size(); ++l) {
        LinExpr flow_const;
        LinExpr flow_sigma;
        std::vector<double> flow_farm(nw, 0.0);
        for (int g = 0; g < ng; ++g) {
          const double b = ptdf.beta(l, pw.bus_index(pw.generators[g].bus));
          flow_const.add(vt.r[s][t][g], b);
          flow_sigma.add(vt.rc[s][t][g], b);
        }
        for (int w = 0; w < nw; ++w)
          flow_farm[w] = ptdf.beta(l, pw.bus_index(pw.wind_farms[w].bus));
        for (std::size_t b = 0; b < pw.buses.size(); ++b)
          flow_const.offset -= ptdf.beta(l, b) * pw.load_at(static_cast<int>(b), t);

        const double lim = pw.lines[l].thermal_limit;
        ModelRow pos;  // P_l - flow >= 0
        pos.name = "thermal_" + pw.lines[l].id + ts + "_pos";
        pos.t = t;
        pos.s = s;
        pos.kind = RowKind::RobustFull;
        pos.constant.offset = lim;
        pos.constant.add(flow_const, -1.0);
        pos.sigma.add(flow_sigma, -1.0);
        pos.farm.resize(nw);
        for (int w = 0; w < nw; ++w) pos.farm[w] = -flow_farm[w];
        rows.push_back(std::move(pos));

        ModelRow neg;  // flow + P_l >= 0
        neg.name = "thermal_" + pw.lines[l].id + ts + "_neg";
        neg.t = t;
        neg.s = s;
        neg.kind = RowKind::RobustFull;
        neg.constant.offset = lim;
        neg.constant.add(flow_const, 1.0);
        neg.sigma.add(flow_sigma, 1.0);
        neg.farm = flow_farm;
        rows.push_back(std::move(neg));
      }

      // balance identities: the rules must absorb wind one for one
      {
        ModelRow lvl;
        lvl.name = "balance_level" + ts;
        lvl.t = t;
        lvl.s = s;
        lvl.sense = 'E';
        for (int g = 0; g < ng; ++g) lvl.constant.add(vt.r[s][t][g], 1.0);
        lvl.constant.offset = -pw.total_load(t);
        rows.push_back(std::move(lvl));

        ModelRow slope;
        slope.name = "balance_slope" + ts;
        slope.t = t;
        slope.s = s;
        slope.sense = 'E';
        for (int g = 0; g < ng; ++g) slope.constant.add(vt.rc[s][t][g], 1.0);
        slope.constant.offset = 1.0;
        rows.push_back(std::move(slope));
      }
    }
}

namespace detail {

// nodal injection of the reduced gas balance, split into the constant and
// sum-coefficient parts; k indexes the rows of the reduced incidence
struct GasInjExpr {
  std::vector<LinExpr> cons, sigma;
};

inline GasInjExpr gas_injections(const IegsNetwork& net, const GasIncidence& inc,
                                 const VarTable& vt, int t, int s) {
  const auto& pw = net.power;
  const auto& gs = net.gas;
  const int rows = static_cast<int>(inc.edges_red.rows());
  GasInjExpr e;
  e.cons.resize(rows);
  e.sigma.resize(rows);
  for (int k = 0; k < rows; ++k) {
    for (std::size_t w = 0; w < gs.wells.size(); ++w) {
      const double b = inc.wells_red(k, w);
      if (b == 0.0) continue;
      e.cons[k].add(vt.sw[s][t][w], b);
      e.sigma[k].add(vt.swc[s][t][w], b);
    }
    e.cons[k].offset -= gs.load_at(inc.non_ref_nodes[k], t);
    int gas_gen = 0;
    for (std::size_t g = 0; g < pw.generators.size(); ++g) {
      if (pw.generators[g].kind != GenKind::GasFired) continue;
      const double b = inc.gas_gens_red(k, gas_gen++);
      if (b == 0.0) continue;
      const double chi = net.coupling_of(pw.generators[g]).conversion;
      e.cons[k].add(vt.r[s][t][g], -b * chi);
      e.sigma[k].add(vt.rc[s][t][g], -b * chi);
    }
  }
  return e;
}

// pressure of any node as (constant, sum-coefficient) expressions: the
// decision rule when the node carries one, otherwise the reconstruction
inline std::pair<LinExpr, LinExpr> pressure_expr(const ReductionMatrices& red,
                                                 const GasInjExpr& inj, const VarTable& vt,
                                                 int t, int s, int node) {
  LinExpr cons, sigma;
  if (red.n1_pos_of_node[node] >= 0) {
    const int pos = red.n1_pos_of_node[node];
    cons.add(vt.o[s][t][pos], 1.0);
    sigma.add(vt.oc[s][t][pos], 1.0);
    return {cons, sigma};
  }
  const int j = red.n2_pos_of_node[node];
  for (std::size_t k = 0; k < red.q_np.cols(); ++k) {
    const double q = red.q_np(j, k);
    if (q == 0.0) continue;
    cons.add(inj.cons[k], q);
    sigma.add(inj.sigma[k], q);
  }
  for (std::size_t f = 0; f < red.n1.size(); ++f) {
    const double q = red.q_nf(j, f);
    if (q == 0.0) continue;
    cons.add(vt.o[s][t][f], -q);
    sigma.add(vt.oc[s][t][f], -q);
  }
  return {cons, sigma};
}

}  // namespace detail

inline void build_gas_rows(const IegsNetwork& net, const GasIncidence& inc,
                           const ReductionSet& rs, const VarTable& vt,
                           std::vector<ModelRow>& rows) {
  const auto& pw = net.power;
  const auto& gs = net.gas;
  const int np = static_cast<int>(gs.pipelines.size());
  for (int s = 0; s < vt.S; ++s)
    for (int t = 0; t < vt.T; ++t) {
      const std::string ts = "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
      const auto& red = rs.per[s][t];
      const auto inj = detail::gas_injections(net, inc, vt, t, s);

      for (std::size_t w = 0; w < gs.wells.size(); ++w) {
        const auto& well = gs.wells[w];
        ModelRow lo;
        lo.name = "wellmin_" + well.id + ts;
        lo.t = t;
        lo.s = s;
        lo.kind = RowKind::RobustSum;
        lo.constant.add(vt.sw[s][t][w], 1.0);
        lo.constant.offset = -well.output_min;
        lo.sigma.add(vt.swc[s][t][w], 1.0);
        rows.push_back(std::move(lo));

        ModelRow hi;
        hi.name = "wellmax_" + well.id + ts;
        hi.t = t;
        hi.s = s;
        hi.kind = RowKind::RobustSum;
        hi.constant.add(vt.sw[s][t][w], -1.0);
        hi.constant.offset = well.output_max;
        hi.sigma.add(vt.swc[s][t][w], -1.0);
        rows.push_back(std::move(hi));
      }

      // pressure windows: decision-rule nodes directly, the rest through the
      // linear reconstruction
      for (std::size_t n = 0; n < gs.nodes.size(); ++n) {
        const auto [cons, sigma] =
            detail::pressure_expr(red, inj, vt, t, s, static_cast<int>(n));
        ModelRow lo;
        lo.name = "pressmin_" + gs.nodes[n].id + ts;
        lo.t = t;
        lo.s = s;
        lo.kind = RowKind::RobustSum;
        lo.constant.add(cons, 1.0);
        lo.constant.offset -= gs.nodes[n].pressure_min;
        lo.sigma.add(sigma, 1.0);
        rows.push_back(std::move(lo));

        ModelRow hi;
        hi.name = "pressmax_" + gs.nodes[n].id + ts;
        hi.t = t;
        hi.s = s;
        hi.kind = RowKind::RobustSum;
        hi.constant.add(cons, -1.0);
        hi.constant.offset += gs.nodes[n].pressure_max;
        hi.sigma.add(sigma, -1.0);
        rows.push_back(std::move(hi));
      }

      // compressor boost window on reconstructed or ruled pressures
      for (std::size_t c = 0; c < gs.compressors.size(); ++c) {
        const auto& cp = gs.compressors[c];
        const auto [fc, fs] =
            detail::pressure_expr(red, inj, vt, t, s, gs.node_index(cp.from));
        const auto [tc2, ts2] =
            detail::pressure_expr(red, inj, vt, t, s, gs.node_index(cp.to));
        ModelRow lo;  // pi_to - ratio_min * pi_from >= 0
        lo.name = "ratlo_" + cp.id + ts;
        lo.t = t;
        lo.s = s;
        lo.kind = RowKind::RobustSum;
        lo.constant.add(tc2, 1.0).add(fc, -cp.ratio_min);
        lo.sigma.add(ts2, 1.0).add(fs, -cp.ratio_min);
        rows.push_back(std::move(lo));

        ModelRow hi;  // ratio_max * pi_from - pi_to >= 0
        hi.name = "rathi_" + cp.id + ts;
        hi.t = t;
        hi.s = s;
        hi.kind = RowKind::RobustSum;
        hi.constant.add(fc, cp.ratio_max).add(tc2, -1.0);
        hi.sigma.add(fs, cp.ratio_max).add(ts2, -1.0);
        rows.push_back(std::move(hi));
      }

      // edge flow windows through the tree flow map
      for (int e = 0; e < gs.num_edges(); ++e) {
        LinExpr cons, sigma;
        for (std::size_t k = 0; k < red.q_edges.cols(); ++k) {
          const double q = red.q_edges(e, k);
          if (q == 0.0) continue;
          cons.add(inj.cons[k], q);
          sigma.add(inj.sigma[k], q);
        }
        const double lim =
            e < np ? gs.pipelines[e].flow_limit : gs.compressors[e - np].flow_limit;
        const std::string id = e < np ? gs.pipelines[e].id : gs.compressors[e - np].id;
        ModelRow lo;
        lo.name = "flowmin_" + id + ts;
        lo.t = t;
        lo.s = s;
        lo.kind = RowKind::RobustSum;
        lo.constant.add(cons, 1.0);
        lo.sigma.add(sigma, 1.0);
        rows.push_back(std::move(lo));

        ModelRow hi;
        hi.name = "flowmax_" + id + ts;
        hi.t = t;
        hi.s = s;
        hi.kind = RowKind::RobustSum;
        hi.constant.add(cons, -1.0);
        hi.constant.offset = lim;
        hi.sigma.add(sigma, -1.0);
        rows.push_back(std::move(hi));
      }

      // gas balance identities mirroring the power ones
      {
        ModelRow lvl;
        lvl.name = "gasbalance_level" + ts;
        lvl.t = t;
        lvl.s = s;
        lvl.sense = 'E';
        for (std::size_t w = 0; w < gs.wells.size(); ++w)
          lvl.constant.add(vt.sw[s][t][w], 1.0);
        for (std::size_t g = 0; g < pw.generators.size(); ++g)
          if (pw.generators[g].kind == GenKind::GasFired)
            lvl.constant.add(vt.r[s][t][g], -net.coupling_of(pw.generators[g]).conversion);
        for (std::size_t n = 0; n < gs.nodes.size(); ++n)
          lvl.constant.offset -= gs.load_at(static_cast<int>(n), t);
        rows.push_back(std::move(lvl));

        ModelRow slope;
        slope.name = "gasbalance_slope" + ts;
        slope.t = t;
        slope.s = s;
        slope.sense = 'E';
        for (std::size_t w = 0; w < gs.wells.size(); ++w)
          slope.constant.add(vt.swc[s][t][w], 1.0);
        for (std::size_t g = 0; g < pw.generators.size(); ++g)
          if (pw.generators[g].kind == GenKind::GasFired)
            slope.constant.add(vt.rc[s][t][g], -net.coupling_of(pw.generators[g]).conversion);
        rows.push_back(std::move(slope));
      }
    }
}

// objective pieces: commitment costs plus, per (t,s), the affine stage cost
// whose worst case over the ball is taken later
struct LdrObjective {
  LinExpr fixed;                               // commitment part
  std::vector<std::vector<LinExpr>> stage;     // [s][t] constant part
  std::vector<std::vector<LinExpr>> stage_sigma;  // [s][t] coefficient of the wind sum
};

struct LdrModel {
  VarTable vars;
  std::vector<ModelRow> rows;
  LdrObjective objective;
};

inline LdrModel assemble_ldr(const IegsNetwork& net, const Ptdf& ptdf, const GasIncidence& inc,
                             const ReductionSet& rs, int num_scenarios) {
  LdrModel m;
  m.vars = build_vars(net, rs, num_scenarios);
  build_uc_rows(net, m.vars, m.rows);
  build_power_rows(net, ptdf, m.vars, m.rows);
  build_gas_rows(net, inc, rs, m.vars, m.rows);
  for (auto& row : m.rows) {
    row.constant.compress();
    row.sigma.compress();
    row.sigma_prev.compress();
  }

  const auto& pw = net.power;
  const auto& gs = net.gas;
  auto& obj = m.objective;
  for (int t = 0; t < m.vars.T; ++t)
    for (std::size_t g = 0; g < pw.generators.size(); ++g) {
      obj.fixed.add(m.vars.x[t][g], pw.generators[g].no_load_cost);
      obj.fixed.add(m.vars.u[t][g], pw.generators[g].startup_cost);
      obj.fixed.add(m.vars.v[t][g], pw.generators[g].shutdown_cost);
    }
  obj.stage.assign(num_scenarios, std::vector<LinExpr>(m.vars.T));
  obj.stage_sigma.assign(num_scenarios, std::vector<LinExpr>(m.vars.T));
  for (int s = 0; s < num_scenarios; ++s)
    for (int t = 0; t < m.vars.T; ++t) {
      for (std::size_t g = 0; g < pw.generators.size(); ++g) {
        obj.stage[s][t].add(m.vars.r[s][t][g], pw.generators[g].cost);
        obj.stage_sigma[s][t].add(m.vars.rc[s][t][g], pw.generators[g].cost);
      }
      for (std::size_t w = 0; w < gs.wells.size(); ++w) {
        obj.stage[s][t].add(m.vars.sw[s][t][w], gs.wells[w].cost);
        obj.stage_sigma[s][t].add(m.vars.swc[s][t][w], gs.wells[w].cost);
      }
      obj.stage[s][t].compress();
      obj.stage_sigma[s][t].compress();
    }
  return m;
}

struct RowCensus {
  int non_robust = 0, robust_sum = 0, robust_full = 0, equalities = 0;
};

inline RowCensus census(const std::vector<ModelRow>& rows) {
  RowCensus c;
  for (const auto& row : rows) {
    if (row.kind == RowKind::NonRobust) ++c.non_robust;
    if (row.kind == RowKind::RobustSum) ++c.robust_sum;
    if (row.kind == RowKind::RobustFull) ++c.robust_full;
    if (row.sense == 'E') ++c.equalities;
  }
  return c;
}

}  // namespace iegs
