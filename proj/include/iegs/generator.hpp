#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iegs/evaluation.hpp"
#include "iegs/pipeline.hpp"

namespace iegs {

struct GenSpec {
  int buses = 3;
  int gas_nodes = 3;
  int compressors = 1;
  int periods = 4;
  int scenarios = 3;
  unsigned seed = 0;
};

struct GeneratedFixture {
  IegsNetwork net;
  ScenarioSet sc;
  nlohmann::json doc;
  std::string samples_csv;
  int attempts = 0;
};

namespace detail {

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// one seeded draw of a whole instance; feasibility is checked by the caller
inline IegsNetwork draw_network(const GenSpec& spec, std::mt19937& rng,
                                std::vector<std::vector<std::vector<double>>>& samples) {
  auto uni = [&](double a, double b) {
    return round6(std::uniform_real_distribution<double>(a, b)(rng));
  };
  auto pick = [&](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  const int nb = spec.buses, nm = spec.gas_nodes, T = spec.periods;
  const double pi2 = 6.283185307179586;

  IegsNetwork net;
  auto& pw = net.power;
  for (int i = 0; i < nb; ++i) pw.buses.push_back("b" + std::to_string(i + 1));
  pw.reference_bus = "b1";
  for (int i = 1; i < nb; ++i) {
    const int parent = pick(0, i - 1);
    pw.lines.push_back({"l" + std::to_string(i), pw.buses[parent], pw.buses[i],
                        uni(0.05, 0.25), 1e4});
  }
  if (nb >= 4) {  // one meshing line so the grid is not a pure tree
    const int a = 0, b = nb - 1;
    pw.lines.push_back({"l" + std::to_string(nb), pw.buses[a], pw.buses[b],
                        uni(0.05, 0.25), 1e4});
  }

  auto coal = [&](const std::string& id, const std::string& bus) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.kind = GenKind::CoalFired;
    g.cost = uni(25.0, 35.0);
    g.no_load_cost = uni(4.0, 8.0);
    g.startup_cost = uni(30.0, 60.0);
    g.shutdown_cost = uni(8.0, 15.0);
    g.output_min = uni(3.0, 8.0);
    g.output_max = uni(60.0, 100.0);
    g.ramp_up = g.ramp_down = round6(0.8 * g.output_max);
    g.startup_ramp = g.shutdown_ramp = round6(0.9 * g.output_max);
    g.min_on = g.min_off = 2;
    return g;
  };
  auto gasfired = [&](const std::string& id, const std::string& bus) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.kind = GenKind::GasFired;
    g.cost = 0.0;
    g.no_load_cost = uni(1.0, 3.0);
    g.startup_cost = uni(10.0, 20.0);
    g.shutdown_cost = uni(3.0, 8.0);
    g.output_min = uni(3.0, 8.0);
    g.output_max = uni(50.0, 80.0);
    g.ramp_up = g.ramp_down = round6(0.9 * g.output_max);
    g.startup_ramp = g.shutdown_ramp = g.output_max;
    g.min_on = g.min_off = 1;
    return g;
  };
  pw.generators.push_back(coal("g1", "b1"));
  if (nb >= 5) pw.generators.push_back(coal("g3", "b3"));
  pw.generators.push_back(gasfired("g2", pw.buses[nb - 1]));

  double cap = 0.0;
  for (const auto& g : pw.generators) cap += g.output_max;
  const double peak = round6(0.55 * cap);
  const double wcap = round6(0.45 * peak);
  pw.wind_farms.push_back({"w1", pw.buses[pick(1, nb - 1)], 0.0, wcap});

  const double phi = uni(0.0, pi2);
  std::vector<double> weight(nb);
  double wsum = 0.0;
  for (int i = 0; i < nb; ++i) {
    weight[i] = uni(0.2, 1.0);
    wsum += weight[i];
  }
  for (int i = 0; i < nb; ++i) {
    std::vector<double> series;
    for (int t = 0; t < T; ++t) {
      const double sys = peak * (0.75 + 0.25 * std::sin(pi2 * t / T + phi));
      series.push_back(round6(sys * weight[i] / wsum));
    }
    pw.loads[pw.buses[i]] = series;
  }

  const double psi = uni(0.0, pi2);
  samples.assign(spec.scenarios, std::vector<std::vector<double>>(T));
  for (int s = 0; s < spec.scenarios; ++s)
    for (int t = 0; t < T; ++t) {
      const double base = wcap * (0.35 + 0.2 * std::sin(pi2 * t / T + psi));
      double v = round6(base * uni(0.75, 1.25));
      v = std::min(std::max(v, 0.0), wcap);
      samples[s][t] = {v};
    }

  auto& gs = net.gas;
  for (int i = 0; i < nm; ++i) gs.nodes.push_back({"n" + std::to_string(i + 1), 30.0, 80.0});
  gs.reference_node = "n1";
  struct Edge {
    int from, to;
  };
  std::vector<Edge> edges;
  for (int i = 1; i < nm; ++i) edges.push_back({pick(0, i - 1), i});
  std::vector<int> is_comp(edges.size(), 0);
  {
    std::vector<int> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
      std::swap(order[i], order[pick(0, i)]);
    for (int c = 0; c < spec.compressors; ++c) is_comp[order[c]] = 1;
  }
  const auto& gen_cap = pw.generators.back().output_max;
  const double chi = uni(1.5, 2.5);
  const double gas_need = chi * gen_cap;  // rough peak draw of the gas unit
  const double edge_cap = round6(3.0 * gas_need + 100.0);
  int pc = 0, cc = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (is_comp[e])
      gs.compressors.push_back({"c" + std::to_string(++cc), gs.nodes[ed.from].id,
                                gs.nodes[ed.to].id, uni(1.05, 1.15), uni(1.5, 1.9), edge_cap});
    else
      gs.pipelines.push_back({"p" + std::to_string(++pc), gs.nodes[ed.from].id,
                              gs.nodes[ed.to].id, uni(4.0, 7.0), edge_cap});
  }
  gs.wells.push_back({"wl1", "n1", 0.0, round6(4.0 * gas_need + 200.0), uni(1.5, 3.0)});

  const int couple_node = nm - 1;  // the last node hosts the gas-fired unit
  net.coupling[pw.generators.back().id] = {gs.nodes[couple_node].id, chi};
  const int load_node = nm >= 3 ? 1 : couple_node;
  {
    const double gpeak = round6(0.3 * gas_need + 15.0);
    std::vector<double> series;
    for (int t = 0; t < T; ++t)
      series.push_back(round6(gpeak * (0.8 + 0.2 * std::sin(pi2 * t / T + phi))));
    gs.loads[gs.nodes[load_node].id] = series;
  }
  net.horizon = T;
  return net;
}

}  // namespace detail

inline nlohmann::json network_to_json(const IegsNetwork& net) {
  nlohmann::json doc;
  doc["meta"]["units"] = {{"power", "MW"}, {"gas", "m3/h"}, {"pressure", "bar"}};
  auto& pj = doc["power"];
  pj["reference_bus"] = net.power.reference_bus;
  pj["buses"] = net.power.buses;
  pj["lines"] = nlohmann::json::array();
  for (const auto& l : net.power.lines)
    pj["lines"].push_back({{"id", l.id},
                           {"from_bus", l.from_bus},
                           {"to_bus", l.to_bus},
                           {"reactance", l.reactance},
                           {"thermal_limit", l.thermal_limit}});
  pj["generators"] = nlohmann::json::array();
  for (const auto& g : net.power.generators)
    pj["generators"].push_back(
        {{"id", g.id},
         {"bus", g.bus},
         {"kind", g.kind == GenKind::CoalFired ? "coal-fired" : "gas-fired"},
         {"cost", g.cost},
         {"no_load_cost", g.no_load_cost},
         {"startup_cost", g.startup_cost},
         {"shutdown_cost", g.shutdown_cost},
         {"output_min", g.output_min},
         {"output_max", g.output_max},
         {"ramp_up", g.ramp_up},
         {"ramp_down", g.ramp_down},
         {"startup_ramp", g.startup_ramp},
         {"shutdown_ramp", g.shutdown_ramp},
         {"min_on", g.min_on},
         {"min_off", g.min_off},
         {"initial_on", g.initial_on},
         {"initial_output", g.initial_output}});
  pj["wind_farms"] = nlohmann::json::array();
  for (const auto& w : net.power.wind_farms)
    pj["wind_farms"].push_back({{"id", w.id},
                                {"bus", w.bus},
                                {"output_min", w.output_min},
                                {"output_max", w.output_max}});
  pj["loads"] = nlohmann::json::object();
  for (const auto& [bus, series] : net.power.loads) pj["loads"][bus] = series;

  auto& gj = doc["gas"];
  gj["reference_node"] = net.gas.reference_node;
  gj["nodes"] = nlohmann::json::array();
  for (const auto& n : net.gas.nodes)
    gj["nodes"].push_back(
        {{"id", n.id}, {"pressure_min", n.pressure_min}, {"pressure_max", n.pressure_max}});
  gj["pipelines"] = nlohmann::json::array();
  for (const auto& p : net.gas.pipelines)
    gj["pipelines"].push_back({{"id", p.id},
                               {"from", p.from},
                               {"to", p.to},
                               {"weymouth", p.weymouth},
                               {"flow_limit", p.flow_limit}});
  gj["compressors"] = nlohmann::json::array();
  for (const auto& c : net.gas.compressors)
    gj["compressors"].push_back({{"id", c.id},
                                 {"from", c.from},
                                 {"to", c.to},
                                 {"ratio_min", c.ratio_min},
                                 {"ratio_max", c.ratio_max},
                                 {"flow_limit", c.flow_limit}});
  gj["wells"] = nlohmann::json::array();
  for (const auto& w : net.gas.wells)
    gj["wells"].push_back({{"id", w.id},
                           {"node", w.node},
                           {"output_min", w.output_min},
                           {"output_max", w.output_max},
                           {"cost", w.cost}});
  gj["loads"] = nlohmann::json::object();
  for (const auto& [node, series] : net.gas.loads) gj["loads"][node] = series;

  doc["coupling"] = nlohmann::json::array();
  for (const auto& [gen, e] : net.coupling)
    doc["coupling"].push_back(
        {{"generator", gen}, {"gas_node", e.gas_node}, {"conversion", e.conversion}});
  return doc;
}

inline std::string samples_to_csv(const ScenarioSet& sc, const IegsNetwork& net) {
  std::string out = "scenario,period,farm,value\n";
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t)
      for (int w = 0; w < sc.num_farms; ++w)
        out += std::to_string(s + 1) + "," + std::to_string(t + 1) + "," +
               net.power.wind_farms[w].id + "," + detail::csv_num(sc.samples[s][t][w]) + "\n";
  return out;
}

// Seeded synthetic instance: random meshed grid plus radial gas tree with the
// requested number of compressors. Line limits are sized from the actual
// dispatch so some can bind, and every returned instance has passed a full
// solve at zero and at five percent budget.
inline GeneratedFixture generate_fixture(const GenSpec& spec) {
  if (spec.buses < 2) throw NetworkError("need at least 2 buses");
  if (spec.gas_nodes < 2) throw NetworkError("need at least 2 gas nodes");
  if (spec.compressors < 0 || spec.compressors > spec.gas_nodes - 1)
    throw NetworkError("compressor count exceeds gas tree edges");
  if (spec.periods < 1 || spec.scenarios < 1)
    throw NetworkError("periods and scenarios must be positive");

  for (int attempt = 0; attempt < 30; ++attempt) {
    std::mt19937 rng(spec.seed + 0x9e3779b9u * static_cast<unsigned>(attempt));
    std::vector<std::vector<std::vector<double>>> samples;
    IegsNetwork net;
    try {
      net = detail::draw_network(spec, rng, samples);
      validate(net);

      ScenarioSet sc;
      sc.horizon = spec.periods;
      sc.num_scenarios = spec.scenarios;
      sc.num_farms = 1;
      sc.samples = samples;
      sc.budgets.assign(spec.scenarios, std::vector<double>(spec.periods, 0.0));
      sc.radius_offset.assign(spec.scenarios, std::vector<double>(spec.periods, 0.0));

      // size line limits off the unconstrained dispatch, then keep margin
      const auto ptdf = compute_ptdf(net.power);
      const auto lin = select_linearization_points(net, ptdf, sc);
      std::vector<double> peak_flow(net.power.lines.size(), 0.0);
      for (int s = 0; s < spec.scenarios; ++s) {
        const auto model = build_deterministic(net, ptdf, sc.samples[s], lin.coef[s]);
        const auto sol = solve_milp(model.lp, model.binaries);
        if (sol.status != LpStatus::Optimal) throw NetworkError("sizing solve failed");
        for (std::size_t l = 0; l < net.power.lines.size(); ++l)
          for (int t = 0; t < spec.periods; ++t) {
            double flow = 0.0;
            for (std::size_t g = 0; g < net.power.generators.size(); ++g)
              flow += ptdf.beta(l, net.power.bus_index(net.power.generators[g].bus)) *
                      sol.x[model.idx.pg[t][g]];
            flow += ptdf.beta(l, net.power.bus_index(net.power.wind_farms[0].bus)) *
                    sc.samples[s][t][0];
            for (std::size_t b = 0; b < net.power.buses.size(); ++b)
              flow -= ptdf.beta(l, b) * net.power.load_at(static_cast<int>(b), t);
            peak_flow[l] = std::max(peak_flow[l], std::fabs(flow));
          }
      }
      for (std::size_t l = 0; l < net.power.lines.size(); ++l)
        net.power.lines[l].thermal_limit =
            detail::round6(std::max(5.0, 1.3 * peak_flow[l] + 2.0));

      // full-pipeline shakedown at zero and moderate budget
      for (double eps : {0.0, 0.05}) {
        ScenarioSet probe = sc;
        probe.set_budget(eps);
        const auto r = solve_pipeline(net, probe);
        if (r.sol.milp.status != LpStatus::Optimal) throw NetworkError("probe solve failed");
        if (!r.lin.converged) throw NetworkError("linearization did not settle");
        const auto res = pipeline_residuals(net, r, probe);
        if (res.max_residual > 0.01 || !res.ordering_violations.empty())
          throw NetworkError("pipe physics too loose at the optimum");
      }

      GeneratedFixture out;
      out.net = net;
      out.sc = sc;
      out.doc = network_to_json(net);
      out.samples_csv = samples_to_csv(sc, net);
      out.attempts = attempt + 1;
      return out;
    } catch (const std::exception&) {
      continue;
    }
  }
  throw NetworkError("generation retry cap exceeded");
}

}  // namespace iegs
