#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "iegs/matrix.hpp"

namespace iegs {

struct NetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GenKind { CoalFired, GasFired };

struct Line {
  std::string id;
  std::string from_bus, to_bus;
  double reactance = 0.0;      // p.u.
  double thermal_limit = 0.0;  // MW
};

struct Generator {
  std::string id;
  std::string bus;
  GenKind kind = GenKind::CoalFired;
  double cost = 0.0;          // $/MWh
  double no_load_cost = 0.0;  // $/h
  double startup_cost = 0.0;
  double shutdown_cost = 0.0;
  double output_min = 0.0, output_max = 0.0;  // MW
  double ramp_up = 0.0, ramp_down = 0.0;      // MW/h
  double startup_ramp = 0.0, shutdown_ramp = 0.0;
  int min_on = 1, min_off = 1;  // h
  bool initial_on = false;
  double initial_output = 0.0;
};

struct WindFarm {
  std::string id;
  std::string bus;
  double output_min = 0.0, output_max = 0.0;  // MW
};

struct PowerSystem {
  std::vector<std::string> buses;
  std::string reference_bus;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  std::map<std::string, std::vector<double>> loads;  // bus -> per-period MW

  int bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
      if (buses[i] == id) return static_cast<int>(i);
    throw NetworkError("unknown bus '" + id + "'");
  }

  double load_at(int bus, int t) const {
    auto it = loads.find(buses[bus]);
    if (it == loads.end()) return 0.0;
    return it->second[t];
  }

  double total_load(int t) const {
    double sum = 0.0;
    for (std::size_t b = 0; b < buses.size(); ++b) sum += load_at(static_cast<int>(b), t);
    return sum;
  }
};

struct GasNode {
  std::string id;
  double pressure_min = 0.0, pressure_max = 0.0;
};

struct Pipeline {
  std::string id;
  std::string from, to;  // declared flow direction from -> to
  double weymouth = 0.0;
  double flow_limit = 0.0;
};

struct Compressor {
  std::string id;
  std::string from, to;
  double ratio_min = 1.0, ratio_max = 1.0;
  double flow_limit = 0.0;
};

struct GasWell {
  std::string id;
  std::string node;
  double output_min = 0.0, output_max = 0.0;
  double cost = 0.0;
};

struct GasSystem {
  std::vector<GasNode> nodes;
  std::string reference_node;
  std::vector<Pipeline> pipelines;
  std::vector<Compressor> compressors;
  std::vector<GasWell> wells;
  std::map<std::string, std::vector<double>> loads;  // node -> per-period demand

  int node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return static_cast<int>(i);
    throw NetworkError("unknown gas node '" + id + "'");
  }

  double load_at(int node, int t) const {
    auto it = loads.find(nodes[node].id);
    if (it == loads.end()) return 0.0;
    return it->second[t];
  }

  int num_edges() const { return static_cast<int>(pipelines.size() + compressors.size()); }

  // endpoints of edge e in the pipelines-then-compressors ordering
  std::pair<int, int> edge_ends(int e) const {
    if (e < static_cast<int>(pipelines.size()))
      return {node_index(pipelines[e].from), node_index(pipelines[e].to)};
    const auto& c = compressors[e - pipelines.size()];
    return {node_index(c.from), node_index(c.to)};
  }
};

struct CouplingEntry {
  std::string gas_node;
  double conversion = 0.0;  // gas units per MWh
};

using Coupling = std::map<std::string, CouplingEntry>;  // generator id -> entry

struct IegsNetwork {
  PowerSystem power;
  GasSystem gas;
  Coupling coupling;
  std::map<std::string, std::string> units;
  int horizon = 0;

  const CouplingEntry& coupling_of(const Generator& g) const {
    auto it = coupling.find(g.id);
    if (it == coupling.end()) throw NetworkError("missing coupling for generator '" + g.id + "'");
    return it->second;
  }
};

// PTDF matrix: rows per line, columns per bus; reference column is zero.
struct Ptdf {
  Matrix beta;  // |lines| x |buses|

  std::vector<double> line_flows(const std::vector<double>& injections) const {
    return beta * injections;
  }
};

struct GasIncidence {
  Matrix wells;        // B^W: nodes x wells
  Matrix loads;        // B^D: nodes x nodes (one aggregate load per node)
  Matrix gas_gens;     // B^G: nodes x gas-fired generators
  Matrix edges;        // B^P: nodes x (pipelines + compressors), +1 at from, -1 at to
  Matrix wells_red;    // B^{W'}
  Matrix loads_red;    // B^{D'}
  Matrix gas_gens_red; // B^{G'}
  Matrix edges_red;    // B^{P'}, square and invertible
  std::vector<int> non_ref_nodes;  // node index per reduced row
};

namespace detail {

inline void check_connected(int n, const std::vector<std::pair<int, int>>& edges,
                            const char* what) {
  if (n == 0) throw NetworkError(std::string(what) + " has no nodes");
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != n) throw NetworkError(std::string(what) + " is disconnected");
}

inline bool has_cycle(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) return true;
    parent[ra] = rb;
  }
  return false;
}

}  // namespace detail

inline void validate(const IegsNetwork& net) {
  const auto& pw = net.power;
  const auto& gs = net.gas;
  if (pw.buses.empty()) throw NetworkError("power system has no buses");
  {
    std::set<std::string> seen(pw.buses.begin(), pw.buses.end());
    if (seen.size() != pw.buses.size()) throw NetworkError("duplicate bus id");
    if (!seen.count(pw.reference_bus))
      throw NetworkError("reference bus '" + pw.reference_bus + "' is not a member of buses");
  }
  std::vector<std::pair<int, int>> pedges;
  for (const auto& l : pw.lines) {
    if (l.reactance <= 0.0) throw NetworkError("line '" + l.id + "' has non-positive reactance");
    pedges.emplace_back(pw.bus_index(l.from_bus), pw.bus_index(l.to_bus));
  }
  detail::check_connected(static_cast<int>(pw.buses.size()), pedges, "power graph");
  for (const auto& g : pw.generators) {
    pw.bus_index(g.bus);
    if (g.output_min > g.output_max)
      throw NetworkError("generator '" + g.id + "' has output_min > output_max");
    if (g.min_on < 1 || g.min_off < 1)
      throw NetworkError("generator '" + g.id + "' needs min_on, min_off >= 1");
    if (g.kind == GenKind::GasFired) {
      auto it = net.coupling.find(g.id);
      if (it == net.coupling.end())
        throw NetworkError("missing coupling for gas-fired generator '" + g.id + "'");
      gs.node_index(it->second.gas_node);
      if (it->second.conversion <= 0.0)
        throw NetworkError("coupling for '" + g.id + "' needs conversion > 0");
    }
  }
  for (const auto& [gid, entry] : net.coupling) {
    bool found = false;
    for (const auto& g : pw.generators)
      if (g.id == gid) {
        if (g.kind != GenKind::GasFired)
          throw NetworkError("coupling entry for non-gas-fired generator '" + gid + "'");
        found = true;
      }
    if (!found) throw NetworkError("coupling entry for unknown generator '" + gid + "'");
    (void)entry;
  }
  for (const auto& w : pw.wind_farms) {
    pw.bus_index(w.bus);
    if (w.output_min > w.output_max)
      throw NetworkError("wind farm '" + w.id + "' has output_min > output_max");
  }

  if (gs.nodes.empty()) throw NetworkError("gas system has no nodes");
  {
    std::set<std::string> seen;
    for (const auto& n : gs.nodes) {
      if (!seen.insert(n.id).second) throw NetworkError("duplicate gas node id '" + n.id + "'");
      if (n.pressure_min <= 0.0)
        throw NetworkError("gas node '" + n.id + "' needs pressure_min > 0");
      if (n.pressure_min > n.pressure_max)
        throw NetworkError("gas node '" + n.id + "' has pressure_min > pressure_max");
    }
    if (!seen.count(gs.reference_node))
      throw NetworkError("reference gas node '" + gs.reference_node + "' unknown");
  }
  std::vector<std::pair<int, int>> gedges;
  for (const auto& p : gs.pipelines) {
    if (p.weymouth <= 0.0)
      throw NetworkError("pipeline '" + p.id + "' needs a positive Weymouth constant");
    gedges.emplace_back(gs.node_index(p.from), gs.node_index(p.to));
  }
  for (const auto& c : gs.compressors) {
    if (c.ratio_min <= 0.0 || c.ratio_min > c.ratio_max)
      throw NetworkError("compressor '" + c.id + "' needs 0 < ratio_min <= ratio_max");
    gedges.emplace_back(gs.node_index(c.from), gs.node_index(c.to));
  }
  if (gedges.size() != gs.nodes.size() - 1 ||
      detail::has_cycle(static_cast<int>(gs.nodes.size()), gedges))
    throw NetworkError("gas network not radial");
  detail::check_connected(static_cast<int>(gs.nodes.size()), gedges, "gas network");
  for (const auto& w : gs.wells) {
    gs.node_index(w.node);
    if (w.output_min > w.output_max)
      throw NetworkError("well '" + w.id + "' has output_min > output_max");
  }

  // load horizons must agree
  int T = net.horizon;
  for (const auto& [id, v] : pw.loads)
    if (static_cast<int>(v.size()) != T)
      throw NetworkError("power load at '" + id + "' has wrong horizon length");
  for (const auto& [id, v] : gs.loads)
    if (static_cast<int>(v.size()) != T)
      throw NetworkError("gas load at '" + id + "' has wrong horizon length");
}

inline IegsNetwork load_network(const nlohmann::json& doc) {
  IegsNetwork net;
  try {
    const auto& meta = doc.at("meta");
    for (const auto& [k, v] : meta.at("units").items()) net.units[k] = v.get<std::string>();

    const auto& pj = doc.at("power");
    net.power.reference_bus = pj.at("reference_bus").get<std::string>();
    for (const auto& b : pj.at("buses")) net.power.buses.push_back(b.get<std::string>());
    for (const auto& lj : pj.at("lines")) {
      Line l;
      l.id = lj.at("id").get<std::string>();
      l.from_bus = lj.at("from_bus").get<std::string>();
      l.to_bus = lj.at("to_bus").get<std::string>();
      l.reactance = lj.at("reactance").get<double>();
      l.thermal_limit = lj.at("thermal_limit").get<double>();
      net.power.lines.push_back(l);
    }
    for (const auto& gj : pj.at("generators")) {
      Generator g;
      g.id = gj.at("id").get<std::string>();
      g.bus = gj.at("bus").get<std::string>();
      const std::string kind = gj.at("kind").get<std::string>();
      if (kind == "coal-fired")
        g.kind = GenKind::CoalFired;
      else if (kind == "gas-fired")
        g.kind = GenKind::GasFired;
      else
        throw NetworkError("generator '" + g.id + "' has unknown kind '" + kind + "'");
      g.cost = gj.at("cost").get<double>();
      g.no_load_cost = gj.at("no_load_cost").get<double>();
      g.startup_cost = gj.at("startup_cost").get<double>();
      g.shutdown_cost = gj.at("shutdown_cost").get<double>();
      g.output_min = gj.at("output_min").get<double>();
      g.output_max = gj.at("output_max").get<double>();
      g.ramp_up = gj.at("ramp_up").get<double>();
      g.ramp_down = gj.at("ramp_down").get<double>();
      g.startup_ramp = gj.at("startup_ramp").get<double>();
      g.shutdown_ramp = gj.at("shutdown_ramp").get<double>();
      g.min_on = gj.at("min_on").get<int>();
      g.min_off = gj.at("min_off").get<int>();
      g.initial_on = gj.value("initial_on", false);
      g.initial_output = gj.value("initial_output", 0.0);
      net.power.generators.push_back(g);
    }
    for (const auto& wj : pj.at("wind_farms")) {
      WindFarm w;
      w.id = wj.at("id").get<std::string>();
      w.bus = wj.at("bus").get<std::string>();
      w.output_min = wj.at("output_min").get<double>();
      w.output_max = wj.at("output_max").get<double>();
      net.power.wind_farms.push_back(w);
    }
    for (const auto& [bus, series] : pj.at("loads").items())
      net.power.loads[bus] = series.get<std::vector<double>>();

    const auto& gj = doc.at("gas");
    net.gas.reference_node = gj.at("reference_node").get<std::string>();
    for (const auto& nj : gj.at("nodes")) {
      GasNode n;
      n.id = nj.at("id").get<std::string>();
      n.pressure_min = nj.at("pressure_min").get<double>();
      n.pressure_max = nj.at("pressure_max").get<double>();
      net.gas.nodes.push_back(n);
    }
    for (const auto& pjp : gj.at("pipelines")) {
      Pipeline p;
      p.id = pjp.at("id").get<std::string>();
      p.from = pjp.at("from").get<std::string>();
      p.to = pjp.at("to").get<std::string>();
      p.weymouth = pjp.at("weymouth").get<double>();
      p.flow_limit = pjp.at("flow_limit").get<double>();
      net.gas.pipelines.push_back(p);
    }
    for (const auto& cj : gj.at("compressors")) {
      Compressor c;
      c.id = cj.at("id").get<std::string>();
      c.from = cj.at("from").get<std::string>();
      c.to = cj.at("to").get<std::string>();
      c.ratio_min = cj.at("ratio_min").get<double>();
      c.ratio_max = cj.at("ratio_max").get<double>();
      c.flow_limit = cj.at("flow_limit").get<double>();
      net.gas.compressors.push_back(c);
    }
    for (const auto& wj : gj.at("wells")) {
      GasWell w;
      w.id = wj.at("id").get<std::string>();
      w.node = wj.at("node").get<std::string>();
      w.output_min = wj.at("output_min").get<double>();
      w.output_max = wj.at("output_max").get<double>();
      w.cost = wj.at("cost").get<double>();
      net.gas.wells.push_back(w);
    }
    for (const auto& [node, series] : gj.at("loads").items())
      net.gas.loads[node] = series.get<std::vector<double>>();

    for (const auto& cj : doc.at("coupling")) {
      CouplingEntry e;
      e.gas_node = cj.at("gas_node").get<std::string>();
      e.conversion = cj.at("conversion").get<double>();
      net.coupling[cj.at("generator").get<std::string>()] = e;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw NetworkError(std::string("network schema violation: ") + ex.what());
  }

  // horizon from the longest load series; validate() enforces agreement
  net.horizon = 0;
  for (const auto& [id, v] : net.power.loads)
    net.horizon = std::max(net.horizon, static_cast<int>(v.size()));
  for (const auto& [id, v] : net.gas.loads)
    net.horizon = std::max(net.horizon, static_cast<int>(v.size()));
  if (net.horizon == 0) throw NetworkError("no load series found; horizon undefined");

  validate(net);
  return net;
}

inline IegsNetwork load_network_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw NetworkError(std::string("network schema violation: ") + ex.what());
  }
  return load_network(doc);
}

inline Ptdf compute_ptdf(const PowerSystem& pw) {
  const int nb = static_cast<int>(pw.buses.size());
  const int nl = static_cast<int>(pw.lines.size());
  const int ref = pw.bus_index(pw.reference_bus);
  std::vector<int> red(nb, -1);  // bus -> reduced index
  int k = 0;
  for (int b = 0; b < nb; ++b)
    if (b != ref) red[b] = k++;
  Matrix B(nb - 1, nb - 1);
  for (const auto& l : pw.lines) {
    const int a = pw.bus_index(l.from_bus), b = pw.bus_index(l.to_bus);
    const double y = 1.0 / l.reactance;
    if (red[a] >= 0) B(red[a], red[a]) += y;
    if (red[b] >= 0) B(red[b], red[b]) += y;
    if (red[a] >= 0 && red[b] >= 0) {
      B(red[a], red[b]) -= y;
      B(red[b], red[a]) -= y;
    }
  }
  LuFactor lu(std::move(B));
  if (lu.singular())
    throw NetworkError("singular reduced susceptance matrix; power graph disconnected");

  Ptdf out;
  out.beta = Matrix(nl, nb);
  std::vector<double> rhs(nb - 1, 0.0);
  for (int li = 0; li < nl; ++li) {
    const auto& l = pw.lines[li];
    const int a = pw.bus_index(l.from_bus), b = pw.bus_index(l.to_bus);
    const double y = 1.0 / l.reactance;
    std::fill(rhs.begin(), rhs.end(), 0.0);
    if (red[a] >= 0) rhs[red[a]] += y;
    if (red[b] >= 0) rhs[red[b]] -= y;
    const auto row = lu.solve(rhs);  // susceptance matrix is symmetric
    for (int bus = 0; bus < nb; ++bus) out.beta(li, bus) = bus == ref ? 0.0 : row[red[bus]];
  }
  return out;
}

inline GasIncidence build_gas_incidence(const GasSystem& gs, const Coupling& coupling,
                                        const PowerSystem& pw) {
  const int nn = static_cast<int>(gs.nodes.size());
  const int ref = gs.node_index(gs.reference_node);
  GasIncidence inc;
  inc.wells = Matrix(nn, gs.wells.size());
  for (std::size_t w = 0; w < gs.wells.size(); ++w)
    inc.wells(gs.node_index(gs.wells[w].node), w) = 1.0;
  inc.loads = Matrix::identity(nn);
  std::vector<const Generator*> gas_gens;
  for (const auto& g : pw.generators)
    if (g.kind == GenKind::GasFired) gas_gens.push_back(&g);
  inc.gas_gens = Matrix(nn, gas_gens.size());
  for (std::size_t gi = 0; gi < gas_gens.size(); ++gi) {
    const auto it = coupling.find(gas_gens[gi]->id);
    if (it == coupling.end())
      throw NetworkError("missing coupling for gas-fired generator '" + gas_gens[gi]->id + "'");
    inc.gas_gens(gs.node_index(it->second.gas_node), gi) = 1.0;
  }
  inc.edges = Matrix(nn, gs.num_edges());
  for (int e = 0; e < gs.num_edges(); ++e) {
    const auto [m, n] = gs.edge_ends(e);
    inc.edges(m, e) = 1.0;
    inc.edges(n, e) = -1.0;
  }
  for (int b = 0; b < nn; ++b)
    if (b != ref) inc.non_ref_nodes.push_back(b);

  auto drop_ref = [&](const Matrix& full) {
    Matrix red(nn - 1, full.cols());
    for (std::size_t i = 0; i < inc.non_ref_nodes.size(); ++i)
      for (std::size_t j = 0; j < full.cols(); ++j) red(i, j) = full(inc.non_ref_nodes[i], j);
    return red;
  };
  inc.wells_red = drop_ref(inc.wells);
  inc.loads_red = drop_ref(inc.loads);
  inc.gas_gens_red = drop_ref(inc.gas_gens);
  inc.edges_red = drop_ref(inc.edges);
  LuFactor lu(inc.edges_red);
  if (lu.singular())
    throw NetworkError("reduced gas edge incidence is singular; inconsistent tree topology");
  return inc;
}

}  // namespace iegs
