#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "iegs/network.hpp"

namespace iegs {

struct GasReductionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FreeNodeSet {
  std::vector<int> nodes;                    // node indices, in merge order
  std::map<int, std::string> created_by;     // free node -> compressor id

  bool contains(int n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
  }
};

// Free gas node locating: remove compressors, then merge pipeline-only
// subnetworks into the reference one, compressor by compressor in ascending
// id order; each merge contributes the endpoint outside the reference side.
inline FreeNodeSet locate_free_nodes(const GasSystem& gs) {
  const int nn = static_cast<int>(gs.nodes.size());
  std::vector<int> comp(nn);  // pipeline-only component per node
  {
    std::vector<int> parent(nn);
    for (int i = 0; i < nn; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (const auto& p : gs.pipelines) {
      const int a = find(gs.node_index(p.from)), b = find(gs.node_index(p.to));
      if (a != b) parent[a] = b;
    }
    for (int i = 0; i < nn; ++i) comp[i] = find(i);
  }
  std::set<int> reference_side{comp[gs.node_index(gs.reference_node)]};
  std::vector<char> merged(gs.compressors.size(), 0);
  FreeNodeSet out;
  for (std::size_t done = 0; done < gs.compressors.size(); ++done) {
    bool progressed = false;
    for (std::size_t c = 0; c < gs.compressors.size(); ++c) {
      if (merged[c]) continue;
      const int m = gs.node_index(gs.compressors[c].from);
      const int n = gs.node_index(gs.compressors[c].to);
      const bool m_in = reference_side.count(comp[m]) > 0;
      const bool n_in = reference_side.count(comp[n]) > 0;
      if (!m_in && !n_in) continue;
      if (m_in && n_in)
        throw GasReductionError("compressor '" + gs.compressors[c].id +
                                "' closes a cycle through the reference side");
      const int outside = m_in ? n : m;
      out.nodes.push_back(outside);
      out.created_by[outside] = gs.compressors[c].id;
      reference_side.insert(comp[outside]);
      merged[c] = 1;
      progressed = true;
      break;
    }
    if (!progressed)
      throw GasReductionError(
          "no compressor adjoins the reference subnetwork; invalid gas topology");
  }
  return out;
}

// Taylor coefficients of W * sqrt(pi_m^2 - pi_n^2) at (pi_m, pi_n).
inline std::pair<double, double> linearize_weymouth(double weymouth, double pi_m, double pi_n) {
  if (!(pi_m > pi_n) || !(pi_n > 0.0))
    throw GasReductionError("degenerate linearization point: need pi_m > pi_n > 0");
  const double root = std::sqrt(pi_m * pi_m - pi_n * pi_n);
  return {weymouth * pi_m / root, weymouth * pi_n / root};
}

struct WeymouthCoef {
  double pi_m = 0.0, pi_n = 0.0;  // linearization point
  double k_m = 0.0, k_n = 0.0;
};

struct WeymouthLinearization {
  // coef[s][t][l] over passive pipelines
  std::vector<std::vector<std::vector<WeymouthCoef>>> coef;
  bool converged = false;
  int iterations = 0;
  double last_shift = 0.0;                  // max pressure-point change of the final sweep
  std::vector<double> fixed_point_history;  // max shift per iteration

  const WeymouthCoef& at(int s, int t, int l) const { return coef[s][t][l]; }
};

// Variable-reduction matrices for one (t,s): gas flows and non-free pressures
// as linear images of nodal injections and free/reference pressures.
struct ReductionMatrices {
  Matrix q_edges;        // Q^P = (B^{P'})^{-1}, edges x non-ref nodes
  Matrix q_pipe;         // Q_L^P: pipeline rows of Q^P
  Matrix q_comp;         // Q_C^P: compressor rows of Q^P
  Matrix free_cols;      // B^F: Weymouth coefficient columns of N1 pressures
  Matrix q_n;            // Q^N = (B^N)^{-1}
  Matrix q_np;           // Q^N Q_L^P
  Matrix q_nf;           // Q^N B^F
  std::vector<int> n1;   // node indices: free nodes + reference, ascending
  std::vector<int> n2;   // remaining node indices, ascending
  std::vector<int> n1_pos_of_node, n2_pos_of_node;  // -1 when absent
};

inline ReductionMatrices build_reduction(const GasSystem& gs, const GasIncidence& inc,
                                         const FreeNodeSet& free_nodes,
                                         const std::vector<WeymouthCoef>& coef) {
  const int nn = static_cast<int>(gs.nodes.size());
  const int np = static_cast<int>(gs.pipelines.size());
  const int ref = gs.node_index(gs.reference_node);
  if (static_cast<int>(coef.size()) != np)
    throw GasReductionError("linearization coefficient count mismatch");

  ReductionMatrices red;
  red.n1_pos_of_node.assign(nn, -1);
  red.n2_pos_of_node.assign(nn, -1);
  for (int n = 0; n < nn; ++n) {
    if (n == ref || free_nodes.contains(n)) {
      red.n1_pos_of_node[n] = static_cast<int>(red.n1.size());
      red.n1.push_back(n);
    } else {
      red.n2_pos_of_node[n] = static_cast<int>(red.n2.size());
      red.n2.push_back(n);
    }
  }
  if (static_cast<int>(red.n2.size()) != np)
    throw GasReductionError("non-free pressure count does not match pipeline count");

  {
    LuFactor lu(inc.edges_red);
    if (lu.singular()) throw GasReductionError("B^P' singular; inconsistent tree");
    red.q_edges = lu.inverse();
  }
  const int ne = static_cast<int>(red.q_edges.rows());
  red.q_pipe = Matrix(np, red.q_edges.cols());
  red.q_comp = Matrix(ne - np, red.q_edges.cols());
  for (int e = 0; e < ne; ++e)
    for (std::size_t j = 0; j < red.q_edges.cols(); ++j) {
      if (e < np)
        red.q_pipe(e, j) = red.q_edges(e, j);
      else
        red.q_comp(e - np, j) = red.q_edges(e, j);
    }

  red.free_cols = Matrix(np, red.n1.size());
  Matrix bn(np, red.n2.size());
  for (int l = 0; l < np; ++l) {
    const int m = gs.node_index(gs.pipelines[l].from);
    const int n = gs.node_index(gs.pipelines[l].to);
    auto put = [&](int node, double v) {
      if (red.n1_pos_of_node[node] >= 0)
        red.free_cols(l, red.n1_pos_of_node[node]) += v;
      else
        bn(l, red.n2_pos_of_node[node]) += v;
    };
    put(m, coef[l].k_m);
    put(n, -coef[l].k_n);
  }
  LuFactor lun(bn);
  if (lun.singular())
    throw GasReductionError(
        "B^N singular: remaining pressures not determined by free-node pressures");
  red.q_n = lun.inverse();
  red.q_np = red.q_n * red.q_pipe;
  red.q_nf = red.q_n * red.free_cols;

  // inverse sanity at 1e-10
  auto check_identity = [](const Matrix& prod, const char* what) {
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j) {
        const double want = i == j ? 1.0 : 0.0;
        if (std::fabs(prod(i, j) - want) > 1e-10)
          throw GasReductionError(std::string("inverse verification failed for ") + what);
      }
  };
  check_identity(red.q_edges * inc.edges_red, "B^P'");
  check_identity(red.q_n * bn, "B^N");
  return red;
}

}  // namespace iegs
