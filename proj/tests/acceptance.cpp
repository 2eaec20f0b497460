// Release gate: ten end-to-end checks over the bundled fixtures, one verdict
// line each. Exit status is nonzero if any check fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iegs/evaluation.hpp"
#include "iegs/mps.hpp"
#include "iegs/pipeline.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must point at the bundled fixture directory"
#endif
#ifndef IEGS_CLI_PATH
#error "IEGS_CLI_PATH must point at the command line binary"
#endif

using namespace iegs;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++failures;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  std::string name;
  IegsNetwork net;
  ScenarioSet sc;
};

Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  const std::string dir = std::string(FIXTURE_DIR) + "/" + name;
  f.net = load_network_text(slurp(dir + "/network.json"));
  IngestOptions opts;
  f.sc = ingest_samples(slurp(dir + "/samples.csv"), f.net, opts);
  return f;
}

// one gas-fired unit on one bus: the balance identity pins the whole rule,
// so the affine-rule optimum meets the exact-recourse optimum at zero budget
IegsNetwork single_unit_net() {
  IegsNetwork net;
  auto& pw = net.power;
  pw.buses = {"b1"};
  pw.reference_bus = "b1";
  Generator gasg{"g1", "b1", GenKind::GasFired, 0.0,   2.0,   10.0, 4.0,
                 0.0,  80.0, 100.0,             100.0, 100.0, 100.0, 1, 1};
  pw.generators = {gasg};
  pw.wind_farms = {{"w1", "b1", 0.0, 40.0}};
  pw.loads["b1"] = {50.0, 60.0};
  auto& gs = net.gas;
  gs.nodes = {{"n1", 30.0, 80.0}, {"n2", 30.0, 80.0}};
  gs.reference_node = "n1";
  gs.pipelines = {{"p1", "n1", "n2", 5.0, 300.0}};
  gs.wells = {{"wl1", "n1", 0.0, 500.0, 2.0}};
  gs.loads["n2"] = {30.0, 30.0};
  net.coupling["g1"] = {"n2", 2.0};
  net.horizon = 2;
  return net;
}

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max(1.0, std::fabs(b));
}

// ---------------------------------------------------------------------------

void criterion1(const std::vector<Fixture>& fixtures) {
  bool pass = true;
  std::string detail = "dual vs generation oracle:";
  for (const auto& f : fixtures) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double eps : {0.0, 0.05}) {
      ScenarioSet swept = f.sc;
      swept.set_budget(eps);
      const auto r = solve_pipeline(f.net, swept);
      if (r.sol.milp.status != LpStatus::Optimal) {
        pass = false;
        detail += " " + f.name + ":not-optimal";
        continue;
      }
      const auto cg = constraint_generation(r.red, f.net, swept);
      if (!cg.converged) pass = false;
      worst = std::max(worst, rel_err(r.objective(), cg.objective));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (worst > 1e-5 || secs >= 300.0) pass = false;
    detail += " " + f.name + " relerr " + num(worst) + " (" + num(secs) + "s)";
  }
  verdict(1, pass, detail);
}

void criterion2(const std::vector<Fixture>& fixtures) {
  bool pass = true;
  std::string detail = "zero-budget vs scenario-mean reference:";
  for (const auto& f : fixtures) {
    ScenarioSet zero = f.sc;
    zero.set_budget(0.0);
    const auto r = solve_pipeline(f.net, zero);
    const auto lin = r.lin;
    const auto exact = solve_exact_saa(f.net, r.ptdf, zero, lin);
    const double err = rel_err(r.objective(), exact.objective);
    if (r.sol.milp.status != LpStatus::Optimal || err > 1e-6) pass = false;
    detail += " " + f.name + " relerr " + num(err);
  }
  verdict(2, pass, detail);
}

// exact reference for one-farm single-scenario instances: the ball is an
// interval, so robust rows and stage maxima are enforced at its two endpoints
double endpoint_reference(const IegsNetwork& net, const ScenarioSet& sc,
                          const ReducedModel& red) {
  const auto& vt = red.vars;
  LpProblem lp;
  for (int j = 0; j < vt.num_vars(); ++j) lp.add_var(vt.lb[j], vt.ub[j], 0.0, vt.names[j]);
  for (const auto& row : red.fixed)
    lp.add_row(row.constant.terms, row.sense, -row.constant.offset, row.name);
  const double share = 1.0 / sc.num_scenarios;
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t) {
      const auto ball = ball_of(sc, net.power, t, s);
      const double lo = std::max(ball.box_min[0], ball.center[0] - ball.radius);
      const double hi = std::min(ball.box_max[0], ball.center[0] + ball.radius);
      const int epi = lp.add_var(-kInf, kInf, share, "epi");
      for (double pt : {lo, hi}) {
        LinExpr gap;
        gap.add(epi, 1.0);
        gap.add(red.objective.stage[s][t], -1.0);
        gap.add(red.objective.stage_sigma[s][t], -pt);
        gap.compress();
        lp.add_row(gap.terms, 'G', -gap.offset);
      }
      for (const auto& row : red.robust) {
        if (row.t != t || row.s != s) continue;
        for (double pt : {lo, hi}) {
          LinExpr body = row.constant;
          body.add(row.sigma, pt);
          body.offset += row.farm[0] * pt;
          body.compress();
          lp.add_row(body.terms, row.sense, -body.offset, row.name + "@ref");
        }
      }
    }
  for (int t = 0; t < vt.T; ++t)
    for (std::size_t g = 0; g < net.power.generators.size(); ++g) {
      lp.obj[vt.x[t][g]] += net.power.generators[g].no_load_cost;
      lp.obj[vt.u[t][g]] += net.power.generators[g].startup_cost;
      lp.obj[vt.v[t][g]] += net.power.generators[g].shutdown_cost;
    }
  const auto sol = solve_milp(lp, vt.binaries);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("endpoint reference not optimal");
  return sol.objective;
}

void criterion3(const Fixture& golden) {
  ScenarioSet one;
  one.horizon = golden.sc.horizon;
  one.num_scenarios = 1;
  one.num_farms = golden.sc.num_farms;
  one.samples = {golden.sc.samples[0]};
  one.budgets = {golden.sc.budgets[0]};
  one.radius_offset = {golden.sc.radius_offset[0]};
  bool pass = true;
  std::string detail = "single-scenario robust reference:";
  for (double eps : {0.02, 0.1}) {
    ScenarioSet swept = one;
    swept.set_budget(eps);
    const auto r = solve_pipeline(golden.net, swept);
    const double ref = endpoint_reference(golden.net, swept, r.red);
    const double err = rel_err(r.objective(), ref);
    if (r.sol.milp.status != LpStatus::Optimal || err > 1e-6) pass = false;
    detail += " eps " + num(eps) + " relerr " + num(err);
  }
  verdict(3, pass, detail);
}

void criterion4(const Fixture& golden) {
  bool pass = true;
  std::string detail;
  {
    const auto net = single_unit_net();
    ScenarioSet sc;
    sc.horizon = 2;
    sc.num_scenarios = 2;
    sc.num_farms = 1;
    sc.samples = {{{10.0}, {12.0}}, {{12.0}, {14.0}}};
    sc.budgets.assign(2, {0.0, 0.0});
    sc.radius_offset.assign(2, {0.0, 0.0});
    const auto curve = gap_curve(net, sc, {0.0, 0.001, 0.01, 0.05});
    double prev = -kInf;
    for (const auto& pt : curve.points) {
      if (pt.objective < curve.exact_reference - 1e-9) pass = false;
      if (pt.objective < prev - 1e-9) pass = false;
      prev = pt.objective;
    }
    const double gap0 = curve.points[0].objective - curve.exact_reference;
    const double gap_small = curve.points[1].objective - curve.exact_reference;
    const double gap_mid = curve.points[2].objective - curve.exact_reference;
    if (std::fabs(gap0) > 1e-9) pass = false;
    // trend: the bound tightens at least linearly on the way down to eps=0
    if (gap_small > 10.0 * std::fabs(gap0) + 0.2 * gap_mid) pass = false;
    detail = "one-unit gap(0) " + num(gap0) + " gap(0.001) " + num(gap_small);
  }
  {
    const auto curve = gap_curve(golden.net, golden.sc, {0.0, 0.01, 0.05});
    double prev = -kInf;
    for (const auto& pt : curve.points) {
      if (pt.objective < curve.exact_reference - 1e-7) pass = false;
      if (pt.objective < prev - 1e-7) pass = false;
      prev = pt.objective;
    }
    detail += "; golden gap(0) " + num(curve.points[0].objective - curve.exact_reference);
  }
  verdict(4, pass, detail);
}

void criterion5(const std::vector<Fixture>& fixtures) {
  bool pass = true;
  std::string detail = "screen on/off and per-row worst case:";
  for (const auto& f : fixtures) {
    ScenarioSet swept = f.sc;
    swept.set_budget(0.05);
    PipelineOptions on, off;
    off.screen = false;
    const auto ron = solve_pipeline(f.net, swept, on);
    const auto roff = solve_pipeline(f.net, swept, off);
    const double err = rel_err(ron.objective(), roff.objective());
    const auto audit = audit_reduction(ron.model, ron.red, f.net, swept, ron.x());
    if (err > 1e-6 || audit.worst_slack < -1e-8) pass = false;
    detail += " " + f.name + " relerr " + num(err) + " slack " + num(audit.worst_slack);
  }
  verdict(5, pass, detail);
}

// random radial gas tree with nc of its edges turned into compressors
GasSystem random_gas_tree(std::mt19937& rng, int nn, int nc) {
  GasSystem gs;
  for (int n = 0; n < nn; ++n) gs.nodes.push_back({"n" + std::to_string(n), 30.0, 80.0});
  gs.reference_node = "n0";
  struct Edge {
    std::string from, to;
  };
  std::vector<Edge> edges;
  for (int n = 1; n < nn; ++n) {
    std::uniform_int_distribution<int> par(0, n - 1);
    edges.push_back({"n" + std::to_string(par(rng)), "n" + std::to_string(n)});
  }
  std::vector<int> order(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) order[e] = static_cast<int>(e);
  std::shuffle(order.begin(), order.end(), rng);
  std::set<int> comp_edges(order.begin(), order.begin() + nc);
  int pi = 0, ci = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (comp_edges.count(static_cast<int>(e)))
      gs.compressors.push_back(
          {"c" + std::to_string(ci++), edges[e].from, edges[e].to, 1.1, 1.8, 100.0});
    else
      gs.pipelines.push_back(
          {"p" + std::to_string(pi++), edges[e].from, edges[e].to, 1.0, 100.0});
  }
  return gs;
}

void criterion6() {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> nn_d(3, 12);
  std::uniform_real_distribution<double> hi(55.0, 79.0), lo(31.0, 50.0), inj_d(-2.0, 2.0),
      pi_d(40.0, 70.0);
  bool pass = true;
  double worst = 0.0;
  int count_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nn = nn_d(rng);
    std::uniform_int_distribution<int> nc_d(0, std::min(3, nn - 2));
    const int nc = nc_d(rng);
    const auto gs = random_gas_tree(rng, nn, nc);
    const auto free_nodes = locate_free_nodes(gs);
    if (static_cast<int>(free_nodes.nodes.size()) != nc) ++count_bad;

    std::vector<WeymouthCoef> coef;
    for (const auto& pl : gs.pipelines) {
      WeymouthCoef k;
      k.pi_m = hi(rng);
      k.pi_n = lo(rng);
      std::tie(k.k_m, k.k_n) = linearize_weymouth(pl.weymouth, k.pi_m, k.pi_n);
      coef.push_back(k);
    }
    GasIncidence inc = build_gas_incidence(gs, {}, PowerSystem{});
    const auto red = build_reduction(gs, inc, free_nodes, coef);

    // random reduced injections and free-side pressures
    const int n_inj = static_cast<int>(inc.edges_red.rows());
    std::vector<double> inj_red(n_inj);
    for (auto& v : inj_red) v = inj_d(rng);
    std::vector<double> pi_n1(red.n1.size());
    for (auto& v : pi_n1) v = pi_d(rng);

    // reconstruction through the reduction matrices
    const int ne = gs.num_edges();
    const int np = static_cast<int>(gs.pipelines.size());
    std::vector<double> flows(ne, 0.0);
    for (int e = 0; e < ne; ++e)
      for (int k = 0; k < n_inj; ++k) flows[e] += red.q_edges(e, k) * inj_red[k];
    std::vector<double> pi_n2(red.n2.size(), 0.0);
    for (std::size_t i = 0; i < red.n2.size(); ++i) {
      for (int k = 0; k < n_inj; ++k) pi_n2[i] += red.q_np(i, k) * inj_red[k];
      for (std::size_t k = 0; k < red.n1.size(); ++k)
        pi_n2[i] -= red.q_nf(i, k) * pi_n1[k];
    }

    // direct linear-system oracle over [flows; non-free pressures]
    const int m = n_inj + np;
    Matrix A(m, m);
    std::vector<double> rhs(m, 0.0);
    for (int i = 0; i < n_inj; ++i) {
      for (int e = 0; e < ne; ++e) A(i, e) = inc.edges_red(i, e);
      rhs[i] = inj_red[i];
    }
    for (int l = 0; l < np; ++l) {
      const int r = n_inj + l;
      A(r, l) = 1.0;
      const int nm = gs.node_index(gs.pipelines[l].from);
      const int nn2 = gs.node_index(gs.pipelines[l].to);
      auto place = [&](int nd, double v) {
        if (red.n2_pos_of_node[nd] >= 0)
          A(r, ne + red.n2_pos_of_node[nd]) += v;
        else
          rhs[r] -= v * pi_n1[red.n1_pos_of_node[nd]];
      };
      place(nm, -coef[l].k_m);
      place(nn2, coef[l].k_n);
    }
    LuFactor lu(std::move(A));
    if (lu.singular()) {
      ++count_bad;
      continue;
    }
    const auto sol = lu.solve(rhs);
    for (int e = 0; e < ne; ++e) worst = std::max(worst, std::fabs(flows[e] - sol[e]));
    for (std::size_t i = 0; i < red.n2.size(); ++i)
      worst = std::max(worst, std::fabs(pi_n2[i] - sol[ne + i]));
  }
  if (count_bad > 0 || worst > 1e-9) pass = false;
  verdict(6, pass,
          "100 random trees, count mismatches " + std::to_string(count_bad) +
              ", worst reconstruction error " + num(worst));
}

void criterion7(const std::vector<Fixture>& fixtures) {
  bool pass = true;
  double worst_tangency = 0.0, worst_endtoend = 0.0;
  for (const auto& f : fixtures) {
    ScenarioSet swept = f.sc;
    swept.set_budget(0.05);
    const auto r = solve_pipeline(f.net, swept);
    for (std::size_t s = 0; s < r.lin.coef.size(); ++s)
      for (std::size_t t = 0; t < r.lin.coef[s].size(); ++t)
        for (std::size_t l = 0; l < r.lin.coef[s][t].size(); ++l) {
          const auto& c = r.lin.coef[s][t][l];
          const double w = f.net.gas.pipelines[l].weymouth;
          const double truth = w * std::sqrt(c.pi_m * c.pi_m - c.pi_n * c.pi_n);
          worst_tangency = std::max(
              worst_tangency,
              std::fabs(c.k_m * c.pi_m - c.k_n * c.pi_n - truth) / std::max(1.0, truth));
        }
    const auto res = pipeline_residuals(f.net, r, swept);
    worst_endtoend = std::max(worst_endtoend, res.max_residual);
    if (!res.ordering_violations.empty()) pass = false;
  }
  if (worst_tangency > 1e-12 || worst_endtoend > 0.01) pass = false;
  verdict(7, pass,
          "tangency " + num(worst_tangency) + ", end-to-end residual " + num(worst_endtoend));
}

void criterion8(const Fixture& golden) {
  bool pass = true;
  const auto draws = synthetic_draws(golden.net, golden.sc, 100, 42);
  double prev = -1.0;
  std::string detail = "train/test rates:";
  for (double eps : {0.0, 0.01, 0.05}) {
    ScenarioSet swept = golden.sc;
    swept.set_budget(eps);
    const auto r = solve_pipeline(golden.net, swept);
    const auto uc = extract_uc(r.model.vars, r.x());
    int train_ok = 0;
    for (int s = 0; s < swept.num_scenarios; ++s)
      if (!accommodates(golden.net, r.ptdf, uc, r.lin.coef[s], swept.samples[s])) ++train_ok;
    if (train_ok != swept.num_scenarios) pass = false;
    const auto oos = out_of_sample(golden.net, r.ptdf, uc, swept, r.lin, draws);
    if (oos.rate < prev - 1e-12) pass = false;
    prev = oos.rate;
    detail += " eps " + num(eps) + " train " + std::to_string(train_ok) + "/" +
              std::to_string(swept.num_scenarios) + " test " + num(oos.rate);
  }
  verdict(8, pass, detail);
}

// test-only oracle: single-phase textbook tableau for
//   min c x  s.t.  A x <= b (b >= 0), 0 <= x <= u
struct NaiveResult {
  bool optimal = false;
  double obj = 0.0;
};

NaiveResult naive_tableau(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& u) {
  const int n = static_cast<int>(c.size());
  int m = static_cast<int>(A.size());
  std::vector<std::vector<double>> rows = A;
  std::vector<double> rhs = b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> r(n, 0.0);
    r[j] = 1.0;
    rows.push_back(r);
    rhs.push_back(u[j]);
    ++m;
  }
  const int cols = n + m;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) T[i][j] = rows[i][j];
    T[i][n + i] = 1.0;
    T[i][cols] = rhs[i];
  }
  for (int j = 0; j < n; ++j) T[m][j] = c[j];
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (T[m][j] < -1e-9) {
        enter = j;
        break;
      }
    if (enter < 0) return {true, -T[m][cols]};
    int leave = -1;
    double best = 1e300;
    for (int i = 0; i < m; ++i)
      if (T[i][enter] > 1e-9) {
        const double r = T[i][cols] / T[i][enter];
        if (r < best - 1e-12 ||
            (std::fabs(r - best) <= 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
          best = r;
          leave = i;
        }
      }
    if (leave < 0) return {};
    const double pv = T[leave][enter];
    for (int j = 0; j <= cols; ++j) T[leave][j] /= pv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  return {};
}

void criterion9() {
  bool pass = true;
  int lp_bad = 0, milp_bad = 0;
  {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_int_distribution<int> nd(2, 12), md(1, 10);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = nd(rng), m = md(rng);
      std::vector<double> c(n), u(n), b(m);
      std::vector<std::vector<double>> A(m, std::vector<double>(n));
      for (auto& v : c) v = coef(rng);
      for (auto& v : u) v = 1.0 + std::fabs(coef(rng));
      for (auto& v : b) v = std::fabs(coef(rng));
      for (auto& row : A)
        for (auto& v : row) v = coef(rng);
      const auto oracle = naive_tableau(c, A, b, u);
      LpProblem p;
      for (int j = 0; j < n; ++j) p.add_var(0.0, u[j], c[j]);
      for (int i = 0; i < m; ++i) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j)
          if (A[i][j] != 0.0) row.emplace_back(j, A[i][j]);
        p.add_row(row, 'L', b[i]);
      }
      const auto sol = solve_lp(p);
      if (!oracle.optimal || sol.status != LpStatus::Optimal ||
          std::fabs(sol.objective - oracle.obj) > 1e-7)
        ++lp_bad;
    }
  }
  {
    std::mt19937 rng(7701);
    std::uniform_real_distribution<double> coef(0.1, 5.0);
    std::uniform_int_distribution<int> nd(4, 12);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = nd(rng);
      std::vector<double> value(n), weight(n);
      for (auto& v : value) v = coef(rng);
      for (auto& v : weight) v = coef(rng);
      double cap = 0.0;
      for (double w : weight) cap += w;
      cap *= 0.4;
      double best = 0.0;
      for (int mask = 0; mask < (1 << n); ++mask) {
        double wsum = 0.0, vsum = 0.0;
        for (int j = 0; j < n; ++j)
          if (mask & (1 << j)) {
            wsum += weight[j];
            vsum += value[j];
          }
        if (wsum <= cap) best = std::max(best, vsum);
      }
      LpProblem p;
      std::vector<int> bins;
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j) {
        bins.push_back(p.add_var(0.0, 1.0, -value[j]));
        row.emplace_back(bins.back(), weight[j]);
      }
      p.add_row(row, 'L', cap);
      const auto sol = solve_milp(p, bins);
      if (sol.status != LpStatus::Optimal || std::fabs(-sol.objective - best) > 1e-6)
        ++milp_bad;
    }
  }
  bool mps_ok = true;
  {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    LpProblem p;
    std::vector<int> bins;
    for (int j = 0; j < 6; ++j)
      bins.push_back(p.add_var(0.0, 1.0, coef(rng), "b" + std::to_string(j)));
    const int y = p.add_var(-kInf, kInf, 1.0, "y");
    const int z = p.add_var(-1.0, 4.0, -0.5, "z");
    for (int i = 0; i < 4; ++i) {
      std::vector<std::pair<int, double>> row{{y, coef(rng)}, {z, coef(rng)}};
      for (int j = 0; j < 6; ++j) row.emplace_back(j, coef(rng));
      p.add_row(row, i % 2 ? 'L' : 'G', coef(rng), "row_" + std::to_string(i));
    }
    p.add_row({{y, 1.0}, {z, 1.0}}, 'E', 1.0, "tie");
    const auto doc = write_mps(p, bins);
    const auto back = read_mps(doc.mps);
    const auto orig = solve_milp(p, bins);
    const auto rt = solve_milp(back.lp, back.binaries);
    if (orig.status != rt.status ||
        (orig.status == LpStatus::Optimal &&
         std::fabs(orig.objective - rt.objective) > 1e-9))
      mps_ok = false;
  }
  if (lp_bad > 0 || milp_bad > 0 || !mps_ok) pass = false;
  verdict(9, pass,
          "LP oracle mismatches " + std::to_string(lp_bad) + "/200, enumeration mismatches " +
              std::to_string(milp_bad) + "/50, MPS round trip " + (mps_ok ? "ok" : "bad"));
}

bool same_tree_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::string> fa, fb;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a))
    if (e.is_regular_file()) fa.push_back(std::filesystem::relative(e.path(), a).string());
  for (const auto& e : std::filesystem::recursive_directory_iterator(b))
    if (e.is_regular_file()) fb.push_back(std::filesystem::relative(e.path(), b).string());
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb || fa.empty()) return false;
  for (const auto& rel : fa)
    if (slurp((a / rel).string()) != slurp((b / rel).string())) return false;
  return true;
}

void criterion10() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "iegs-acceptance";
  std::error_code ec;
  fs::remove_all(base, ec);
  fs::create_directories(base);
  const std::string cli = IEGS_CLI_PATH;
  const std::string golden = std::string(FIXTURE_DIR) + "/golden";
  struct Cmd {
    std::string name, args;
  };
  const std::vector<Cmd> cmds = {
      {"gen", "gen --buses 3 --gas-nodes 3 --compressors 1 --seed 7"},
      {"solve", "solve --network " + golden + "/network.json --samples " + golden +
                    "/samples.csv --budget 0.05 --dump-model --dump-screen "
                    "--dump-gas-reduction"},
      {"compare", "compare --network " + golden + "/network.json --samples " + golden +
                      "/samples.csv --eps-grid 0 0.05 --draws 10 --seed 3"},
  };
  bool pass = true;
  std::string detail = "byte-identical reruns:";
  for (const auto& cmd : cmds) {
    bool ok = true;
    for (const char* run : {"a", "b"}) {
      const fs::path dir = base / (cmd.name + std::string("-") + run);
      const std::string full =
          cli + " " + cmd.args + " --out " + dir.string() + " > /dev/null 2>&1";
      if (std::system(full.c_str()) != 0) ok = false;
    }
    if (ok) ok = same_tree_bytes(base / (cmd.name + "-a"), base / (cmd.name + "-b"));
    if (!ok) pass = false;
    detail += " " + cmd.name + (ok ? " ok" : " BAD");
  }
  verdict(10, pass, detail);
}

}  // namespace

int main() {
  std::vector<Fixture> fixtures;
  for (const char* name : {"golden", "medium", "large"}) fixtures.push_back(load_fixture(name));
  const auto& golden = fixtures[0];
  try {
    criterion1(fixtures);
    criterion2(fixtures);
    criterion3(golden);
    criterion4(golden);
    criterion5(fixtures);
    criterion6();
    criterion7(fixtures);
    criterion8(golden);
    criterion9();
    criterion10();
  } catch (const std::exception& e) {
    std::printf("aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
