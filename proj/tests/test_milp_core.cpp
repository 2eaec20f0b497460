#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "iegs/lp.hpp"
#include "iegs/milp.hpp"
#include "iegs/mps.hpp"

using namespace iegs;

namespace {

// Test-only oracle: single-phase textbook tableau for
//   min c x  s.t.  A x <= b (b >= 0), 0 <= x <= u,
// with upper bounds written as explicit rows. Kept deliberately naive and
// independent of the production simplex.
struct NaiveResult {
  bool optimal = false;
  bool unbounded = false;
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
      }  // Bland
    if (enter < 0) {
      NaiveResult res;
      res.optimal = true;
      res.obj = -T[m][cols];
      return res;
    }
    int leave = -1;
    double best = 1e300;
    for (int i = 0; i < m; ++i)
      if (T[i][enter] > 1e-9) {
        const double r = T[i][cols] / T[i][enter];
        if (r < best - 1e-12 || (std::fabs(r - best) <= 1e-12 &&
                                 (leave < 0 || basis[i] < basis[leave]))) {
          best = r;
          leave = i;
        }
      }
    if (leave < 0) {
      NaiveResult res;
      res.unbounded = true;
      return res;
    }
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

}  // namespace

TEST_CASE("solve_lp handles the trivial cases") {
  {
    LpProblem p;
    const int x = p.add_var(0.0, 1.0, -1.0);
    (void)x;
    const auto sol = solve_lp(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.x[0] == Catch::Approx(1.0));
    CHECK(sol.objective == Catch::Approx(-1.0));
  }
  {
    LpProblem p;
    const int x = p.add_var(-kInf, kInf, 0.0);
    p.add_row({{x, 1.0}}, 'G', 2.0);
    p.add_row({{x, 1.0}}, 'L', 1.0);
    const auto sol = solve_lp(p);
    CHECK(sol.status == LpStatus::Infeasible);
    CHECK_FALSE(sol.infeasible_rows.empty());
  }
  {
    LpProblem p;
    const int x = p.add_var(0.0, kInf, -1.0);
    (void)x;
    const auto sol = solve_lp(p);
    CHECK(sol.status == LpStatus::Unbounded);
  }
  {
    // equality row with free variable
    LpProblem p;
    const int x = p.add_var(-kInf, kInf, 1.0);
    const int y = p.add_var(0.0, kInf, 2.0);
    p.add_row({{x, 1.0}, {y, 1.0}}, 'E', 3.0);
    const auto sol = solve_lp(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(3.0));
    CHECK(sol.x[0] == Catch::Approx(3.0));
  }
}

TEST_CASE("solve_lp matches the naive tableau oracle on 200 random LPs") {
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
    REQUIRE(oracle.optimal);  // x = 0 feasible, box keeps it bounded

    LpProblem p;
    for (int j = 0; j < n; ++j) p.add_var(0.0, u[j], c[j]);
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j)
        if (A[i][j] != 0.0) row.emplace_back(j, A[i][j]);
      p.add_row(row, 'L', b[i]);
    }
    const auto sol = solve_lp(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(oracle.obj).margin(1e-7));
    CHECK(sol.duality_gap <= 1e-7 * std::max(1.0, std::fabs(sol.objective)));
    CHECK(p.feasibility_residual(sol.x) <= 1e-7);
  }
}

TEST_CASE("solve_milp basics") {
  {
    LpProblem p;
    const int x1 = p.add_var(0.0, 1.0, -1.0);
    const int x2 = p.add_var(0.0, 1.0, -1.0);
    p.add_row({{x1, 1.0}, {x2, 1.0}}, 'L', 1.5);
    const auto sol = solve_milp(p, {x1, x2});
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(-1.0));
  }
  {
    // totally unimodular: assignment-style rows solve at the root
    LpProblem p;
    std::vector<int> bins;
    for (int j = 0; j < 4; ++j) bins.push_back(p.add_var(0.0, 1.0, j % 2 ? -2.0 : -1.0));
    p.add_row({{bins[0], 1.0}, {bins[1], 1.0}}, 'L', 1.0);
    p.add_row({{bins[2], 1.0}, {bins[3], 1.0}}, 'L', 1.0);
    const auto sol = solve_milp(p, bins);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(-4.0));
    CHECK(sol.nodes == 1);
  }
}

TEST_CASE("solve_milp matches exhaustive enumeration on random knapsacks") {
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
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(-sol.objective == Catch::Approx(best).margin(1e-6));
    for (int j : bins) CHECK(std::fabs(sol.x[j] - std::round(sol.x[j])) <= 1e-6);
  }
}

TEST_CASE("B&B is deterministic") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  LpProblem p;
  std::vector<int> bins;
  for (int j = 0; j < 10; ++j) bins.push_back(p.add_var(0.0, 1.0, coef(rng)));
  for (int i = 0; i < 6; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < 10; ++j) row.emplace_back(j, coef(rng));
    p.add_row(row, 'L', 1.0);
  }
  const auto a = solve_milp(p, bins);
  const auto b = solve_milp(p, bins);
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("write_mps golden single-variable problem") {
  LpProblem p;
  p.add_var(0.0, 2.0, 1.5, "alpha");
  p.add_row({{0, 1.0}}, 'G', 0.5, "lowcap");
  const auto doc = write_mps(p, {}, "TINY");
  const std::string expected =
      "NAME          TINY\n"
      "ROWS\n"
      " N  COST\n"
      " G  lowcap\n"
      "COLUMNS\n"
      "    alpha     COST      1.5\n"
      "    alpha     lowcap    1\n"
      "RHS\n"
      "    RHS       lowcap    0.5\n"
      "BOUNDS\n"
      " UP BND       alpha     2\n"
      "ENDATA\n";
  CHECK(doc.mps == expected);
  CHECK(doc.name_map.empty());
}

TEST_CASE("MPS round trip preserves solve results") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  LpProblem p;
  std::vector<int> bins;
  for (int j = 0; j < 6; ++j) bins.push_back(p.add_var(0.0, 1.0, coef(rng), "b" + std::to_string(j)));
  const int y = p.add_var(-kInf, kInf, 1.0, "free_y");
  const int z = p.add_var(-1.0, 4.0, -0.5, "boxed_variable_with_a_long_name");
  for (int i = 0; i < 4; ++i) {
    std::vector<std::pair<int, double>> row{{y, coef(rng)}, {z, coef(rng)}};
    for (int j = 0; j < 6; ++j) row.emplace_back(j, coef(rng));
    p.add_row(row, i % 2 ? 'L' : 'G', coef(rng), "row_" + std::to_string(i));
  }
  p.add_row({{y, 1.0}, {z, 1.0}}, 'E', 1.0, "tie");

  const auto doc = write_mps(p, bins);
  CHECK(doc.mps.find("'INTORG'") != std::string::npos);
  CHECK(doc.mps.find("'INTEND'") != std::string::npos);
  CHECK(doc.name_map.find("boxed_va") != std::string::npos);

  const auto back = read_mps(doc.mps);
  REQUIRE(back.lp.num_vars() == p.num_vars());
  REQUIRE(back.lp.num_rows() == p.num_rows());
  REQUIRE(back.binaries.size() == bins.size());

  const auto orig = solve_milp(p, bins);
  const auto rt = solve_milp(back.lp, back.binaries);
  REQUIRE(orig.status == rt.status);
  if (orig.status == LpStatus::Optimal) CHECK(orig.objective == Catch::Approx(rt.objective));
}
