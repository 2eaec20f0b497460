#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "iegs/network.hpp"

namespace iegs {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wind samples indexed by (scenario, period, farm) plus per-(t,s) budgets.
struct ScenarioSet {
  int horizon = 0;
  int num_scenarios = 0;
  int num_farms = 0;
  std::vector<std::vector<std::vector<double>>> samples;  // [s][t][w]
  std::vector<std::vector<double>> budgets;               // epsilon[s][t]
  std::vector<std::vector<double>> radius_offset;         // absolute add-on, [s][t]

  double sample(int s, int t, int w) const { return samples[s][t][w]; }

  double sample_sum(int s, int t) const {
    double sum = 0.0;
    for (double v : samples[s][t]) sum += v;
    return sum;
  }

  void set_budget(double eps) {
    for (auto& row : budgets)
      for (auto& v : row) v = eps;
  }
};

struct UncertaintyBall {
  std::vector<double> center;
  std::vector<double> box_min, box_max;
  double radius = 0.0;

  int dim() const { return static_cast<int>(center.size()); }

  double center_sum() const {
    double sum = 0.0;
    for (double v : center) sum += v;
    return sum;
  }
};

struct SumExtremes {
  std::vector<double> argmax, argmin;
  double sigma_max = 0.0, sigma_min = 0.0;
};

inline UncertaintyBall ball_of(const ScenarioSet& sc, const PowerSystem& pw, int t, int s) {
  UncertaintyBall ball;
  ball.center = sc.samples[s][t];
  for (const auto& w : pw.wind_farms) {
    ball.box_min.push_back(w.output_min);
    ball.box_max.push_back(w.output_max);
  }
  double center_sum = 0.0;
  for (std::size_t w = 0; w < ball.center.size(); ++w) {
    center_sum += ball.center[w];
    if (ball.center[w] < ball.box_min[w] - 1e-9 || ball.center[w] > ball.box_max[w] + 1e-9)
      throw ScenarioError("sample center outside farm box for farm index " + std::to_string(w));
  }
  ball.radius = sc.budgets[s][t] * center_sum + sc.radius_offset[s][t];
  if (ball.radius < 0.0) throw ScenarioError("negative uncertainty radius");
  return ball;
}

inline bool membership(const UncertaintyBall& ball, const std::vector<double>& p,
                       double tol = 1e-9) {
  if (p.size() != ball.center.size())
    throw ScenarioError("membership: dimension mismatch");
  double dev = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] < ball.box_min[w] - tol || p[w] > ball.box_max[w] + tol) return false;
    dev += std::fabs(p[w] - ball.center[w]);
  }
  return dev <= ball.radius + tol;
}

// Extreme points of the farm-output sum over the 1-norm ball; budget is
// distributed greedily in ascending farm order so runs are reproducible.
inline SumExtremes sum_extremes(const UncertaintyBall& ball) {
  SumExtremes ext;
  ext.argmax = ball.center;
  ext.argmin = ball.center;
  double up = ball.radius, down = ball.radius;
  for (int w = 0; w < ball.dim(); ++w) {
    const double raise = std::min(up, ball.box_max[w] - ball.center[w]);
    ext.argmax[w] += raise;
    up -= raise;
    const double lower = std::min(down, ball.center[w] - ball.box_min[w]);
    ext.argmin[w] -= lower;
    down -= lower;
  }
  for (int w = 0; w < ball.dim(); ++w) {
    ext.sigma_max += ext.argmax[w];
    ext.sigma_min += ext.argmin[w];
  }
  if (!membership(ball, ext.argmax) || !membership(ball, ext.argmin))
    throw ScenarioError("sum extremes left the uncertainty set");
  return ext;
}

struct IngestOptions {
  double scalar_budget = 0.0;
  bool clip = false;
};

// CSV columns: scenario,period,farm,value (scenario and period 1-based).
inline ScenarioSet ingest_samples(const std::string& csv, const IegsNetwork& net,
                                  const IngestOptions& opts,
                                  std::vector<std::string>* warnings = nullptr) {
  const auto& farms = net.power.wind_farms;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw ScenarioError("empty samples file");
  int max_s = 0;
  struct Cell {
    int s, t, w;
    double v;
  };
  std::vector<Cell> cells;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream f(line);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(f, tok, ',')) parts.push_back(tok);
    if (parts.size() != 4)
      throw ScenarioError("samples line " + std::to_string(lineno) + ": expected 4 columns");
    Cell c;
    c.s = std::stoi(parts[0]) - 1;
    c.t = std::stoi(parts[1]) - 1;
    c.v = std::stod(parts[3]);
    c.w = -1;
    for (std::size_t w = 0; w < farms.size(); ++w)
      if (farms[w].id == parts[2]) c.w = static_cast<int>(w);
    if (c.w < 0) throw ScenarioError("unknown farm id '" + parts[2] + "'");
    if (c.s < 0 || c.t < 0 || c.t >= net.horizon)
      throw ScenarioError("samples line " + std::to_string(lineno) + ": scenario/period out of range");
    if (c.v < 0.0)
      throw ScenarioError("negative sample value for farm '" + parts[2] + "' at line " +
                          std::to_string(lineno));
    max_s = std::max(max_s, c.s + 1);
    cells.push_back(c);
  }
  if (max_s == 0) throw ScenarioError("samples file has no data rows");

  ScenarioSet sc;
  sc.horizon = net.horizon;
  sc.num_scenarios = max_s;
  sc.num_farms = static_cast<int>(farms.size());
  sc.samples.assign(max_s, std::vector<std::vector<double>>(
                               net.horizon, std::vector<double>(farms.size(), -1.0)));
  sc.budgets.assign(max_s, std::vector<double>(net.horizon, opts.scalar_budget));
  sc.radius_offset.assign(max_s, std::vector<double>(net.horizon, 0.0));
  for (const auto& c : cells) {
    double v = c.v;
    const auto& farm = farms[c.w];
    if (v < farm.output_min - 1e-12 || v > farm.output_max + 1e-12) {
      if (!opts.clip)
        throw ScenarioError("sample exceeds farm capacity: farm '" + farm.id + "', scenario " +
                            std::to_string(c.s + 1) + ", period " + std::to_string(c.t + 1));
      const double clipped = std::min(std::max(v, farm.output_min), farm.output_max);
      if (warnings)
        warnings->push_back("clipped sample for farm '" + farm.id + "' from " +
                            std::to_string(v) + " to " + std::to_string(clipped));
      v = clipped;
    }
    sc.samples[c.s][c.t][c.w] = v;
  }
  for (int s = 0; s < max_s; ++s)
    for (int t = 0; t < net.horizon; ++t)
      for (int w = 0; w < sc.num_farms; ++w)
        if (sc.samples[s][t][w] < 0.0)
          throw ScenarioError("missing sample cell: scenario " + std::to_string(s + 1) +
                              ", period " + std::to_string(t + 1) + ", farm '" + farms[w].id +
                              "'");
  return sc;
}

}  // namespace iegs
