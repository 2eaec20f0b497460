#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "iegs/ldr.hpp"
#include "iegs/lp.hpp"
#include "iegs/scenario.hpp"

namespace iegs {

// which thermal rows can actually bind, keyed by their row names
struct ScreenResult {
  std::set<std::string> keep;
  std::map<std::string, std::pair<double, double>> range;  // line_t#_s# -> [min,max] flow
  int total = 0;
  int kept = 0;
};

// Relaxed flow range per (line, period, scenario): every unit may run
// anywhere in [0, cap], wind anywhere in its ball, only the system balance
// ties them. A row whose relaxed extreme cannot cross the limit is dropped.
inline ScreenResult screen_thermal(const IegsNetwork& net, const Ptdf& ptdf,
                                   const ScenarioSet& sc, double tol = 1e-9) {
  const auto& pw = net.power;
  const int ng = static_cast<int>(pw.generators.size());
  const int nw = static_cast<int>(pw.wind_farms.size());
  ScreenResult out;
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t) {
      const auto ball = ball_of(sc, pw, t, s);
      for (std::size_t l = 0; l < pw.lines.size(); ++l) {
        auto flow_extreme = [&](double sign) {
          LpProblem p;
          std::vector<int> pg(ng), pwv(nw), dp(nw), dm(nw);
          for (int g = 0; g < ng; ++g)
            pg[g] = p.add_var(0.0, pw.generators[g].output_max,
                              sign * ptdf.beta(l, pw.bus_index(pw.generators[g].bus)));
          std::vector<std::pair<int, double>> budget;
          for (int w = 0; w < nw; ++w) {
            pwv[w] = p.add_var(ball.box_min[w], ball.box_max[w],
                               sign * ptdf.beta(l, pw.bus_index(pw.wind_farms[w].bus)));
            dp[w] = p.add_var(0.0, kInf, 0.0);
            dm[w] = p.add_var(0.0, kInf, 0.0);
            p.add_row({{pwv[w], 1.0}, {dp[w], -1.0}, {dm[w], 1.0}}, 'E', ball.center[w]);
            budget.emplace_back(dp[w], 1.0);
            budget.emplace_back(dm[w], 1.0);
          }
          p.add_row(budget, 'L', ball.radius);
          std::vector<std::pair<int, double>> bal;
          for (int g = 0; g < ng; ++g) bal.emplace_back(pg[g], 1.0);
          for (int w = 0; w < nw; ++w) bal.emplace_back(pwv[w], 1.0);
          p.add_row(bal, 'E', pw.total_load(t));
          const auto sol = solve_lp(p);
          if (sol.status != LpStatus::Optimal)
            throw LdrError("screening subproblem not optimal for line " + pw.lines[l].id);
          double shed = 0.0;
          for (std::size_t b = 0; b < pw.buses.size(); ++b)
            shed += ptdf.beta(l, b) * pw.load_at(static_cast<int>(b), t);
          return sign * sol.objective - shed;
        };
        const std::string ts =
            "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1);
        const double lim = pw.lines[l].thermal_limit;
        out.total += 2;
        const double fmax = flow_extreme(-1.0);  // maximize by minimizing the negation
        const double fmin = flow_extreme(1.0);
        out.range[pw.lines[l].id + ts] = {fmin, fmax};
        if (fmax > lim + tol) {
          out.keep.insert("thermal_" + pw.lines[l].id + ts + "_pos");
          ++out.kept;
        }
        if (fmin < -lim - tol) {
          out.keep.insert("thermal_" + pw.lines[l].id + ts + "_neg");
          ++out.kept;
        }
      }
    }
  return out;
}

struct ReducedModel {
  VarTable vars;
  std::vector<ModelRow> fixed;   // non-robust, after instantiating sum extremes
  std::vector<ModelRow> robust;  // surviving thermal rows, still uncertain
  LdrObjective objective;
  std::vector<std::vector<SumExtremes>> extremes;  // [s][t]
  int instantiated = 0, deduped = 0, screened_out = 0;
};

struct ReduceOptions {
  const ScreenResult* screen = nullptr;  // null disables elimination
  double dedup_tol = 1e-12;
};

inline ReducedModel reduce(const LdrModel& model, const IegsNetwork& net,
                           const ScenarioSet& sc, const ReduceOptions& opts = {}) {
  ReducedModel out;
  out.vars = model.vars;
  out.objective = model.objective;
  out.extremes.resize(sc.num_scenarios);
  for (int s = 0; s < sc.num_scenarios; ++s)
    for (int t = 0; t < sc.horizon; ++t)
      out.extremes[s].push_back(sum_extremes(ball_of(sc, net.power, t, s)));

  for (const auto& row : model.rows) {
    switch (row.kind) {
      case RowKind::NonRobust:
        out.fixed.push_back(row);
        break;
      case RowKind::RobustFull:
        if (opts.screen && !opts.screen->keep.count(row.name)) {
          ++out.screened_out;
          break;
        }
        out.robust.push_back(row);
        break;
      case RowKind::RobustSum: {
        const auto& ext = out.extremes[row.s][row.t];
        std::vector<std::pair<double, std::string>> sig{{ext.sigma_max, "hi"}};
        if (std::fabs(ext.sigma_max - ext.sigma_min) > opts.dedup_tol)
          sig.emplace_back(ext.sigma_min, "lo");
        else
          ++out.deduped;
        std::vector<std::pair<double, std::string>> prev{{0.0, ""}};
        if (!row.sigma_prev.terms.empty()) {
          const auto& pext = out.extremes[row.s][row.t - 1];
          prev = {{pext.sigma_max, "hi"}};
          if (std::fabs(pext.sigma_max - pext.sigma_min) > opts.dedup_tol)
            prev.emplace_back(pext.sigma_min, "lo");
          else
            ++out.deduped;
        }
        for (const auto& [sv, stag] : sig)
          for (const auto& [pv, ptag] : prev) {
            ModelRow inst;
            inst.name = row.name + "@" + stag + (ptag.empty() ? "" : "_" + ptag);
            inst.t = row.t;
            inst.s = row.s;
            inst.sense = row.sense;
            inst.constant = row.constant;
            inst.constant.add(row.sigma, sv);
            inst.constant.add(row.sigma_prev, pv);
            inst.constant.compress();
            out.fixed.push_back(std::move(inst));
            ++out.instantiated;
          }
        break;
      }
    }
  }
  return out;
}

}  // namespace iegs
