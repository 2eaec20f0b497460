#pragma once

#include "iegs/deterministic.hpp"
#include "iegs/dual.hpp"
#include "iegs/ldr.hpp"
#include "iegs/reduction.hpp"

namespace iegs {

struct PipelineOptions {
  bool screen = true;
  LinearizationOptions lin;
  BnbOptions bnb;
};

// everything the solve produced, kept around for reports and dumps
struct PipelineResult {
  Ptdf ptdf;
  GasIncidence inc;
  WeymouthLinearization lin;
  ReductionSet rs;
  LdrModel model;
  ScreenResult screen;
  ReducedModel red;
  DualModel dual;
  SroSolution sol;

  double objective() const { return sol.objective; }
  const std::vector<double>& x() const { return sol.milp.x; }
};

inline PipelineResult solve_pipeline(const IegsNetwork& net, const ScenarioSet& sc,
                                     const PipelineOptions& opts = {}) {
  PipelineResult r;
  r.ptdf = compute_ptdf(net.power);
  r.inc = build_gas_incidence(net.gas, net.coupling, net.power);
  r.lin = select_linearization_points(net, r.ptdf, sc, opts.lin);
  r.rs = build_reduction_set(net, r.inc, r.lin);
  r.model = assemble_ldr(net, r.ptdf, r.inc, r.rs, sc.num_scenarios);
  ReduceOptions ro;
  if (opts.screen) {
    r.screen = screen_thermal(net, r.ptdf, sc);
    ro.screen = &r.screen;
  }
  r.red = reduce(r.model, net, sc, ro);
  r.dual = dualize(r.red, net, sc);
  r.sol = solve_dual(r.dual, opts.bnb);
  return r;
}

// commitment schedule recovered from a solved variable vector
inline UcFix extract_uc(const VarTable& vt, const std::vector<double>& x) {
  UcFix uc;
  uc.on.assign(vt.T, std::vector<double>(vt.x[0].size()));
  uc.start = uc.on;
  uc.stop = uc.on;
  for (int t = 0; t < vt.T; ++t)
    for (std::size_t g = 0; g < vt.x[t].size(); ++g) {
      uc.on[t][g] = std::round(x[vt.x[t][g]]);
      uc.start[t][g] = std::round(x[vt.u[t][g]]);
      uc.stop[t][g] = std::round(x[vt.v[t][g]]);
    }
  return uc;
}

}  // namespace iegs
