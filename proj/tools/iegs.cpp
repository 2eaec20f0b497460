// Command line front end: solve one configuration, compare model variants
// over a budget grid, or generate a random test system.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iegs/evaluation.hpp"
#include "iegs/generator.hpp"
#include "iegs/mps.hpp"
#include "iegs/pipeline.hpp"

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  out << text;
}

// short stable tag mixing the input bytes and run parameters into file names
std::string config_hash(const std::string& text) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%08llx", h & 0xffffffffull);
  return buf;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("IEGS_OUT_DIR")) return env;
  return ".";
}

struct SolveConfig {
  std::string network, samples, mode = "sro", screen = "on", out;
  double budget = 0.0;
  bool clip = false;
  bool dump_model = false, dump_screen = false, dump_gas_reduction = false;
};

struct CompareConfig {
  std::string network, samples, screen = "on", out;
  std::vector<double> eps_grid;
  int draws = 100;
  unsigned seed = 1;
};

struct GenConfig {
  std::string out;
  int buses = 3, gas_nodes = 3, compressors = 1, periods = 4, scenarios = 3;
  unsigned seed = 0;
};

std::string schedule_csv(const iegs::IegsNetwork& net, const iegs::UcFix& uc) {
  std::ostringstream out;
  out << "generator,period,on,start,stop\n";
  for (std::size_t g = 0; g < net.power.generators.size(); ++g)
    for (std::size_t t = 0; t < uc.on.size(); ++t)
      out << net.power.generators[g].id << ',' << t + 1 << ',' << int(uc.on[t][g]) << ','
          << int(uc.start[t][g]) << ',' << int(uc.stop[t][g]) << '\n';
  return out.str();
}

std::string policy_csv(const iegs::IegsNetwork& net, const iegs::PipelineResult& r) {
  const auto& vt = r.model.vars;
  const auto& x = r.x();
  std::ostringstream out;
  out << "kind,id,scenario,period,level,slope\n";
  for (int s = 0; s < vt.S; ++s)
    for (int t = 0; t < vt.T; ++t) {
      for (std::size_t g = 0; g < vt.r[s][t].size(); ++g)
        out << "generator," << net.power.generators[g].id << ',' << s + 1 << ',' << t + 1 << ','
            << num(x[vt.r[s][t][g]]) << ',' << num(x[vt.rc[s][t][g]]) << '\n';
      for (std::size_t w = 0; w < vt.sw[s][t].size(); ++w)
        out << "well," << net.gas.wells[w].id << ',' << s + 1 << ',' << t + 1 << ','
            << num(x[vt.sw[s][t][w]]) << ',' << num(x[vt.swc[s][t][w]]) << '\n';
      const auto& n1 = r.rs.per[s][t].n1;
      for (std::size_t k = 0; k < vt.o[s][t].size(); ++k)
        out << "pressure," << net.gas.nodes[n1[k]].id << ',' << s + 1 << ',' << t + 1 << ','
            << num(x[vt.o[s][t][k]]) << ',' << num(x[vt.oc[s][t][k]]) << '\n';
    }
  return out.str();
}

std::string summary_text(const SolveConfig& cfg, const iegs::IegsNetwork& net,
                         const iegs::ScenarioSet& sc, const iegs::PipelineResult& r) {
  std::ostringstream out;
  out << "mode " << cfg.mode << "\n";
  out << "budget " << num(cfg.budget) << "\n";
  out << "objective " << num(r.objective()) << "\n";
  out << "scenarios " << sc.num_scenarios << "\n";
  out << "periods " << sc.horizon << "\n";
  out << "generators " << net.power.generators.size() << "\n";
  out << "buses " << net.power.buses.size() << "\n";
  out << "gas_nodes " << net.gas.nodes.size() << "\n";
  out << "screen " << cfg.screen << "\n";
  if (cfg.screen == "on")
    out << "thermal_rows_kept " << r.screen.kept << " of " << r.screen.total << "\n";
  out << "linearization_iterations " << r.lin.iterations << "\n";
  out << "linearization_converged " << (r.lin.converged ? "yes" : "no") << "\n";
  out << "milp_vars " << r.dual.lp.num_vars() << "\n";
  out << "milp_rows " << r.dual.lp.num_rows() << "\n";
  out << "milp_binaries " << r.dual.binaries.size() << "\n";
  return out.str();
}

std::string screen_csv(const iegs::ScreenResult& sr) {
  std::ostringstream out;
  out << "row,flow_min,flow_max,kept\n";
  for (const auto& [name, range] : sr.range)
    out << name << ',' << num(range.first) << ',' << num(range.second) << ','
        << (sr.keep.count(name) ? 1 : 0) << '\n';
  return out.str();
}

std::string gas_reduction_text(const iegs::IegsNetwork& net, const iegs::PipelineResult& r) {
  std::ostringstream out;
  out << "free_nodes " << r.rs.free_nodes.nodes.size() << "\n";
  for (int n : r.rs.free_nodes.nodes)
    out << "  " << net.gas.nodes[n].id << " via " << r.rs.free_nodes.created_by.at(n) << "\n";
  out << "fixed_point_iterations " << r.lin.iterations << "\n";
  for (std::size_t i = 0; i < r.lin.fixed_point_history.size(); ++i)
    out << "  iter " << i + 1 << " max_shift " << num(r.lin.fixed_point_history[i]) << "\n";
  out << "tangent_coefficients\n";
  for (std::size_t s = 0; s < r.lin.coef.size(); ++s)
    for (std::size_t t = 0; t < r.lin.coef[s].size(); ++t)
      for (std::size_t l = 0; l < r.lin.coef[s][t].size(); ++l) {
        const auto& c = r.lin.coef[s][t][l];
        out << "  " << net.gas.pipelines[l].id << " s" << s + 1 << " t" << t + 1 << " pi_m "
            << num(c.pi_m) << " pi_n " << num(c.pi_n) << " k_m " << num(c.k_m) << " k_n "
            << num(c.k_n) << "\n";
      }
  return out.str();
}

int run_solve(const SolveConfig& cfg) {
  const auto net = iegs::load_network_text(read_file(cfg.network));
  iegs::IngestOptions iopt;
  iopt.scalar_budget = cfg.budget;
  iopt.clip = cfg.clip;
  std::vector<std::string> warnings;
  auto sc = iegs::ingest_samples(read_file(cfg.samples), net, iopt, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  if (cfg.mode == "saa") {
    sc.set_budget(0.0);
    for (auto& row : sc.radius_offset)
      for (auto& v : row) v = 0.0;
  } else if (cfg.mode == "ro") {
    sc = iegs::build_ro_variant(sc);
  }

  iegs::PipelineOptions opts;
  opts.screen = (cfg.screen == "on");
  const auto r = iegs::solve_pipeline(net, sc, opts);
  if (r.sol.milp.status != iegs::LpStatus::Optimal)
    throw std::runtime_error("master problem not solved to optimality");

  const std::filesystem::path dir = cfg.out.empty() ? default_out_dir() : cfg.out;
  std::filesystem::create_directories(dir);
  const auto uc = iegs::extract_uc(r.model.vars, r.x());
  write_file(dir / "schedule.csv", schedule_csv(net, uc));
  write_file(dir / "policy.csv", policy_csv(net, r));
  write_file(dir / "summary.txt", summary_text(cfg, net, sc, r));
  if (cfg.dump_model) {
    const auto doc = iegs::write_mps(r.dual.lp, r.dual.binaries, "IEGS");
    write_file(dir / "model.mps", doc.mps);
    write_file(dir / "model_names.csv", doc.name_map);
  }
  if (cfg.dump_screen) write_file(dir / "screen.csv", screen_csv(r.screen));
  if (cfg.dump_gas_reduction)
    write_file(dir / "gas_reduction.txt", gas_reduction_text(net, r));
  std::cout << "objective " << num(r.objective()) << "\n";
  return 0;
}

int run_compare(const CompareConfig& cfg) {
  const std::string net_text = read_file(cfg.network);
  const std::string samples_text = read_file(cfg.samples);
  const auto net = iegs::load_network_text(net_text);
  iegs::IngestOptions iopt;
  const auto sc = iegs::ingest_samples(samples_text, net, iopt);

  iegs::PipelineOptions opts;
  opts.screen = (cfg.screen == "on");
  const auto draws = iegs::synthetic_draws(net, sc, cfg.draws, cfg.seed);
  const auto rep = iegs::run_comparison(net, sc, cfg.eps_grid, draws, opts);
  const auto curve = iegs::gap_curve(net, sc, cfg.eps_grid, opts);

  std::ostringstream tag_src;
  tag_src << net_text << samples_text << cfg.draws << ',' << cfg.seed << ',' << cfg.screen;
  for (double e : cfg.eps_grid) tag_src << ',' << num(e);
  const std::string tag = config_hash(tag_src.str());

  std::ostringstream comparison;
  comparison << "mode,eps,objective,oos_rate\n";
  for (const auto& row : rep.rows)
    comparison << row.mode << ',' << num(row.eps) << ',' << num(row.objective) << ','
               << num(row.oos_rate) << '\n';

  std::ostringstream gaps;
  gaps << "eps,objective,exact_reference,gap\n";
  for (const auto& pt : curve.points)
    gaps << num(pt.eps) << ',' << num(pt.objective) << ',' << num(curve.exact_reference)
         << ',' << num(pt.objective - curve.exact_reference) << '\n';

  const std::filesystem::path dir = cfg.out.empty() ? default_out_dir() : cfg.out;
  std::filesystem::create_directories(dir);
  write_file(dir / ("comparison-" + tag + ".csv"), comparison.str());
  write_file(dir / ("gap_curve-" + tag + ".csv"), gaps.str());
  std::cout << "rows " << rep.rows.size() << "\n";
  return 0;
}

int run_gen(const GenConfig& cfg) {
  iegs::GenSpec spec;
  spec.buses = cfg.buses;
  spec.gas_nodes = cfg.gas_nodes;
  spec.compressors = cfg.compressors;
  spec.periods = cfg.periods;
  spec.scenarios = cfg.scenarios;
  spec.seed = cfg.seed;
  const auto fx = iegs::generate_fixture(spec);
  const std::filesystem::path dir = cfg.out.empty() ? default_out_dir() : cfg.out;
  std::filesystem::create_directories(dir);
  write_file(dir / "network.json", fx.doc.dump(2) + "\n");
  write_file(dir / "samples.csv", fx.samples_csv);
  std::cout << "attempts " << fx.attempts << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust scheduling for coupled electricity and gas systems"};
  app.require_subcommand(1);

  SolveConfig scfg;
  auto* solve = app.add_subcommand("solve", "Solve one configuration and write reports");
  solve->add_option("--network", scfg.network, "Network description (JSON)")->required();
  solve->add_option("--samples", scfg.samples, "Wind sample CSV")->required();
  solve->add_option("--budget", scfg.budget, "Uncertainty budget (fraction of each sample sum)");
  solve->add_option("--mode", scfg.mode, "Model variant")
      ->check(CLI::IsMember({"sro", "saa", "ro"}));
  solve->add_option("--screen", scfg.screen, "Thermal row screening")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_flag("--clip", scfg.clip, "Clip out-of-range samples instead of rejecting them");
  solve->add_option("--out", scfg.out, "Output directory (default $IEGS_OUT_DIR or .)");
  solve->add_flag("--dump-model", scfg.dump_model, "Write the solved model in MPS format");
  solve->add_flag("--dump-screen", scfg.dump_screen, "Write per-row screening ranges");
  solve->add_flag("--dump-gas-reduction", scfg.dump_gas_reduction,
                  "Write free nodes, tangent coefficients, and fixed-point trace");

  CompareConfig ccfg;
  auto* compare = app.add_subcommand("compare", "Compare model variants over a budget grid");
  compare->add_option("--network", ccfg.network, "Network description (JSON)")->required();
  compare->add_option("--samples", ccfg.samples, "Wind sample CSV")->required();
  compare->add_option("--eps-grid", ccfg.eps_grid, "Budget grid values")->required();
  compare->add_option("--draws", ccfg.draws, "Synthetic evaluation draw count");
  compare->add_option("--seed", ccfg.seed, "Seed for evaluation draws");
  compare->add_option("--screen", ccfg.screen, "Thermal row screening")
      ->check(CLI::IsMember({"on", "off"}));
  compare->add_option("--out", ccfg.out, "Output directory (default $IEGS_OUT_DIR or .)");

  GenConfig gcfg;
  auto* gen = app.add_subcommand("gen", "Generate a random solvable test system");
  gen->add_option("--buses", gcfg.buses, "Bus count");
  gen->add_option("--gas-nodes", gcfg.gas_nodes, "Gas node count");
  gen->add_option("--compressors", gcfg.compressors, "Compressor count");
  gen->add_option("--periods", gcfg.periods, "Scheduling periods");
  gen->add_option("--scenarios", gcfg.scenarios, "Wind sample scenarios");
  gen->add_option("--seed", gcfg.seed, "Generator seed");
  gen->add_option("--out", gcfg.out, "Output directory (default $IEGS_OUT_DIR or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (solve->parsed() && scfg.budget < 0.0) {
    std::cerr << "budget must be nonnegative\n";
    return 2;
  }
  if (compare->parsed()) {
    for (double e : ccfg.eps_grid)
      if (e < 0.0) {
        std::cerr << "budget must be nonnegative\n";
        return 2;
      }
    if (ccfg.draws <= 0) {
      std::cerr << "draw count must be positive\n";
      return 2;
    }
  }

  try {
    if (solve->parsed()) return run_solve(scfg);
    if (compare->parsed()) return run_compare(ccfg);
    return run_gen(gcfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
