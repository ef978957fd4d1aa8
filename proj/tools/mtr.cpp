// Command-line front end: generate | match | solve | simulate | report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtr/mtr.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;
constexpr int kExitLimit = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mtr::InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw mtr::InvalidInput("cannot parse " + path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mtr::InvalidInput("cannot write " + path);
  out << text;
}

struct SolverFlags {
  std::string algo;
  double time_limit = -1;
  double improve_limit = -1;
  double alpha_factor = -1;
  long long seed = -1;
  long long pair_budget = -1;

  void add_to(CLI::App* app) {
    app->add_option("--algo", algo, "exact|impgreedy|lpr|greedy|anyimp|bestimp|squareimp")
        ->check(CLI::IsMember(mtr::algorithm_names()));
    app->add_option("--time-limit", time_limit, "exact solver limit in seconds");
    app->add_option("--improve-limit", improve_limit, "local search limit per improvement in seconds");
    app->add_option("--alpha-factor", alpha_factor, "local search improvement factor (> 1)");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--pair-budget", pair_budget, "conflict graph pair budget");
  }

  void apply(mtr::SolverOptions& o) const {
    if (!algo.empty()) o.algorithm = algo;
    if (time_limit >= 0) o.time_limit = time_limit;
    if (improve_limit >= 0) o.improve_limit = improve_limit;
    if (alpha_factor >= 0) o.alpha_factor = alpha_factor;
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    if (pair_budget >= 0) o.pair_budget = static_cast<std::size_t>(pair_budget);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal transit + ridesharing matcher and simulator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate the trips of one interval as JSON");
  std::string gen_scenario, gen_out;
  int gen_interval = 0;
  bool gen_network = false;
  gen->add_option("--scenario", gen_scenario, "scenario file")->required()->check(CLI::ExistingFile);
  gen->add_option("--interval", gen_interval, "interval index");
  gen->add_flag("--network", gen_network, "emit the built road and transit network instead");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // match
  auto* match = app.add_subcommand("match", "build the reduced, closed hypergraph of a trip batch");
  std::string match_scenario, match_trips, match_out, match_reduction;
  match->add_option("--scenario", match_scenario, "scenario file")->required()->check(CLI::ExistingFile);
  match->add_option("--trips", match_trips, "trip batch JSON")->required()->check(CLI::ExistingFile);
  match->add_option("--reduction", match_reduction, "reduction preset name (overrides the scenario)");
  match->add_option("-o,--out", match_out, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve a hypergraph or a 3DM instance");
  std::string solve_h, solve_3dm, solve_out, solve_scenario, solve_trips;
  SolverFlags solve_flags;
  auto* opt_h = solve->add_option("--hypergraph", solve_h, "hypergraph JSON")->check(CLI::ExistingFile);
  auto* opt_3 = solve->add_option("--3dm", solve_3dm, "3DM instance text")->check(CLI::ExistingFile);
  opt_h->excludes(opt_3);
  solve->add_option("--scenario", solve_scenario, "scenario file, for full route verification")
      ->check(CLI::ExistingFile);
  solve->add_option("--trips", solve_trips, "trip batch JSON, for full route verification")->check(CLI::ExistingFile);
  solve->add_option("-o,--out", solve_out, "output file (default stdout)");
  solve_flags.add_to(solve);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the interval simulation of a scenario");
  std::string sim_scenario, sim_out, sim_summary, sim_reduction;
  double sim_theta = -1;
  bool sim_timings = false;
  SolverFlags sim_flags;
  sim->add_option("--scenario", sim_scenario, "scenario file")->required()->check(CLI::ExistingFile);
  sim->add_option("--theta", sim_theta, "acceptance threshold for every rider");
  sim->add_option("--reduction", sim_reduction, "reduction preset name");
  sim->add_option("-o,--out", sim_out, "CSV report file (default stdout)");
  sim->add_option("--summary", sim_summary, "summary text file (default stderr)");
  sim->add_flag("--timings", sim_timings, "append timing columns to the CSV");
  sim_flags.add_to(sim);

  // report
  auto* rep = app.add_subcommand("report", "summarize a CSV report");
  std::string rep_csv;
  rep->add_option("csv", rep_csv, "report produced by simulate")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto scn = mtr::load_scenario(gen_scenario);
      auto net = mtr::build_network(scn.net_seed(), scn.network);
      if (gen_network) {
        emit(mtr::to_json(net.parts()).dump(2) + "\n", gen_out);
      } else {
        emit(mtr::to_json(mtr::scenario_trips(scn, net, gen_interval)).dump(2) + "\n", gen_out);
      }
    } else if (match->parsed()) {
      auto scn = mtr::load_scenario(match_scenario);
      if (!match_reduction.empty()) scn.reduction = mtr::reduction_preset(match_reduction);
      auto net = mtr::build_network(scn.net_seed(), scn.network);
      auto batch = mtr::trip_batch_from_json(read_json(match_trips));
      mtr::MatchContext ctx(net, batch.drivers, batch.riders);
      auto built = mtr::build_matches(ctx, scn.reduction);
      std::cerr << "base " << built.base.size() << ", reduced " << built.reduced.size() << ", final "
                << built.final_graph.size() << " matches\n";
      emit(mtr::to_json(built.final_graph).dump(2) + "\n", match_out);
    } else if (solve->parsed()) {
      if (solve_h.empty() == solve_3dm.empty()) throw mtr::InvalidInput("give exactly one of --hypergraph or --3dm");
      mtr::SolverOptions so;
      solve_flags.apply(so);
      auto h = solve_h.empty() ? mtr::from_3dm(mtr::parse_3dm(slurp(solve_3dm)))
                               : mtr::hypergraph_from_json(read_json(solve_h));
      auto sol = mtr::run_solver(h, so);
      mtr::Verification v;
      if (!solve_scenario.empty() && !solve_trips.empty()) {
        auto scn = mtr::load_scenario(solve_scenario);
        auto net = mtr::build_network(scn.net_seed(), scn.network);
        auto batch = mtr::trip_batch_from_json(read_json(solve_trips));
        std::vector<mtr::Trip> all(batch.riders);
        all.insert(all.end(), batch.drivers.begin(), batch.drivers.end());
        v = mtr::verify_solution(h, sol, &net, all);
      } else {
        v = mtr::verify_solution(h, sol, nullptr, {});
      }
      if (!v) {
        std::cerr << "verification failed: " << v.diagnostic << "\n";
        return kExitVerify;
      }
      emit(mtr::to_json(sol).dump(2) + "\n", solve_out);
    } else if (sim->parsed()) {
      auto scn = mtr::load_scenario(sim_scenario);
      sim_flags.apply(scn.solver);
      if (sim_theta >= 0) scn.theta = sim_theta;
      if (!sim_reduction.empty()) scn.reduction = mtr::reduction_preset(sim_reduction);
      auto res = mtr::run_simulation(scn);
      emit(mtr::report_csv(res.reports, sim_timings), sim_out);
      auto text = mtr::summary_text(res.summary);
      if (sim_summary.empty()) {
        std::cerr << text;
      } else {
        emit(text, sim_summary);
      }
    } else if (rep->parsed()) {
      std::cout << mtr::summary_text(mtr::summarize(mtr::parse_report_csv(slurp(rep_csv))));
    }
  } catch (const mtr::VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerify;
  } catch (const mtr::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
