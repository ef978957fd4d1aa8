#pragma once

// Interval-by-interval simulation: generate trips, enumerate and reduce
// matches, assign riders, verify, and aggregate the reported measures.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtr/feasibility.hpp"
#include "mtr/hypergraph.hpp"
#include "mtr/network.hpp"
#include "mtr/oracle.hpp"
#include "mtr/setpacking.hpp"
#include "mtr/solvers.hpp"
#include "mtr/trips.hpp"

namespace mtr {

class VerificationFailure : public Error {
 public:
  using Error::Error;
};

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"exact", "impgreedy", "lpr", "greedy", "anyimp", "bestimp", "squareimp"};
  return names;
}

struct SolverOptions {
  std::string algorithm = "impgreedy";
  double time_limit = 0.0;  // exact only; <= 0 for none
  double improve_limit = 10.0;
  double alpha_factor = 1.0 + 1e-9;
  std::uint64_t seed = 0;  // lpr only
  std::size_t pair_budget = kDefaultPairBudget;
};

inline Solution run_solver(const Hypergraph& h, const SolverOptions& opt) {
  const auto& a = opt.algorithm;
  if (a == "exact") return solve_exact(h, opt.time_limit);
  if (a == "impgreedy") return imp_greedy(h);
  if (a == "lpr") return lpr(h, opt.seed);
  if (a == "greedy") return greedy_setpacking(h, opt.pair_budget);
  if (a == "anyimp") return local_search_setpacking(h, SearchMode::any, opt.improve_limit, opt.alpha_factor, opt.pair_budget);
  if (a == "bestimp") return local_search_setpacking(h, SearchMode::best, opt.improve_limit, opt.alpha_factor, opt.pair_budget);
  if (a == "squareimp") {
    return local_search_setpacking(h, SearchMode::square, opt.improve_limit, opt.alpha_factor, opt.pair_budget);
  }
  throw InvalidInput("unknown algorithm '" + a + "'");
}

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  int riders_total = 0;
  int drivers_total = 0;
  int riders_served = 0;
  Seconds time_saved_total = 0;       // over served riders
  Seconds transit_duration_total = 0; // fastest transit duration over all riders
  std::optional<double> occupancy_rate;
  std::optional<double> vacancy_rate;
};

/// Measures of a verified solution. time saved per served rider is
/// t̂(o_j, d_j) minus the combined ridesharing + transit duration.
inline Metrics compute_metrics(const Hypergraph& h, const Solution& sol, std::span<const Trip> drivers,
                               std::span<const Trip> riders, const RoadTransitNetwork& net) {
  Metrics m;
  m.riders_total = static_cast<int>(riders.size());
  m.drivers_total = static_cast<int>(drivers.size());
  m.riders_served = sol.value;
  std::unordered_map<TripId, const Trip*> rider_by_id;
  for (const auto& r : riders) {
    rider_by_id[r.id] = &r;
    m.transit_duration_total += net.transit_duration(r.o, r.d);
  }
  for (auto e : sol.matches) {
    const auto& match = h.edge(e);
    for (std::size_t k = 0; k < match.riders.size(); ++k) {
      const auto* r = rider_by_id.at(match.riders[k]);
      m.time_saved_total += net.transit_duration(r->o, r->d) - match.rider_durations.at(k);
    }
  }
  if (!drivers.empty()) {
    const double nd = static_cast<double>(drivers.size());
    m.occupancy_rate = (sol.value + nd) / nd;
    m.vacancy_rate = (nd - static_cast<double>(sol.matches.size())) / nd;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scenario

struct Scenario {
  NetworkSpec network = default_network_spec();
  GenerationProfile profile = default_generation_profile();
  ReductionConfig reduction;
  SolverOptions solver;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> network_seed;  // defaults to seed
  std::optional<double> theta;
  int first_interval = 0;
  int interval_count = -1;  // -1: to the end of the day
  double count_scale = 1.0;

  [[nodiscard]] std::uint64_t net_seed() const { return network_seed.value_or(seed); }
  [[nodiscard]] int last_interval() const {
    return interval_count < 0 ? profile.intervals_per_day - 1 : first_interval + interval_count - 1;
  }

  void validate() const {
    profile.validate();
    reduction.validate();
    if (theta && (!(*theta > 0.0) || *theta > 1.0)) throw InvalidInput("theta override must lie in (0, 1]");
    if (first_interval < 0 || last_interval() >= profile.intervals_per_day || last_interval() < first_interval - 1) {
      throw InvalidInput("scenario intervals fall outside the day");
    }
    if (count_scale < 0.0) throw InvalidInput("count_scale must be non-negative");
    bool known = false;
    for (const auto& a : algorithm_names()) known = known || a == solver.algorithm;
    if (!known) throw InvalidInput("unknown algorithm '" + solver.algorithm + "'");
  }
};

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse " + path.string() + ": " + e.what());
  }
}

/// A reference is either an inline object or a path relative to `base`.
inline nlohmann::json resolve_ref(const nlohmann::json& ref, const std::filesystem::path& base) {
  if (ref.is_object()) return ref;
  if (!ref.is_string()) throw InvalidInput("scenario reference must be a path or an object");
  return read_json_file(base / ref.get<std::string>());
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  try {
    if (j.contains("network")) {
      const auto& ref = j.at("network");
      if (!(ref.is_string() && ref.get<std::string>() == "default")) {
        s.network = network_spec_from_json(detail::resolve_ref(ref, base_dir));
      }
    }
    if (!j.contains("profile")) throw InvalidInput("scenario needs a profile");
    s.profile = generation_profile_from_json(detail::resolve_ref(j.at("profile"), base_dir));
    if (j.contains("reduction")) s.reduction = reduction_config_from_json(j.at("reduction"));
    s.solver.algorithm = j.value("algorithm", s.solver.algorithm);
    s.solver.time_limit = j.value("time_limit", s.solver.time_limit);
    s.solver.improve_limit = j.value("improve_limit", s.solver.improve_limit);
    s.solver.alpha_factor = j.value("alpha_factor", s.solver.alpha_factor);
    s.solver.pair_budget = j.value("pair_budget", s.solver.pair_budget);
    s.seed = j.value("seed", s.seed);
    if (j.contains("network_seed")) s.network_seed = j.at("network_seed").get<std::uint64_t>();
    if (j.contains("theta") && !j.at("theta").is_null()) s.theta = j.at("theta").get<double>();
    if (j.contains("intervals")) {
      s.first_interval = j.at("intervals").value("first", 0);
      s.interval_count = j.at("intervals").value("count", -1);
    }
    s.count_scale = j.value("count_scale", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed scenario: ") + e.what());
  }
  s.validate();
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(detail::read_json_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Simulation

struct IntervalReport {
  int interval = 0;
  Metrics metrics;
  std::size_t edges_base = 0;
  std::size_t edges_reduced = 0;
  std::size_t edges_final = 0;
  double alg1_time = 0.0;
  double alg2_time = 0.0;
  double solver_time = 0.0;
  bool optimal = false;
};

struct Summary {
  int intervals = 0;
  long long riders_total = 0;
  long long riders_served = 0;
  Seconds time_saved_total = 0;
  Seconds transit_duration_total = 0;
  double occupancy_avg = 0.0;
  double vacancy_avg = 0.0;
};

struct SimulationResult {
  std::vector<IntervalReport> reports;
  Summary summary;
};

/// Trips of interval t with the scenario's theta override applied.
inline TripBatch scenario_trips(const Scenario& scn, const RoadTransitNetwork& net, int t) {
  auto batch = generate_interval(scn.profile, net, t, scn.seed, scn.count_scale);
  if (scn.theta) {
    for (auto& r : batch.riders) r.theta = *scn.theta;
  }
  return batch;
}

/// Solves one batch end to end; throws VerificationFailure if the solver's
/// output does not survive the independent check.
inline IntervalReport run_batch(const Scenario& scn, const RoadTransitNetwork& net, const TripBatch& batch,
                                Solution* solution_out = nullptr, Hypergraph* graph_out = nullptr) {
  MatchContext ctx(net, batch.drivers, batch.riders);
  auto built = build_matches(ctx, scn.reduction);
  auto opt = scn.solver;
  opt.seed = scn.seed * 1000003ULL + static_cast<std::uint64_t>(batch.interval);
  auto sol = run_solver(built.final_graph, opt);

  std::vector<Trip> all(batch.riders);
  all.insert(all.end(), batch.drivers.begin(), batch.drivers.end());
  if (auto v = verify_solution(built.final_graph, sol, &net, all); !v) {
    throw VerificationFailure("interval " + std::to_string(batch.interval) + " (" + sol.solver + "): " + v.diagnostic);
  }
  IntervalReport rep;
  rep.interval = batch.interval;
  rep.metrics = compute_metrics(built.final_graph, sol, batch.drivers, batch.riders, net);
  rep.edges_base = built.base.size();
  rep.edges_reduced = built.reduced.size();
  rep.edges_final = built.final_graph.size();
  rep.alg1_time = built.phase_one_seconds;
  rep.alg2_time = built.phase_two_seconds;
  rep.solver_time = sol.elapsed;
  rep.optimal = sol.optimal;
  if (solution_out) *solution_out = std::move(sol);
  if (graph_out) *graph_out = std::move(built.final_graph);
  return rep;
}

inline Summary summarize(const std::vector<IntervalReport>& reports) {
  Summary s;
  s.intervals = static_cast<int>(reports.size());
  double occ = 0.0, vac = 0.0;
  int with_drivers = 0;
  for (const auto& r : reports) {
    s.riders_total += r.metrics.riders_total;
    s.riders_served += r.metrics.riders_served;
    s.time_saved_total += r.metrics.time_saved_total;
    s.transit_duration_total += r.metrics.transit_duration_total;
    if (r.metrics.occupancy_rate) {
      ++with_drivers;
      occ += *r.metrics.occupancy_rate;
      vac += r.metrics.vacancy_rate.value_or(0.0);
    }
  }
  if (with_drivers > 0) {
    s.occupancy_avg = occ / with_drivers;
    s.vacancy_avg = vac / with_drivers;
  }
  return s;
}

inline SimulationResult run_simulation(const Scenario& scn) {
  scn.validate();
  auto net = build_network(scn.net_seed(), scn.network);
  SimulationResult res;
  for (int t = scn.first_interval; t <= scn.last_interval(); ++t) {
    res.reports.push_back(run_batch(scn, net, scenario_trips(scn, net, t)));
  }
  res.summary = summarize(res.reports);
  return res;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

/// One row per interval. Timing columns are appended only on request, so the
/// default report is reproducible byte for byte.
inline std::string report_csv(const std::vector<IntervalReport>& reports, bool timings = false) {
  std::ostringstream out;
  out << "interval,riders_total,drivers_total,riders_served,time_saved_total,transit_duration_total,"
         "occupancy_rate,vacancy_rate,edges_base,edges_reduced,edges_final";
  if (timings) out << ",alg1_time,alg2_time,solver_time";
  out << '\n';
  for (const auto& r : reports) {
    const auto& m = r.metrics;
    out << r.interval << ',' << m.riders_total << ',' << m.drivers_total << ',' << m.riders_served << ','
        << m.time_saved_total << ',' << m.transit_duration_total << ','
        << (m.occupancy_rate ? detail::fixed(*m.occupancy_rate) : "") << ','
        << (m.vacancy_rate ? detail::fixed(*m.vacancy_rate) : "") << ',' << r.edges_base << ',' << r.edges_reduced
        << ',' << r.edges_final;
    if (timings) {
      out << ',' << detail::fixed(r.alg1_time) << ',' << detail::fixed(r.alg2_time) << ','
          << detail::fixed(r.solver_time);
    }
    out << '\n';
  }
  return out.str();
}

/// Parses report_csv output (timing columns ignored).
inline std::vector<IntervalReport> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<IntervalReport> out;
  if (!std::getline(in, line) || line.rfind("interval,", 0) != 0) throw InvalidInput("not a simulation report");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() < 11) throw InvalidInput("report row has too few columns");
    IntervalReport r;
    r.interval = std::stoi(f[0]);
    r.metrics.riders_total = std::stoi(f[1]);
    r.metrics.drivers_total = std::stoi(f[2]);
    r.metrics.riders_served = std::stoi(f[3]);
    r.metrics.time_saved_total = std::stoll(f[4]);
    r.metrics.transit_duration_total = std::stoll(f[5]);
    if (!f[6].empty()) r.metrics.occupancy_rate = std::stod(f[6]);
    if (!f[7].empty()) r.metrics.vacancy_rate = std::stod(f[7]);
    r.edges_base = std::stoull(f[8]);
    r.edges_reduced = std::stoull(f[9]);
    r.edges_final = std::stoull(f[10]);
    out.push_back(r);
  }
  return out;
}

/// Human-readable totals in minutes.
inline std::string summary_text(const Summary& s) {
  auto minutes = [](double sec) { return detail::fixed(sec / 60.0, 2); };
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  std::ostringstream out;
  out << "Intervals simulated                           " << s.intervals << '\n'
      << "Total number of riders served                 " << s.riders_served << '\n'
      << "Avg number of riders served per interval      " << detail::fixed(ratio(s.riders_served, s.intervals), 1) << '\n'
      << "Total time saved of all served riders (min)   " << minutes(static_cast<double>(s.time_saved_total)) << '\n'
      << "Avg time saved of served riders per interval  " << minutes(ratio(static_cast<double>(s.time_saved_total), s.intervals)) << '\n'
      << "Avg time saved per served rider (min)         " << minutes(ratio(static_cast<double>(s.time_saved_total), static_cast<double>(s.riders_served))) << '\n'
      << "Avg time saved per rider (min)                " << minutes(ratio(static_cast<double>(s.time_saved_total), static_cast<double>(s.riders_total))) << '\n'
      << "Avg public transit duration per rider (min)   " << minutes(ratio(static_cast<double>(s.transit_duration_total), static_cast<double>(s.riders_total))) << '\n'
      << "Total number of riders and transit duration   " << s.riders_total << " and " << minutes(static_cast<double>(s.transit_duration_total)) << " min\n"
      << "Average occupancy rate per interval           " << detail::fixed(s.occupancy_avg, 3) << '\n'
      << "Average vacancy rate per interval             " << detail::fixed(s.vacancy_avg, 4) << '\n';
  return out.str();
}

}  // namespace mtr
