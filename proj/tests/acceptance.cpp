// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "support/oracles.hpp"

using namespace mtr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<Hypergraph>& small_instances() {
  static const std::vector<Hypergraph> hs = [] {
    std::mt19937_64 rng(20240601);
    std::vector<Hypergraph> out;
    for (int k = 0; k < 500; ++k) out.push_back(testing::random_closed_hypergraph(rng));
    return out;
  }();
  return hs;
}

const std::vector<int>& small_optima() {
  static const std::vector<int> opt = [] {
    std::vector<int> out;
    for (const auto& h : small_instances()) out.push_back(brute_force_opt(h));
    return out;
  }();
  return opt;
}

Outcome oracle_equivalence() {
  int equal = 0;
  double worst = 0;
  for (std::size_t k = 0; k < small_instances().size(); ++k) {
    auto t0 = Clock::now();
    auto s = solve_exact(small_instances()[k]);
    worst = std::max(worst, since(t0));
    equal += s.value == small_optima()[k] && s.optimal;
  }
  return {equal == 500 && worst < 1.0, std::to_string(equal) + "/500 equal, slowest " + fmt("%.4f", worst) + " s"};
}

Outcome greedy_ratio() {
  int ok = 0;
  for (std::size_t k = 0; k < small_instances().size(); ++k) {
    ok += 2 * imp_greedy(small_instances()[k]).value >= small_optima()[k];
  }
  return {ok == 500, std::to_string(ok) + "/500 at least ceil(opt/2)"};
}

Outcome lpr_bound() {
  std::mt19937_64 rng(77);
  testing::RandomHypergraphSpec spec{6, 8, 3, 20};
  int ok = 0, bad_runs = 0;
  double worst_margin = 1e9;
  for (int k = 0; k < 20; ++k) {
    auto h = testing::random_closed_hypergraph(rng, spec);
    auto frac = solve_lp(h);
    double sum = 0, sq = 0;
    const int runs = 10000;
    for (int s = 0; s < runs; ++s) {
      auto sol = lpr_round(h, frac, static_cast<std::uint64_t>(s));
      bad_runs += !verify_solution(h, sol);
      sum += sol.value;
      sq += static_cast<double>(sol.value) * sol.value;
    }
    double mean = sum / runs;
    double se = std::sqrt(std::max(0.0, sq / runs - mean * mean) / runs);
    double bound = (1 - std::exp(-1.0)) * frac.objective - 3 * se;
    worst_margin = std::min(worst_margin, mean - bound);
    ok += mean >= bound;
  }
  return {ok == 20 && bad_runs == 0, std::to_string(ok) + "/20 instances meet the bound (smallest margin " +
                                         fmt("%.3f", worst_margin) + "), " + std::to_string(bad_runs) +
                                         " runs failed verification"};
}

Outcome greedy_equivalence() {
  std::mt19937_64 rng(78);
  int ok = 0;
  for (int k = 0; k < 200; ++k) {
    auto h = testing::random_hypergraph(rng, 20, 60, 4, 150);
    auto g = to_conflict_graph(h);
    ok += imp_greedy(h).value == set_weight(g, greedy_mwis(g));
  }
  return {ok == 200, std::to_string(ok) + "/200 equal"};
}

Outcome local_search_dominance() {
  std::mt19937_64 rng(79);
  int ok = 0;
  for (int k = 0; k < 200; ++k) {
    auto h = testing::random_hypergraph(rng, 15, 40, 4, 100);
    auto g = to_conflict_graph(h);
    auto start = greedy_mwis(g);
    bool fine = true;
    for (auto mode : {SearchMode::any, SearchMode::best}) {
      LocalSearchOptions opt;
      opt.mode = mode;
      auto out = local_search(g, start, opt);
      fine = fine && is_independent(g, out) && set_weight(g, out) >= set_weight(g, start);
    }
    ok += fine;
  }
  return {ok == 200, std::to_string(ok) + "/200 independent and at least greedy"};
}

Outcome closure() {
  const auto& net = testing::default_net();
  auto profile = testing::flat_profile(11);  // 8 riders, 3 drivers
  int instances = 0, closed = 0;
  for (const char* preset : {"None", "Small1", "Medium4", "Large4"}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      for (int t : {8, 30, 48}) {
        auto b = generate_interval(profile, net, t, seed);
        if (b.riders.size() > 8) continue;
        MatchContext ctx(net, b.drivers, b.riders);
        auto h = build_matches(ctx, reduction_preset(preset)).final_graph;
        ++instances;
        closed += testing::exhaustively_closed(h);
      }
    }
  }
  return {instances > 0 && closed == instances,
          std::to_string(closed) + "/" + std::to_string(instances) + " instances downward closed"};
}

Outcome latest_departure_grid() {
  const auto& net = testing::default_net();
  int routes = 0, ok = 0;
  for (std::uint64_t seed = 1; seed <= 200 && routes < 100; ++seed) {
    auto b = generate_interval(testing::flat_profile(60), net, static_cast<int>(seed % 60), seed);
    MatchContext ctx(net, b.drivers, b.riders);
    auto h = build_matches(ctx, reduction_preset("None")).final_graph;
    std::map<TripId, const Trip*> by_id;
    for (const auto& t : b.riders) by_id[t.id] = &t;
    for (const auto& t : b.drivers) by_id[t.id] = &t;
    // one route per driver, the largest type 1 match, to spread the sample
    std::map<TripId, const FeasibleMatch*> pick;
    for (const auto& m : h.edges()) {
      if (m.type != MatchType::type1 || m.riders.size() > 3) continue;
      auto& cur = pick[m.driver];
      if (!cur || m.riders.size() > cur->riders.size()) cur = &m;
    }
    for (const auto& [d, m] : pick) {
      if (routes >= 100) break;
      const Trip& drv = *by_id.at(d);
      std::vector<Seconds> legs, alphas;
      for (std::size_t k = 1; k <= m->service_order.size(); ++k) legs.push_back(net.travel_time(m->route[k - 1], m->route[k]));
      for (auto r : m->service_order) alphas.push_back(by_id.at(r)->alpha);
      const Seconds eta = latest_departure(drv.alpha, alphas, legs);
      const Seconds best = testing::drive_pickups(eta, legs, alphas).arrival_last;
      bool fine = eta == m->departure && !testing::drive_pickups(eta, legs, alphas).waited;
      for (Seconds dep = drv.alpha; dep <= eta + 900 && fine; ++dep) {
        auto arrive = testing::drive_pickups(dep, legs, alphas).arrival_last;
        if (arrive < best) fine = false;                // earlier arrival than eta
        if (dep > eta && arrive <= best) fine = false;  // later departure just as good
      }
      ++routes;
      ok += fine;
    }
  }
  return {routes == 100 && ok == routes, std::to_string(ok) + "/" + std::to_string(routes) + " routes agree with the grid"};
}

Outcome three_dm() {
  int ok = 0;
  for (int k = 0; k < 50; ++k) {
    int q = 1 + k % 5;
    auto h = from_3dm(random_perfect_3dm(q, 2 * q, 1000 + static_cast<std::uint64_t>(k)));
    auto s = solve_exact(h);
    ok += s.value == 2 * q && s.optimal;
  }
  return {ok == 50, std::to_string(ok) + "/50 reach 2q"};
}

Scenario desk() { return load_scenario(fs::path(MTR_SCENARIO_DIR) / "desk.json"); }

// Counts adjacent steps against the expected direction; at most one allowed,
// and it must be within 2%.
struct Trend {
  int violations = 0;
  double worst = 0.0;

  void step(double prev, double next, bool should_not_increase) {
    double delta = should_not_increase ? next - prev : prev - next;
    if (delta <= 0) return;
    ++violations;
    worst = std::max(worst, delta / std::max(1.0, std::abs(prev)));
  }
  [[nodiscard]] bool ok() const { return violations == 0 || (violations == 1 && worst <= 0.02); }
};

Outcome theta_trend() {
  std::vector<long long> served;
  std::vector<long long> saved;
  for (double theta : {0.9, 0.8, 0.7, 0.6}) {
    auto s = desk();
    s.theta = theta;
    auto sum = run_simulation(s).summary;
    served.push_back(sum.riders_served);
    saved.push_back(sum.time_saved_total);
  }
  Trend t;
  for (std::size_t k = 1; k < served.size(); ++k) {
    t.step(static_cast<double>(served[k - 1]), static_cast<double>(served[k]), true);
    t.step(static_cast<double>(saved[k - 1]), static_cast<double>(saved[k]), false);
  }
  std::ostringstream d;
  d << "served";
  for (auto v : served) d << ' ' << v;
  d << "; saved min";
  for (auto v : saved) d << ' ' << v / 60;
  d << "; violations " << t.violations;
  return {t.ok(), d.str()};
}

Outcome config_trend() {
  std::vector<long long> served;
  for (const char* preset : {"Small4", "Medium4", "Large4"}) {
    auto s = desk();
    s.reduction = reduction_preset(preset);
    served.push_back(run_simulation(s).summary.riders_served);
  }
  return {served[2] >= served[1] && served[1] >= served[0], "Small4 " + std::to_string(served[0]) + ", Medium4 " +
                                                                 std::to_string(served[1]) + ", Large4 " +
                                                                 std::to_string(served[2])};
}

Hypergraph synthetic(std::size_t edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int drivers = 500;
  const int riders = static_cast<int>(edges / 10);
  std::uniform_int_distribution<int> pd(0, drivers - 1), pr(0, riders - 1), pk(1, 3);
  Hypergraph h(true);
  while (h.size() < edges) {
    FeasibleMatch m;
    m.driver = 10'000'000 + pd(rng);
    int k = pk(rng);
    while (static_cast<int>(m.riders.size()) < k) {
      TripId r = pr(rng);
      if (std::find(m.riders.begin(), m.riders.end(), r) == m.riders.end()) m.riders.push_back(r);
    }
    std::sort(m.riders.begin(), m.riders.end());
    if (!h.find(m.driver, m.riders)) h.add(std::move(m));
  }
  return h;
}

double timed_greedy(const Hypergraph& h) {
  std::vector<double> ts;
  for (int rep = 0; rep < 21; ++rep) {
    auto t0 = Clock::now();
    auto s = imp_greedy(h);
    ts.push_back(since(t0));
    if (s.value <= 0) return 1e9;
  }
  std::sort(ts.begin(), ts.end());
  return ts[ts.size() / 2];
}

Outcome greedy_performance() {
  std::vector<double> sizes{1e4, 5e4, 1e5};
  std::vector<double> times;
  for (double e : sizes) times.push_back(timed_greedy(synthetic(static_cast<std::size_t>(e), 5)));
  // least squares line t = a + b * |E|
  const double n = static_cast<double>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    sx += sizes[k];
    sy += times[k];
    sxx += sizes[k] * sizes[k];
    sxy += sizes[k] * times[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  bool linear = true;
  for (std::size_t k = 0; k < sizes.size(); ++k) linear = linear && times[k] <= 2.0 * (icpt + slope * sizes[k]);
  std::ostringstream d;
  d << "times (s)";
  for (double t : times) d << ' ' << fmt("%.5f", t);
  d << (linear ? ", within 2x of the linear fit" : ", off the linear fit");
  return {times.back() < 2.0 && linear, d.str()};
}

Outcome determinism() {
  auto dir = fs::temp_directory_path() / ("mtr_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto scenario = (fs::path(MTR_SCENARIO_DIR) / "desk.json").string();
  std::string out[2];
  for (int k = 0; k < 2; ++k) {
    auto csv = dir / ("run" + std::to_string(k) + ".csv");
    std::string cmd = std::string("\"") + MTR_CLI + "\" simulate --scenario \"" + scenario + "\" --algo lpr -o \"" +
                      csv.string() + "\" --summary \"" + (dir / "summary.txt").string() + "\"";
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "simulate exited with an error"};
    }
    std::ifstream in(csv, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[k] = ss.str();
  }
  fs::remove_all(dir);
  bool same = !out[0].empty() && out[0] == out[1];
  return {same, std::to_string(out[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"impgreedy half ratio", greedy_ratio},
      {"lpr expectation bound", lpr_bound},
      {"greedy equivalence", greedy_equivalence},
      {"local search dominance", local_search_dominance},
      {"downward closure", closure},
      {"latest departure grid", latest_departure_grid},
      {"3dm reduction", three_dm},
      {"theta trend", theta_trend},
      {"config trend", config_trend},
      {"impgreedy performance", greedy_performance},
      {"cli determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << ": " << o.detail << " ["
              << fmt("%.1f", since(t0)) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
