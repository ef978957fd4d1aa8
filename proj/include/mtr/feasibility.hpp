#pragma once

// Enumeration of feasible matches.
//
// Phase one finds every driver/rider pair that can be served together; phase
// two grows rider sets one rider at a time, only trying sets whose every
// subset is already known to be feasible. For each rider set the engine keeps
// every feasible (type, station, service order) so that a larger set only
// tests orders obtained by inserting the new rider into a known feasible one.

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mtr/hypergraph.hpp"
#include "mtr/network.hpp"
#include "mtr/trips.hpp"
#include "mtr/types.hpp"

namespace mtr {

struct StationTimeTuple {
  NodeId station = kNoNode;
  Seconds earliest_arrival = 0;

  bool operator==(const StationTimeTuple&) const = default;
};

/// Largest integer duration X with X <= theta * base.
inline Seconds acceptance_limit(double theta, Seconds base) {
  return static_cast<Seconds>(std::floor(theta * static_cast<double>(base) + 1e-9));
}

/// Feasible transfer stations of a trip for one match type, ascending by
/// station id. Type 1 stations are drop-off points (car then transit for a
/// rider); type 2 stations are pick-up points (transit then car).
inline std::vector<StationTimeTuple> station_time_tuples(const Trip& trip, const RoadTransitNetwork& net,
                                                         MatchType type = MatchType::type1) {
  std::vector<StationTimeTuple> out;
  if (trip.is_driver()) {
    for (auto s : net.stations()) {
      if (trip.station && s != *trip.station) continue;
      Seconds to_s = net.travel_time(trip.o, s);
      Seconds from_s = net.travel_time(s, trip.d);
      Seconds arrive = trip.alpha + to_s;
      if (arrive + from_s <= trip.beta && to_s + from_s <= trip.gamma) out.push_back({s, arrive});
    }
    return out;
  }
  const Seconds limit = std::min(trip.gamma, acceptance_limit(trip.theta, net.transit_duration(trip.o, trip.d)));
  for (auto s : net.stations()) {
    Seconds first = type == MatchType::type1 ? net.travel_time(trip.o, s) : net.transit_duration(trip.o, s);
    Seconds second = type == MatchType::type1 ? net.transit_duration(s, trip.d) : net.travel_time(s, trip.d);
    Seconds arrive = trip.alpha + first;
    if (arrive + second <= trip.beta && first + second <= limit) out.push_back({s, arrive});
  }
  return out;
}

/// max{alpha_i, alpha_j1 - c_1, ..., alpha_jp - c_p} where c_y is the driving
/// time from o_i to the y-th pick-up (legs[k] is the time of leg k).
inline Seconds latest_departure(Seconds driver_alpha, std::span<const Seconds> rider_alpha,
                                std::span<const Seconds> legs) {
  if (legs.size() < rider_alpha.size()) throw InvalidInput("latest_departure needs one leg per rider");
  Seconds eta = driver_alpha;
  Seconds cum = 0;
  for (std::size_t y = 0; y < rider_alpha.size(); ++y) {
    cum += legs[y];
    eta = std::max(eta, rider_alpha[y] - cum);
  }
  return eta;
}

/// Latest departure for the route prefix (o_i, o_j1, ..., o_jp).
inline Seconds latest_departure(const RoadTransitNetwork& net, std::span<const NodeId> prefix, const Trip& driver,
                                std::span<const Trip> riders) {
  if (prefix.size() != riders.size() + 1 || prefix.empty() || prefix.front() != driver.o) {
    throw InvalidInput("route prefix must start at the driver's origin and list one pick-up per rider");
  }
  std::vector<Seconds> legs, alphas;
  for (std::size_t k = 1; k < prefix.size(); ++k) legs.push_back(net.travel_time(prefix[k - 1], prefix[k]));
  for (const auto& r : riders) alphas.push_back(r.alpha);
  return latest_departure(driver.alpha, alphas, legs);
}

struct ReductionConfig {
  double x_pct = 100.0;
  int y = INT_MAX;
  int z = INT_MAX;

  void validate() const {
    if (!(x_pct > 0.0) || x_pct > 100.0) throw InvalidInput("reduction x% must lie in (0, 100]");
    if (y < 1 || z < 1) throw InvalidInput("reduction y and z must be at least 1");
  }
};

/// Named configurations used in the experiments (Small1 .. Huge3).
inline ReductionConfig reduction_preset(const std::string& name) {
  static const std::map<std::string, ReductionConfig> presets = {
      {"Small1", {20, 300, 10}},  {"Small2", {20, 600, 10}},  {"Small3", {20, 300, 20}},
      {"Small4", {20, 600, 20}},  {"Medium1", {30, 300, 10}}, {"Medium2", {30, 600, 10}},
      {"Medium3", {30, 300, 20}}, {"Medium4", {30, 600, 20}}, {"Large1", {40, 300, 10}},
      {"Large2", {40, 600, 10}},  {"Large3", {40, 300, 20}},  {"Large4", {40, 600, 20}},
      {"Huge1", {100, 600, 10}},  {"Huge2", {100, 2500, 20}}, {"Huge3", {100, 10000, 30}},
      {"None", {}},
  };
  auto it = presets.find(name);
  if (it == presets.end()) throw InvalidInput("unknown reduction preset '" + name + "'");
  return it->second;
}

inline nlohmann::json to_json(const ReductionConfig& c) {
  nlohmann::json j = {{"x_pct", c.x_pct}};
  j["y"] = c.y == INT_MAX ? nlohmann::json(nullptr) : nlohmann::json(c.y);
  j["z"] = c.z == INT_MAX ? nlohmann::json(nullptr) : nlohmann::json(c.z);
  return j;
}

/// Accepts a preset name or {x_pct, y, z}; null or missing y/z mean unbounded.
inline ReductionConfig reduction_config_from_json(const nlohmann::json& j) {
  if (j.is_string()) return reduction_preset(j.get<std::string>());
  ReductionConfig c;
  c.x_pct = j.value("x_pct", 100.0);
  if (j.contains("y") && !j.at("y").is_null()) c.y = j.at("y").get<int>();
  if (j.contains("z") && !j.at("z").is_null()) c.z = j.at("z").get<int>();
  c.validate();
  return c;
}

/// One candidate way of serving a rider set.
struct RoutePlan {
  MatchType type = MatchType::type1;
  NodeId station = kNoNode;
  std::vector<TripId> order;
};

/// Shared inputs of one matching run: the network, trips by id, and each
/// trip's station tuples per match type.
class MatchContext {
 public:
  MatchContext(const RoadTransitNetwork& net, std::span<const Trip> drivers, std::span<const Trip> riders)
      : net_(&net) {
    for (const auto& t : drivers) add(t, TripKind::driver);
    for (const auto& t : riders) add(t, TripKind::rider);
    std::sort(driver_ids_.begin(), driver_ids_.end());
    std::sort(rider_ids_.begin(), rider_ids_.end());
  }

  [[nodiscard]] const RoadTransitNetwork& net() const { return *net_; }
  [[nodiscard]] const std::vector<TripId>& driver_ids() const { return driver_ids_; }
  [[nodiscard]] const std::vector<TripId>& rider_ids() const { return rider_ids_; }

  [[nodiscard]] const Trip& trip(TripId id) const {
    auto it = slot_.find(id);
    if (it == slot_.end()) throw InvalidInput("unknown trip id " + std::to_string(id));
    return trips_[it->second];
  }

  [[nodiscard]] const std::vector<StationTimeTuple>& tuples(TripId id, MatchType type) const {
    auto it = slot_.find(id);
    if (it == slot_.end()) throw InvalidInput("unknown trip id " + std::to_string(id));
    return tuples_[it->second][type == MatchType::type1 ? 0 : 1];
  }

  [[nodiscard]] bool has_station(TripId id, MatchType type, NodeId s) const {
    const auto& ts = tuples(id, type);
    auto it = std::lower_bound(ts.begin(), ts.end(), s, [](const StationTimeTuple& a, NodeId v) { return a.station < v; });
    return it != ts.end() && it->station == s;
  }

  /// t̂(o_j, d_j) for a rider.
  [[nodiscard]] Seconds transit_od(TripId rider) const { return transit_od_[slot_.at(rider)]; }

  /// min{gamma_j, theta_j * t̂(o_j, d_j)} for a rider.
  [[nodiscard]] Seconds rider_limit(TripId rider) const {
    const auto& r = trip(rider);
    return std::min(r.gamma, acceptance_limit(r.theta, transit_od(rider)));
  }

  [[nodiscard]] static bool uses_preferred_path(const Trip& d) { return d.z == 0 && !d.p.empty() && d.station; }

 private:
  void add(const Trip& t, TripKind expect) {
    if (t.kind != expect) throw InvalidInput("trip " + std::to_string(t.id) + " is in the wrong list");
    if (!slot_.emplace(t.id, trips_.size()).second) throw InvalidInput("duplicate trip id " + std::to_string(t.id));
    trips_.push_back(t);
    (expect == TripKind::driver ? driver_ids_ : rider_ids_).push_back(t.id);
    std::array<std::vector<StationTimeTuple>, 2> ts;
    for (auto type : kMatchTypes) {
      if (t.types.has(type)) ts[type == MatchType::type1 ? 0 : 1] = station_time_tuples(t, *net_, type);
    }
    tuples_.push_back(std::move(ts));
    transit_od_.push_back(t.is_rider() ? net_->transit_duration(t.o, t.d) : 0);
  }

  const RoadTransitNetwork* net_;
  std::vector<Trip> trips_;
  std::unordered_map<TripId, std::size_t> slot_;
  std::vector<std::array<std::vector<StationTimeTuple>, 2>> tuples_;
  std::vector<Seconds> transit_od_;
  std::vector<TripId> driver_ids_, rider_ids_;
};

/// Timing of one evaluated plan.
struct PlanTiming {
  std::vector<NodeId> route;
  Seconds departure = 0;
  std::vector<Seconds> durations;  // per rider, in service order
};

namespace detail {

/// Positions of `stops` along the preferred path, earliest match each, or
/// empty when the stops do not appear in order.
inline std::vector<std::size_t> positions_on_path(std::span<const NodeId> path, std::span<const NodeId> stops) {
  std::vector<std::size_t> pos;
  std::size_t from = 0;
  for (auto v : stops) {
    auto it = std::find(path.begin() + static_cast<std::ptrdiff_t>(from), path.end(), v);
    if (it == path.end()) return {};
    from = static_cast<std::size_t>(it - path.begin());
    pos.push_back(from);
  }
  return pos;
}

}  // namespace detail

/// Checks every time, acceptance, capacity and stop constraint of one plan.
inline std::optional<PlanTiming> evaluate_plan(const MatchContext& ctx, const Trip& driver, const RoutePlan& plan) {
  const auto& net = ctx.net();
  const auto p = plan.order.size();
  if (p == 0 || static_cast<int>(p) > driver.n) return std::nullopt;
  if (!driver.types.has(plan.type)) return std::nullopt;

  std::vector<const Trip*> rs;
  std::set<NodeId> stops;
  for (auto id : plan.order) {
    rs.push_back(&ctx.trip(id));
    if (!rs.back()->types.has(plan.type)) return std::nullopt;
    stops.insert(plan.type == MatchType::type1 ? rs.back()->o : rs.back()->d);
  }
  if (static_cast<int>(stops.size()) > driver.delta) return std::nullopt;

  // points: type 1 (o_i, o_j1..o_jp, s, d_i); type 2 (o_i, s, d_j1..d_jp, d_i)
  std::vector<NodeId> points{driver.o};
  if (plan.type == MatchType::type1) {
    for (auto* r : rs) points.push_back(r->o);
    points.push_back(plan.station);
  } else {
    points.push_back(plan.station);
    for (auto* r : rs) points.push_back(r->d);
  }
  points.push_back(driver.d);

  std::vector<Seconds> legs;
  PlanTiming timing;
  if (MatchContext::uses_preferred_path(driver)) {
    if (plan.station != *driver.station) return std::nullopt;
    auto pos = detail::positions_on_path(driver.p, points);
    if (pos.empty() || pos.back() != driver.p.size() - 1) return std::nullopt;
    for (std::size_t k = 1; k < pos.size(); ++k) {
      legs.push_back(net.path_time(std::span(driver.p).subspan(pos[k - 1], pos[k] - pos[k - 1] + 1)));
    }
    timing.route = driver.p;
  } else {
    for (std::size_t k = 1; k < points.size(); ++k) legs.push_back(net.travel_time(points[k - 1], points[k]));
    timing.route = points;
  }

  const auto s = plan.station;
  if (plan.type == MatchType::type1) {
    std::vector<Seconds> offset(p);  // driving time from o_i to the y-th pick-up
    Seconds cum = 0;
    Seconds eta = driver.alpha;
    for (std::size_t y = 0; y < p; ++y) {
      cum += legs[y];
      offset[y] = cum;
      eta = std::max(eta, rs[y]->alpha - cum);
    }
    const Seconds t_i = cum + legs[p];
    const Seconds t = eta + t_i;
    const Seconds tail = legs[p + 1];
    if (t + tail > driver.beta || t_i + tail > driver.gamma) return std::nullopt;
    for (std::size_t y = 0; y < p; ++y) {
      Seconds transit = net.transit_duration(s, rs[y]->d);
      Seconds t_j = t_i - offset[y];
      if (t + transit > rs[y]->beta || t_j + transit > ctx.rider_limit(rs[y]->id)) return std::nullopt;
      timing.durations.push_back(t_j + transit);
    }
    timing.departure = eta;
  } else {
    Seconds meet = driver.alpha + legs[0];
    std::vector<Seconds> transit(p);
    for (std::size_t y = 0; y < p; ++y) {
      transit[y] = net.transit_duration(rs[y]->o, s);
      meet = std::max(meet, rs[y]->alpha + transit[y]);
    }
    Seconds cum = 0;
    for (std::size_t y = 0; y < p; ++y) {
      cum += legs[y + 1];
      if (meet + cum > rs[y]->beta || transit[y] + cum > ctx.rider_limit(rs[y]->id)) return std::nullopt;
      timing.durations.push_back(transit[y] + cum);
    }
    const Seconds tail = legs[p + 1];
    if (meet + cum + tail > driver.beta || legs[0] + cum + tail > driver.gamma) return std::nullopt;
    timing.departure = meet - legs[0];
  }
  return timing;
}

/// Builds the hyperedge for a plan that evaluate_plan accepted.
inline FeasibleMatch make_match(const MatchContext& ctx, TripId driver, const RoutePlan& plan, PlanTiming timing) {
  (void)ctx;
  FeasibleMatch m;
  m.driver = driver;
  m.type = plan.type;
  m.station = plan.station;
  m.service_order = plan.order;
  m.route = std::move(timing.route);
  m.departure = timing.departure;
  m.riders = plan.order;
  std::sort(m.riders.begin(), m.riders.end());
  m.rider_durations.resize(m.riders.size());
  for (std::size_t k = 0; k < plan.order.size(); ++k) {
    auto pos = std::lower_bound(m.riders.begin(), m.riders.end(), plan.order[k]) - m.riders.begin();
    m.rider_durations[static_cast<std::size_t>(pos)] = timing.durations[k];
  }
  return m;
}

/// Stations common to the driver and all riders for one type, ascending.
inline std::vector<NodeId> common_stations(const MatchContext& ctx, TripId driver, std::span<const TripId> riders,
                                           MatchType type) {
  std::vector<NodeId> out;
  for (const auto& st : ctx.tuples(driver, type)) {
    bool ok = std::all_of(riders.begin(), riders.end(), [&](TripId r) { return ctx.has_station(r, type, st.station); });
    if (ok) out.push_back(st.station);
  }
  return out;
}

/// Every feasible plan for (driver, riders), ordered by type, then station,
/// then service order compared lexicographically by rider id.
inline std::vector<RoutePlan> all_feasible_plans(const MatchContext& ctx, TripId driver, std::vector<TripId> riders) {
  std::vector<RoutePlan> out;
  std::sort(riders.begin(), riders.end());
  const auto& d = ctx.trip(driver);
  for (auto type : kMatchTypes) {
    for (auto s : common_stations(ctx, driver, riders, type)) {
      auto order = riders;
      do {
        RoutePlan plan{type, s, order};
        if (evaluate_plan(ctx, d, plan)) out.push_back(std::move(plan));
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
  return out;
}

/// First feasible plan in the order of all_feasible_plans, by exhaustive search.
inline std::optional<FeasibleMatch> best_match(const MatchContext& ctx, TripId driver, std::vector<TripId> riders) {
  std::sort(riders.begin(), riders.end());
  const auto& d = ctx.trip(driver);
  for (auto type : kMatchTypes) {
    for (auto s : common_stations(ctx, driver, riders, type)) {
      auto order = riders;
      do {
        RoutePlan plan{type, s, order};
        if (auto timing = evaluate_plan(ctx, d, plan)) return make_match(ctx, driver, plan, std::move(*timing));
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
  return std::nullopt;
}

/// Tries to serve match.riders plus j with the same driver.
inline std::optional<FeasibleMatch> feasible_insert(const MatchContext& ctx, const FeasibleMatch& match, TripId j) {
  const auto& d = ctx.trip(match.driver);
  if (static_cast<int>(match.riders.size()) >= d.n) {
    throw InvalidInput("feasible_insert called on a match that already fills the vehicle");
  }
  if (std::find(match.riders.begin(), match.riders.end(), j) != match.riders.end()) {
    throw InvalidInput("rider " + std::to_string(j) + " is already in the match");
  }
  if (!ctx.trip(j).is_rider()) throw InvalidInput("trip " + std::to_string(j) + " is not a rider");
  auto riders = match.riders;
  riders.push_back(j);
  return best_match(ctx, match.driver, riders);
}

namespace detail {

inline bool plan_less(const RoutePlan& a, const RoutePlan& b) {
  if (a.type != b.type) return a.type < b.type;
  if (a.station != b.station) return a.station < b.station;
  return a.order < b.order;
}

}  // namespace detail

/// Algorithm 1 over all driver/rider pairs, drivers then riders ascending by id.
inline Hypergraph phase_one(const MatchContext& ctx) {
  Hypergraph h;
  for (auto i : ctx.driver_ids()) {
    for (auto j : ctx.rider_ids()) {
      if (auto m = best_match(ctx, i, {j})) h.add(std::move(*m));
    }
  }
  return h;
}

/// Prunes base matches under (x%, y, z); the y cap is applied by phase_two.
inline Hypergraph reduce_base_matches(const Hypergraph& base, const ReductionConfig& cfg, const MatchContext& ctx) {
  cfg.validate();
  std::map<TripId, std::vector<EdgeId>> by_driver;
  std::unordered_map<TripId, int> count;
  for (std::size_t e = 0; e < base.size(); ++e) {
    const auto& m = base.edges()[e];
    if (m.riders.size() != 1) throw InvalidInput("reduce_base_matches expects base matches only");
    by_driver[m.driver].push_back(static_cast<EdgeId>(e));
    ++count[m.riders[0]];
  }
  std::vector<TripId> order;
  for (const auto& [d, es] : by_driver) order.push_back(d);
  std::stable_sort(order.begin(), order.end(),
                   [&](TripId a, TripId b) { return by_driver[a].size() > by_driver[b].size(); });

  std::vector<char> removed(base.size(), 0);
  auto rider_of = [&](EdgeId e) { return base.edge(e).riders[0]; };
  for (auto i : order) {
    auto es = by_driver[i];
    if (es.size() < 10) continue;
    const auto target = static_cast<std::size_t>(std::ceil(cfg.x_pct / 100.0 * static_cast<double>(es.size()) - 1e-9));
    std::stable_sort(es.begin(), es.end(), [&](EdgeId a, EdgeId b) { return count[rider_of(a)] > count[rider_of(b)]; });
    std::vector<EdgeId> kept;
    for (auto e : es) {
      auto j = rider_of(e);
      if (cfg.z != INT_MAX && count[j] - 1 >= cfg.z) {
        removed[static_cast<std::size_t>(e)] = 1;
        --count[j];
      } else {
        kept.push_back(e);
      }
    }
    if (kept.size() > target) {
      const auto& oi = ctx.trip(i).o;
      std::stable_sort(kept.begin(), kept.end(), [&](EdgeId a, EdgeId b) {
        return ctx.net().travel_time(oi, ctx.trip(rider_of(a)).o) > ctx.net().travel_time(oi, ctx.trip(rider_of(b)).o);
      });
      for (std::size_t k = 0; k + target < kept.size(); ++k) {
        removed[static_cast<std::size_t>(kept[k])] = 1;
        --count[rider_of(kept[k])];
      }
    }
  }
  Hypergraph out(base.is_abstract());
  for (std::size_t e = 0; e < base.size(); ++e) {
    if (!removed[e]) out.add(base.edges()[e]);
  }
  return out;
}

/// Algorithm 2. Extends each driver's rider sets up to min(delta_i, n_i)
/// riders; a set is tried only from its largest-id-removed subset and only if
/// all its one-smaller subsets are present. Each driver keeps at most y
/// matches overall (base matches included), in generation order.
inline Hypergraph phase_two(const Hypergraph& base, const MatchContext& ctx, int y_cap = INT_MAX) {
  if (y_cap < 1) throw InvalidInput("y cap must be at least 1");
  std::map<TripId, std::vector<EdgeId>> by_driver;
  for (std::size_t e = 0; e < base.size(); ++e) {
    const auto& m = base.edges()[e];
    if (m.riders.size() != 1) throw InvalidInput("phase_two expects base matches only");
    by_driver[m.driver].push_back(static_cast<EdgeId>(e));
  }

  Hypergraph out(base.is_abstract());
  for (const auto& [i, base_edges] : by_driver) {
    const auto& d = ctx.trip(i);
    using Set = std::vector<TripId>;
    std::map<Set, std::vector<RoutePlan>> memo_prev;
    std::vector<Set> level_prev;
    std::vector<TripId> singles;
    int count = 0;
    for (auto e : base_edges) {
      if (count >= y_cap) break;
      const auto& m = base.edge(e);
      out.add(m);
      ++count;
      level_prev.push_back(m.riders);
      singles.push_back(m.riders[0]);
      memo_prev[m.riders] = all_feasible_plans(ctx, i, m.riders);
    }
    std::sort(singles.begin(), singles.end());

    const int p_max = std::min(d.delta, d.n);
    for (int p = 2; p <= p_max && !level_prev.empty() && count < y_cap; ++p) {
      std::map<Set, std::vector<RoutePlan>> memo_next;
      std::vector<Set> level_next;
      for (const auto& sigma : level_prev) {
        if (count >= y_cap) break;
        auto first = std::upper_bound(singles.begin(), singles.end(), sigma.back());
        for (auto it = first; it != singles.end() && count < y_cap; ++it) {
          const TripId j = *it;
          bool closed = true;
          for (std::size_t q = 0; q < sigma.size() && closed; ++q) {
            Set sub = sigma;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(q));
            sub.push_back(j);
            closed = memo_prev.count(sub) > 0;
          }
          if (!closed) continue;

          std::vector<RoutePlan> plans;
          std::optional<PlanTiming> best_timing;
          for (const auto& known : memo_prev.at(sigma)) {
            if (!ctx.has_station(j, known.type, known.station)) continue;
            for (std::size_t pos = 0; pos <= known.order.size(); ++pos) {
              RoutePlan plan{known.type, known.station, known.order};
              plan.order.insert(plan.order.begin() + static_cast<std::ptrdiff_t>(pos), j);
              if (auto timing = evaluate_plan(ctx, d, plan)) {
                if (plans.empty() || detail::plan_less(plan, plans.front())) {
                  best_timing = std::move(timing);
                  plans.insert(plans.begin(), std::move(plan));
                } else {
                  plans.push_back(std::move(plan));
                }
              }
            }
          }
          if (plans.empty()) continue;
          Set grown = sigma;
          grown.push_back(j);
          out.add(make_match(ctx, i, plans.front(), std::move(*best_timing)));
          ++count;
          level_next.push_back(grown);
          memo_next.emplace(std::move(grown), std::move(plans));
        }
      }
      memo_prev = std::move(memo_next);
      level_prev = std::move(level_next);
    }
  }
  return out;
}

struct MatchBuildResult {
  Hypergraph base;
  Hypergraph reduced;
  Hypergraph final_graph;
  double phase_one_seconds = 0.0;
  double phase_two_seconds = 0.0;
};

/// phase_one, reduce_base_matches and phase_two in sequence.
inline MatchBuildResult build_matches(const MatchContext& ctx, const ReductionConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  MatchBuildResult r;
  auto t0 = Clock::now();
  r.base = phase_one(ctx);
  auto t1 = Clock::now();
  r.reduced = reduce_base_matches(r.base, cfg, ctx);
  r.final_graph = phase_two(r.reduced, ctx, cfg.y);
  auto t2 = Clock::now();
  r.phase_one_seconds = std::chrono::duration<double>(t1 - t0).count();
  r.phase_two_seconds = std::chrono::duration<double>(t2 - t1).count();
  return r;
}

}  // namespace mtr
