#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtr/hypergraph.hpp"
#include "mtr/network.hpp"
#include "mtr/solvers.hpp"
#include "mtr/trips.hpp"
#include "mtr/types.hpp"

namespace mtr {

inline constexpr std::size_t kBruteForceCap = 22;

/// Exact optimum by exhaustive search over disjoint edge subsets.
inline int brute_force_opt(const Hypergraph& h, std::size_t cap = kBruteForceCap) {
  if (h.size() > cap) {
    throw ResourceLimit("brute force is capped at " + std::to_string(cap) + " edges (got " + std::to_string(h.size()) +
                        "); use solve_exact");
  }
  const auto n = h.size();
  std::vector<int> suffix(n + 1, 0);
  for (std::size_t e = n; e-- > 0;) suffix[e] = suffix[e + 1] + h.weight(static_cast<EdgeId>(e));
  std::vector<int> used(h.vertex_count(), 0);
  int best = 0;
  auto rec = [&](auto&& self, std::size_t e, int value) -> void {
    best = std::max(best, value);
    if (e == n || value + suffix[e] <= best) return;
    auto vs = h.vertices(static_cast<EdgeId>(e));
    if (std::none_of(vs.begin(), vs.end(), [&](int v) { return used[static_cast<std::size_t>(v)] != 0; })) {
      for (auto v : vs) used[static_cast<std::size_t>(v)] = 1;
      self(self, e + 1, value + h.weight(static_cast<EdgeId>(e)));
      for (auto v : vs) used[static_cast<std::size_t>(v)] = 0;
    }
    self(self, e + 1, value);
  };
  rec(rec, 0, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Three-dimensional matching

/// Elements of A, B and C are each numbered 0..q-1.
struct ThreeDMInstance {
  int q = 0;
  std::vector<std::array<int, 3>> triples;

  void validate() const {
    if (q < 1) throw InvalidInput("3DM instance needs q >= 1");
    for (const auto& t : triples) {
      for (int x : t) {
        if (x < 0 || x >= q) throw InvalidInput("3DM triple element out of range");
      }
    }
  }
};

/// Trip id of element k of set A (0), B (1) or C (2).
inline TripId three_dm_id(const ThreeDMInstance& inst, int set, int k) { return static_cast<TripId>(set * inst.q + k); }

/// Drivers are A (capacity 2), riders are B and C; each triple (a,b,c)
/// yields edges (a,{b,c}), (a,{b}) and (a,{c}). Repeated edges are merged.
inline Hypergraph from_3dm(const ThreeDMInstance& inst) {
  inst.validate();
  Hypergraph h(true);
  for (const auto& [a, b, c] : inst.triples) {
    TripId da = three_dm_id(inst, 0, a), rb = three_dm_id(inst, 1, b), rc = three_dm_id(inst, 2, c);
    for (auto riders : {std::vector<TripId>{rb, rc}, std::vector<TripId>{rb}, std::vector<TripId>{rc}}) {
      if (h.find(da, riders)) continue;
      FeasibleMatch m;
      m.driver = da;
      m.riders = riders;
      m.service_order = riders;
      h.add(std::move(m));
    }
  }
  return h;
}

/// Line format: q on the first line, then one "a b c" triple per line
/// (0-based); '#' starts a comment.
inline ThreeDMInstance parse_3dm(const std::string& text) {
  ThreeDMInstance inst;
  std::istringstream in(text);
  std::string line;
  bool have_q = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<long long> nums;
    long long v;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) throw InvalidInput("3DM line " + std::to_string(lineno) + ": expected integers");
    if (nums.empty()) continue;
    if (!have_q) {
      if (nums.size() != 1) throw InvalidInput("3DM line " + std::to_string(lineno) + ": expected q");
      inst.q = static_cast<int>(nums[0]);
      have_q = true;
      continue;
    }
    if (nums.size() != 3) throw InvalidInput("3DM line " + std::to_string(lineno) + ": expected a triple");
    inst.triples.push_back({static_cast<int>(nums[0]), static_cast<int>(nums[1]), static_cast<int>(nums[2])});
  }
  if (!have_q) throw InvalidInput("3DM input is empty");
  inst.validate();
  return inst;
}

inline std::string format_3dm(const ThreeDMInstance& inst) {
  std::ostringstream out;
  out << inst.q << '\n';
  for (const auto& [a, b, c] : inst.triples) out << a << ' ' << b << ' ' << c << '\n';
  return out.str();
}

/// Instance containing a hidden perfect matching plus `extra` random triples,
/// in shuffled order.
inline ThreeDMInstance random_perfect_3dm(int q, int extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> pb(static_cast<std::size_t>(q)), pc(static_cast<std::size_t>(q));
  std::iota(pb.begin(), pb.end(), 0);
  std::iota(pc.begin(), pc.end(), 0);
  std::shuffle(pb.begin(), pb.end(), rng);
  std::shuffle(pc.begin(), pc.end(), rng);
  ThreeDMInstance inst;
  inst.q = q;
  for (int k = 0; k < q; ++k) inst.triples.push_back({k, pb[static_cast<std::size_t>(k)], pc[static_cast<std::size_t>(k)]});
  std::uniform_int_distribution<int> pick(0, q - 1);
  for (int k = 0; k < extra; ++k) inst.triples.push_back({pick(rng), pick(rng), pick(rng)});
  std::shuffle(inst.triples.begin(), inst.triples.end(), rng);
  return inst;
}

// ---------------------------------------------------------------------------
// Independent verification

struct Verification {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline Verification fail(const std::string& what, const std::string& detail_text) {
  return {false, what + ": " + detail_text};
}

/// Replays one match forward in time. The driver leaves at m.departure and
/// waits wherever a rider is not yet available.
inline Verification replay(const RoadTransitNetwork& net, const FeasibleMatch& m, const Trip& drv,
                           const std::unordered_map<TripId, const Trip*>& trips) {
  const std::string tag = "match of driver " + std::to_string(m.driver);
  if (!net.is_station(m.station)) return fail("station", tag + " uses a non-station");
  if (m.departure < drv.alpha) return fail("driver window", tag + " departs before alpha");
  if (m.route.size() < 2 || m.route.front() != drv.o || m.route.back() != drv.d) {
    return fail("route", tag + " does not run from o to d");
  }
  if (m.service_order.size() != m.riders.size()) return fail("route", tag + " service order size mismatch");
  {
    auto sorted = m.service_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != m.riders) return fail("route", tag + " service order differs from riders");
  }
  std::vector<const Trip*> rs;
  for (auto id : m.service_order) rs.push_back(trips.at(id));

  // Stops the route must visit, in order.
  std::vector<NodeId> stops;
  if (m.type == MatchType::type1) {
    for (auto* r : rs) stops.push_back(r->o);
    stops.push_back(m.station);
  } else {
    stops.push_back(m.station);
    for (auto* r : rs) stops.push_back(r->d);
  }
  const bool on_path = !drv.p.empty() && m.route == drv.p;
  auto leg = [&](NodeId u, NodeId v) { return on_path ? net.edge_time(u, v) : net.travel_time(u, v); };
  // Arrival offsets (driving time since departure) at each route position.
  std::vector<Seconds> at(m.route.size(), 0);
  for (std::size_t k = 1; k < m.route.size(); ++k) at[k] = at[k - 1] + leg(m.route[k - 1], m.route[k]);
  std::vector<std::size_t> pos;
  std::size_t from = 1;
  for (auto s : stops) {
    std::size_t k = from;
    while (k < m.route.size() && m.route[k] != s) ++k;
    if (k == m.route.size()) return fail("route", tag + " does not visit its stops in order");
    pos.push_back(k);
    from = k;
  }
  if (!on_path && m.route.size() != stops.size() + 2) return fail("route", tag + " visits extra locations");

  Seconds wait = 0;
  std::vector<Seconds> duration(rs.size());
  std::vector<Seconds> arrival(rs.size());
  Seconds end_time = 0;
  if (m.type == MatchType::type1) {
    std::vector<Seconds> pickup(rs.size());
    for (std::size_t y = 0; y < rs.size(); ++y) {
      Seconds t = m.departure + at[pos[y]] + wait;
      if (t < rs[y]->alpha) {
        wait += rs[y]->alpha - t;
        t = rs[y]->alpha;
      }
      pickup[y] = t;
    }
    const Seconds at_s = m.departure + at[pos.back()] + wait;
    for (std::size_t y = 0; y < rs.size(); ++y) {
      Seconds transit = net.transit_duration(m.station, rs[y]->d);
      arrival[y] = at_s + transit;
      duration[y] = at_s - pickup[y] + transit;
    }
    end_time = m.departure + at.back() + wait;
  } else {
    Seconds meet = m.departure + at[pos[0]];
    for (auto* r : rs) meet = std::max(meet, r->alpha + net.transit_duration(r->o, m.station));
    wait = meet - (m.departure + at[pos[0]]);
    for (std::size_t y = 0; y < rs.size(); ++y) {
      Seconds reach = net.transit_duration(rs[y]->o, m.station);
      Seconds drop = m.departure + at[pos[y + 1]] + wait;
      arrival[y] = drop;
      duration[y] = reach + (drop - meet);
    }
    end_time = m.departure + at.back() + wait;
  }
  if (end_time > drv.beta) return fail("driver window", tag + " arrives after beta");
  if (end_time - m.departure > drv.gamma) return fail("driver duration", tag + " exceeds gamma");
  for (std::size_t y = 0; y < rs.size(); ++y) {
    const auto& r = *rs[y];
    const std::string rt = "rider " + std::to_string(r.id) + " in " + tag;
    if (arrival[y] > r.beta) return fail("rider window", rt + " arrives after beta");
    if (duration[y] > r.gamma) return fail("rider duration", rt + " exceeds gamma");
    double limit = r.theta * static_cast<double>(net.transit_duration(r.o, r.d));
    if (static_cast<double>(duration[y]) > limit + 1e-9) return fail("acceptable route", rt + " is not acceptable");
  }
  return {};
}

}  // namespace detail

/// Checks a solution against H and, for geometric instances, replays every
/// route against the trip constraints. Throws on a dangling edge id.
inline Verification verify_solution(const Hypergraph& h, const Solution& sol, const RoadTransitNetwork* net = nullptr,
                                    std::span<const Trip> trips = {}) {
  for (auto e : sol.matches) {
    if (e < 0 || static_cast<std::size_t>(e) >= h.size()) {
      throw InvalidInput("solution references edge " + std::to_string(e) + " which is not in the hypergraph");
    }
  }
  std::set<TripId> drivers, riders;
  for (auto e : sol.matches) {
    const auto& m = h.edge(e);
    if (!drivers.insert(m.driver).second) {
      return detail::fail("driver disjointness", "driver " + std::to_string(m.driver) + " serves two matches");
    }
    for (auto r : m.riders) {
      if (!riders.insert(r).second) {
        return detail::fail("rider disjointness", "rider " + std::to_string(r) + " is in two matches");
      }
    }
  }
  std::vector<TripId> served(riders.begin(), riders.end());
  if (sol.served != served) return detail::fail("served set", "served riders differ from the matches' riders");
  if (sol.value != static_cast<int>(served.size())) return detail::fail("value", "value differs from served count");
  if (h.is_abstract()) return {};
  if (!net) throw InvalidInput("verifying a geometric hypergraph needs the network");

  std::unordered_map<TripId, const Trip*> by_id;
  for (const auto& t : trips) by_id[t.id] = &t;
  for (auto e : sol.matches) {
    const auto& m = h.edge(e);
    auto it = by_id.find(m.driver);
    if (it == by_id.end() || !it->second->is_driver()) return detail::fail("trips", "unknown driver " + std::to_string(m.driver));
    const Trip& d = *it->second;
    for (auto r : m.riders) {
      auto rt = by_id.find(r);
      if (rt == by_id.end() || !rt->second->is_rider()) return detail::fail("trips", "unknown rider " + std::to_string(r));
      if (!rt->second->types.has(m.type)) return detail::fail("match type", "rider " + std::to_string(r) + " did not ask for this type");
    }
    if (!d.types.has(m.type)) return detail::fail("match type", "driver " + std::to_string(d.id) + " did not ask for this type");
    if (static_cast<int>(m.riders.size()) > d.n) return detail::fail("capacity", "driver " + std::to_string(d.id) + " is over capacity");
    std::set<NodeId> stops;
    for (auto r : m.riders) stops.insert(m.type == MatchType::type1 ? by_id[r]->o : by_id[r]->d);
    if (static_cast<int>(stops.size()) > d.delta) return detail::fail("stops", "driver " + std::to_string(d.id) + " makes too many stops");
    if (auto v = detail::replay(*net, m, d, by_id); !v) return v;
  }
  return {};
}

}  // namespace mtr
