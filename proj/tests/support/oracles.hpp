#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "mtr/mtr.hpp"

namespace mtr::testing {

// ---------------------------------------------------------------------------
// Random abstract hypergraphs

struct RandomHypergraphSpec {
  int max_drivers = 6;
  int max_riders = 8;
  int max_capacity = 3;
  int max_edges = 20;
};

/// A downward-closed abstract hypergraph: drivers are ids 100.., riders 0..
/// Each driver gets random maximal rider sets whose subsets are all added,
/// skipping any set whose closure would exceed the edge budget.
inline Hypergraph random_closed_hypergraph(std::mt19937_64& rng, const RandomHypergraphSpec& spec = {}) {
  std::uniform_int_distribution<int> nd(1, spec.max_drivers), nr(1, spec.max_riders);
  const int drivers = nd(rng), riders = nr(rng);
  std::uniform_int_distribution<int> cap(1, spec.max_capacity), pick_r(0, riders - 1);
  std::set<std::pair<int, std::vector<int>>> keys;
  std::vector<std::pair<int, std::vector<int>>> order;
  int attempts = 0;
  while (static_cast<int>(keys.size()) < spec.max_edges && attempts++ < 200) {
    int i = std::uniform_int_distribution<int>(0, drivers - 1)(rng);
    int k = std::min(cap(rng), riders);
    std::set<int> s;
    while (static_cast<int>(s.size()) < k) s.insert(pick_r(rng));
    std::vector<int> top(s.begin(), s.end());
    std::vector<std::vector<int>> closure;
    for (unsigned mask = 1; mask < (1u << top.size()); ++mask) {
      std::vector<int> sub;
      for (std::size_t b = 0; b < top.size(); ++b) {
        if (mask & (1u << b)) sub.push_back(top[b]);
      }
      if (!keys.count({i, sub})) closure.push_back(sub);
    }
    if (static_cast<int>(keys.size() + closure.size()) > spec.max_edges) continue;
    std::sort(closure.begin(), closure.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (auto& sub : closure) {
      keys.insert({i, sub});
      order.emplace_back(i, sub);
    }
  }
  Hypergraph h(true);
  for (const auto& [i, sub] : order) {
    FeasibleMatch m;
    m.driver = 100 + i;
    m.riders.assign(sub.begin(), sub.end());
    h.add(m);
  }
  return h;
}

/// Arbitrary (not necessarily closed) abstract hypergraph with given sizes.
inline Hypergraph random_hypergraph(std::mt19937_64& rng, int drivers, int riders, int max_k, int edges) {
  Hypergraph h(true);
  std::uniform_int_distribution<int> pd(0, drivers - 1), pr(0, riders - 1), pk(1, max_k);
  std::set<std::pair<int, std::vector<int>>> seen;
  int attempts = 0;
  while (static_cast<int>(h.size()) < edges && attempts++ < edges * 20) {
    int i = pd(rng);
    std::set<int> s;
    int k = std::min(pk(rng), riders);
    while (static_cast<int>(s.size()) < k) s.insert(pr(rng));
    std::vector<int> v(s.begin(), s.end());
    if (!seen.insert({i, v}).second) continue;
    FeasibleMatch m;
    m.driver = 1'000'000 + i;
    m.riders.assign(v.begin(), v.end());
    h.add(m);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Set packing references

/// Exhaustive optimum over all disjoint edge subsets (small |E| only).
inline int exhaustive_opt(const Hypergraph& h) {
  const auto n = h.size();
  std::set<TripId> used;
  int best = 0;
  std::function<void(std::size_t, int)> rec = [&](std::size_t e, int value) {
    best = std::max(best, value);
    for (std::size_t f = e; f < n; ++f) {
      const auto& m = h.edge(static_cast<EdgeId>(f));
      std::vector<TripId> trips{m.driver};
      trips.insert(trips.end(), m.riders.begin(), m.riders.end());
      if (std::any_of(trips.begin(), trips.end(), [&](TripId t) { return used.count(t) > 0; })) continue;
      used.insert(trips.begin(), trips.end());
      rec(f + 1, value + m.weight());
      for (auto t : trips) used.erase(t);
    }
  };
  rec(0, 0);
  return best;
}

/// Repeatedly takes the heaviest edge disjoint from everything taken so
/// far, lowest id on ties.
inline int literal_greedy(const Hypergraph& h) {
  std::set<TripId> used;
  std::vector<char> taken(h.size(), 0);
  int value = 0;
  for (;;) {
    int best = -1;
    for (std::size_t e = 0; e < h.size(); ++e) {
      if (taken[e]) continue;
      const auto& m = h.edge(static_cast<EdgeId>(e));
      bool free = !used.count(m.driver);
      for (auto r : m.riders) free = free && !used.count(r);
      if (!free) continue;
      if (best < 0 || m.weight() > h.weight(best)) best = static_cast<int>(e);
    }
    if (best < 0) return value;
    taken[static_cast<std::size_t>(best)] = 1;
    const auto& m = h.edge(best);
    used.insert(m.driver);
    used.insert(m.riders.begin(), m.riders.end());
    value += m.weight();
  }
}

/// Every edge's rider subsets exist for the same driver.
inline bool exhaustively_closed(const Hypergraph& h) {
  for (const auto& m : h.edges()) {
    const auto k = m.riders.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      std::vector<TripId> sub;
      for (std::size_t b = 0; b < k; ++b) {
        if (mask & (1u << b)) sub.push_back(m.riders[b]);
      }
      if (!h.find(m.driver, sub)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// LP reference: vertex enumeration for max c x, A x <= b, x >= 0

inline double lp_vertex_enumeration(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                    const std::vector<double>& c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  // Constraint k < m is row k of A; k >= m is -x_{k-m} <= 0.
  auto row = [&](int k, int j) { return k < m ? A[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] : (k - m == j ? -1.0 : 0.0); };
  auto rhs = [&](int k) { return k < m ? b[static_cast<std::size_t>(k)] : 0.0; };
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == n) {
      std::vector<std::vector<double>> M(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n) + 1));
      for (int r = 0; r < n; ++r) {
        for (int j = 0; j < n; ++j) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = row(pick[static_cast<std::size_t>(r)], j);
        M[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] = rhs(pick[static_cast<std::size_t>(r)]);
      }
      for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
          if (std::abs(M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > std::abs(M[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)])) piv = r;
        }
        if (std::abs(M[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]) < 1e-10) return;
        std::swap(M[static_cast<std::size_t>(piv)], M[static_cast<std::size_t>(col)]);
        for (int r = 0; r < n; ++r) {
          if (r == col) continue;
          double f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
          for (int j = col; j <= n; ++j) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= f * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        }
      }
      std::vector<double> x(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = M[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)] / M[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
      for (int k = 0; k < m + n; ++k) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += row(k, j) * x[static_cast<std::size_t>(j)];
        if (lhs > rhs(k) + 1e-7) return;
      }
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      best = std::max(best, v);
      return;
    }
    for (int k = from; k < m + n; ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

/// The set packing LP of a hypergraph solved by vertex enumeration (small only).
inline double hypergraph_lp_reference(const Hypergraph& h) {
  std::vector<std::vector<double>> A(h.vertex_count(), std::vector<double>(h.size(), 0.0));
  std::vector<double> b(h.vertex_count(), 1.0), c;
  for (std::size_t e = 0; e < h.size(); ++e) {
    c.push_back(h.weight(static_cast<EdgeId>(e)));
    for (auto v : h.vertices(static_cast<EdgeId>(e))) A[static_cast<std::size_t>(v)][e] = 1.0;
  }
  return lp_vertex_enumeration(A, b, c);
}

// ---------------------------------------------------------------------------
// Network references

/// Single-source shortest car times by Bellman-Ford over the raw edge list.
inline std::vector<Seconds> bellman_ford(const NetworkParts& parts, NodeId source) {
  std::vector<Seconds> dist(parts.nodes.size(), kUnreachable);
  dist[static_cast<std::size_t>(source)] = 0;
  for (std::size_t round = 0; round + 1 < parts.nodes.size(); ++round) {
    bool changed = false;
    for (const auto& e : parts.edges) {
      auto du = dist[static_cast<std::size_t>(e.from)];
      if (du >= kUnreachable) continue;
      auto& dv = dist[static_cast<std::size_t>(e.to)];
      if (du + e.time < dv) {
        dv = du + e.time;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

/// Fastest transit duration by enumerating every simple path over the
/// consecutive-stop legs of all lines, with the home-stop access rule.
inline Seconds exhaustive_transit(const RoadTransitNetwork& net, NodeId o, NodeId d) {
  if (o == d) return 0;
  std::map<NodeId, std::vector<std::pair<NodeId, Seconds>>> adj;
  for (const auto& line : net.lines()) {
    for (std::size_t k = 1; k < line.stations.size(); ++k) {
      auto a = line.stations[k - 1], b = line.stations[k];
      auto eps = line.mode == TransitMode::rail ? net.parts().eps_rail : net.parts().eps_bus;
      adj[a].push_back({b, round_half_up(eps * static_cast<double>(net.travel_time(a, b)))});
      adj[b].push_back({a, round_half_up(eps * static_cast<double>(net.travel_time(b, a)))});
    }
  }
  auto attach = [&](NodeId v, bool entry) -> std::pair<NodeId, Seconds> {
    if (net.is_station(v)) return {v, 0};
    const auto& area = net.area(net.area_of(v));
    auto eps = area.role == AreaRole::urban ? net.parts().eps_bus : net.parts().eps_rail;
    auto car = entry ? net.travel_time(v, area.center) : net.travel_time(area.center, v);
    return {area.center, round_half_up(eps * static_cast<double>(car))};
  };
  auto [s, a] = attach(o, true);
  auto [t, e] = attach(d, false);
  Seconds best = kUnreachable;
  std::set<NodeId> on_path{s};
  std::function<void(NodeId, Seconds)> dfs = [&](NodeId u, Seconds cost) {
    if (u == t) {
      best = std::min(best, cost);
      return;
    }
    for (auto [v, w] : adj[u]) {
      if (on_path.count(v)) continue;
      on_path.insert(v);
      dfs(v, cost + w);
      on_path.erase(v);
    }
  };
  dfs(s, 0);
  return best >= kUnreachable ? kUnreachable : a + best + e;
}

// ---------------------------------------------------------------------------
// Departure-time reference

struct PickupRun {
  Seconds arrival_last = 0;  // arrival time at the final pick-up
  bool waited = false;
};

/// Drives legs from a departure time, waiting at a pick-up until its rider is ready.
inline PickupRun drive_pickups(Seconds depart, const std::vector<Seconds>& legs, const std::vector<Seconds>& rider_alpha) {
  PickupRun run;
  Seconds t = depart;
  for (std::size_t y = 0; y < rider_alpha.size(); ++y) {
    t += legs[y];
    if (t < rider_alpha[y]) {
      t = rider_alpha[y];
      run.waited = true;
    }
  }
  run.arrival_last = t;
  return run;
}

// ---------------------------------------------------------------------------
// Small geometric instances

/// A generation profile with a flat count curve.
inline GenerationProfile flat_profile(double per_interval) {
  auto g = default_generation_profile();
  g.count_curve.assign(static_cast<std::size_t>(g.intervals_per_day), per_interval);
  return g;
}

inline const RoadTransitNetwork& default_net() {
  static const RoadTransitNetwork net = build_network(1, default_network_spec());
  return net;
}

inline std::vector<Trip> all_trips(const TripBatch& b) {
  std::vector<Trip> all(b.riders);
  all.insert(all.end(), b.drivers.begin(), b.drivers.end());
  return all;
}

}  // namespace mtr::testing
