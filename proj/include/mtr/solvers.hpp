#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtr/hypergraph.hpp"
#include "mtr/lp.hpp"
#include "mtr/types.hpp"

namespace mtr {

/// A set of pairwise disjoint matches.
struct Solution {
  std::vector<EdgeId> matches;  // ascending
  std::vector<TripId> served;   // ascending
  int value = 0;
  std::string solver;
  double elapsed = 0.0;
  bool optimal = false;
};

struct FractionalSolution {
  std::vector<double> x;  // per edge id
  double objective = 0.0;
};

/// Fills served and value from the chosen edges; does not check disjointness.
inline Solution make_solution(const Hypergraph& h, std::vector<EdgeId> matches, std::string solver) {
  Solution s;
  std::sort(matches.begin(), matches.end());
  for (auto e : matches) {
    const auto& m = h.edge(e);
    s.served.insert(s.served.end(), m.riders.begin(), m.riders.end());
  }
  std::sort(s.served.begin(), s.served.end());
  s.value = static_cast<int>(s.served.size());
  s.matches = std::move(matches);
  s.solver = std::move(solver);
  return s;
}

inline nlohmann::json to_json(const Solution& s) {
  return {{"matches", s.matches}, {"served", s.served}, {"value", s.value},
          {"solver", s.solver}, {"elapsed", s.elapsed}, {"optimal", s.optimal}};
}

inline Solution solution_from_json(const nlohmann::json& j) {
  Solution s;
  s.matches = j.at("matches").get<std::vector<EdgeId>>();
  s.served = j.value("served", std::vector<TripId>{});
  s.value = j.value("value", static_cast<int>(s.served.size()));
  s.solver = j.value("solver", std::string());
  s.elapsed = j.value("elapsed", 0.0);
  s.optimal = j.value("optimal", false);
  return s;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// LP over a subset of edges; rows are the vertices those edges touch.
inline lp::Result solve_restricted_lp(const Hypergraph& h, const std::vector<EdgeId>& active) {
  std::vector<int> row_of(h.vertex_count(), -1);
  lp::Problem prob;
  for (auto e : active) {
    lp::Column col;
    col.cost = h.weight(e);
    for (auto v : h.vertices(e)) {
      auto& r = row_of[static_cast<std::size_t>(v)];
      if (r < 0) r = prob.rows++;
      col.entries.emplace_back(r, 1.0);
    }
    prob.columns.push_back(std::move(col));
  }
  prob.rhs.assign(static_cast<std::size_t>(prob.rows), 1.0);
  return lp::solve(prob);
}

/// Connected components of the edge set (edges sharing a vertex), each in
/// ascending edge id order, components ordered by their smallest edge.
inline std::vector<std::vector<EdgeId>> components(const Hypergraph& h) {
  std::vector<int> parent(h.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (std::size_t e = 0; e < h.size(); ++e) {
    auto vs = h.vertices(static_cast<EdgeId>(e));
    for (std::size_t k = 1; k < vs.size(); ++k) {
      int a = find(vs[0]), b = find(vs[k]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::vector<int> comp_of_root(h.vertex_count(), -1);
  std::vector<std::vector<EdgeId>> out;
  for (std::size_t e = 0; e < h.size(); ++e) {
    int root = find(h.vertices(static_cast<EdgeId>(e))[0]);
    auto& c = comp_of_root[static_cast<std::size_t>(root)];
    if (c < 0) {
      c = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(c)].push_back(static_cast<EdgeId>(e));
  }
  return out;
}

/// Greedy by weight (descending) then id over a subset of edges.
inline std::vector<EdgeId> greedy_pick(const Hypergraph& h, std::vector<EdgeId> active) {
  std::stable_sort(active.begin(), active.end(), [&](EdgeId a, EdgeId b) { return h.weight(a) > h.weight(b); });
  std::vector<char> used(h.vertex_count(), 0);
  std::vector<EdgeId> out;
  for (auto e : active) {
    auto vs = h.vertices(e);
    if (std::any_of(vs.begin(), vs.end(), [&](int v) { return used[static_cast<std::size_t>(v)] != 0; })) continue;
    for (auto v : vs) used[static_cast<std::size_t>(v)] = 1;
    out.push_back(e);
  }
  return out;
}

}  // namespace detail

/// LP relaxation with one packing row per trip (drivers and riders).
inline FractionalSolution solve_lp(const Hypergraph& h) {
  FractionalSolution f;
  f.x.assign(h.size(), 0.0);
  for (const auto& comp : detail::components(h)) {
    auto r = detail::solve_restricted_lp(h, comp);
    for (std::size_t k = 0; k < comp.size(); ++k) f.x[static_cast<std::size_t>(comp[k])] = r.x[k];
  }
  for (std::size_t e = 0; e < h.size(); ++e) f.objective += h.weight(static_cast<EdgeId>(e)) * f.x[e];
  return f;
}

/// Repeatedly takes an edge with the most riders (lowest id on ties) and
/// drops every edge sharing a trip with it.
inline Solution imp_greedy(const Hypergraph& h) {
  auto t0 = detail::Clock::now();
  int max_w = 0;
  for (const auto& m : h.edges()) max_w = std::max(max_w, m.weight());
  // Bucket by weight: a sweep in (weight desc, id asc) order picks exactly the
  // argmax edge of the remaining graph at each step.
  std::vector<std::vector<EdgeId>> bucket(static_cast<std::size_t>(max_w + 1));
  for (std::size_t e = 0; e < h.size(); ++e) bucket[static_cast<std::size_t>(h.weight(static_cast<EdgeId>(e)))].push_back(static_cast<EdgeId>(e));
  std::vector<char> used(h.vertex_count(), 0);
  std::size_t drivers_left = 0, riders_left = 0;
  for (std::size_t v = 0; v < h.vertex_count(); ++v) (h.vertex_is_driver(static_cast<int>(v)) ? drivers_left : riders_left)++;
  std::vector<EdgeId> picked;
  for (int w = max_w; w >= 1 && drivers_left > 0 && riders_left > 0; --w) {
    for (auto e : bucket[static_cast<std::size_t>(w)]) {
      auto vs = h.vertices(e);
      if (std::any_of(vs.begin(), vs.end(), [&](int v) { return used[static_cast<std::size_t>(v)] != 0; })) continue;
      for (auto v : vs) used[static_cast<std::size_t>(v)] = 1;
      --drivers_left;
      riders_left -= vs.size() - 1;
      picked.push_back(e);
      if (drivers_left == 0 || riders_left == 0) break;
    }
  }
  auto s = make_solution(h, std::move(picked), "impgreedy");
  s.elapsed = detail::seconds_since(t0);
  return s;
}

/// Branch and bound on the LP relaxation, per connected component.
/// Returns optimal=false when time_limit (seconds, <= 0 for none) expires.
inline Solution solve_exact(const Hypergraph& h, double time_limit = 0.0) {
  using detail::Clock;
  auto t0 = Clock::now();
  auto expired = [&] { return time_limit > 0.0 && detail::seconds_since(t0) > time_limit; };
  bool complete = true;
  std::vector<EdgeId> chosen;

  for (const auto& comp : detail::components(h)) {
    std::vector<EdgeId> best = detail::greedy_pick(h, comp);
    int best_value = 0;
    for (auto e : best) best_value += h.weight(e);

    struct Node {
      std::vector<EdgeId> active;
      std::vector<EdgeId> taken;
      int value;
    };
    std::vector<Node> stack;
    stack.push_back({comp, {}, 0});
    while (!stack.empty()) {
      if (expired()) {
        complete = false;
        break;
      }
      Node node = std::move(stack.back());
      stack.pop_back();
      if (node.active.empty()) {
        if (node.value > best_value) {
          best_value = node.value;
          best = node.taken;
        }
        continue;
      }
      auto lpres = detail::solve_restricted_lp(h, node.active);
      int bound = node.value + static_cast<int>(std::floor(lpres.objective + 1e-6));
      if (bound <= best_value) continue;

      std::size_t branch = node.active.size();
      double frac_dist = 1.0;
      for (std::size_t k = 0; k < node.active.size(); ++k) {
        double x = lpres.x[k];
        double dist = std::abs(x - 0.5);
        if (x > 1e-6 && x < 1.0 - 1e-6 && dist < frac_dist - 1e-12) {
          frac_dist = dist;
          branch = k;
        }
      }
      if (branch == node.active.size()) {
        int value = node.value;
        auto taken = node.taken;
        for (std::size_t k = 0; k < node.active.size(); ++k) {
          if (lpres.x[k] > 0.5) {
            taken.push_back(node.active[k]);
            value += h.weight(node.active[k]);
          }
        }
        if (value > best_value) {
          best_value = value;
          best = std::move(taken);
        }
        continue;
      }

      const EdgeId e = node.active[branch];
      Node skip{{}, node.taken, node.value};
      for (auto f : node.active) {
        if (f != e) skip.active.push_back(f);
      }
      std::vector<char> blocked(h.vertex_count(), 0);
      for (auto v : h.vertices(e)) blocked[static_cast<std::size_t>(v)] = 1;
      Node take{{}, node.taken, node.value + h.weight(e)};
      take.taken.push_back(e);
      for (auto f : node.active) {
        auto vs = h.vertices(f);
        if (std::none_of(vs.begin(), vs.end(), [&](int v) { return blocked[static_cast<std::size_t>(v)] != 0; })) {
          take.active.push_back(f);
        }
      }
      stack.push_back(std::move(skip));
      stack.push_back(std::move(take));  // explored first
    }
    chosen.insert(chosen.end(), best.begin(), best.end());
  }
  auto s = make_solution(h, std::move(chosen), "exact");
  s.optimal = complete;
  s.elapsed = detail::seconds_since(t0);
  return s;
}

/// Randomized rounding: each driver keeps one edge drawn with probability
/// x_e; a rider drawn by several drivers stays only with the lowest driver
/// id; each shrunken rider set is mapped back to its (closure) edge.
inline Solution lpr_round(const Hypergraph& h, const FractionalSolution& frac, std::uint64_t seed) {
  auto t0 = detail::Clock::now();
  if (frac.x.size() != h.size()) throw InvalidInput("fractional solution does not match the hypergraph");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<TripId, EdgeId>> drawn;
  for (auto i : h.drivers()) {
    double u = unit(rng);
    double cum = 0.0;
    for (auto e : h.incident(i)) {
      double x = frac.x[static_cast<std::size_t>(e)];
      if (x <= 1e-9) continue;
      cum += x;
      if (u < cum) {
        drawn.emplace_back(i, e);
        break;
      }
    }
  }
  std::vector<char> taken(h.vertex_count(), 0);
  std::vector<EdgeId> picked;
  for (auto [i, e] : drawn) {
    std::vector<TripId> keep;
    for (auto r : h.edge(e).riders) {
      auto v = static_cast<std::size_t>(*h.vertex_of(r));
      if (taken[v]) continue;
      taken[v] = 1;
      keep.push_back(r);
    }
    if (keep.empty()) continue;
    auto sub = h.find(i, keep);
    if (!sub) throw InvalidInput("hypergraph is not downward closed; cannot round driver " + std::to_string(i));
    picked.push_back(*sub);
  }
  auto s = make_solution(h, std::move(picked), "lpr");
  s.elapsed = detail::seconds_since(t0);
  return s;
}

/// solve_lp followed by lpr_round.
inline Solution lpr(const Hypergraph& h, std::uint64_t seed) {
  auto t0 = detail::Clock::now();
  auto s = lpr_round(h, solve_lp(h), seed);
  s.elapsed = detail::seconds_since(t0);
  return s;
}

}  // namespace mtr
