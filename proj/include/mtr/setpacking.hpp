#pragma once

// Weighted independent set view of a hypergraph: one vertex per hyperedge,
// adjacent when the hyperedges share a trip.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtr/hypergraph.hpp"
#include "mtr/solvers.hpp"
#include "mtr/types.hpp"

namespace mtr {

struct ConflictGraph {
  std::vector<int> weight;                 // w(v) = w(e)
  std::vector<std::vector<int>> adjacent;  // ascending, no self loops
  int max_capacity = 0;                    // K, the largest rider count of any edge

  [[nodiscard]] std::size_t size() const { return weight.size(); }
  [[nodiscard]] bool adjacent_to(int u, int v) const {
    const auto& a = adjacent[static_cast<std::size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
  }
  [[nodiscard]] std::size_t pair_count() const {
    std::size_t s = 0;
    for (const auto& a : adjacent) s += a.size();
    return s / 2;
  }
};

inline constexpr std::size_t kDefaultPairBudget = 50'000'000;

inline ConflictGraph to_conflict_graph(const Hypergraph& h, std::size_t pair_budget = kDefaultPairBudget) {
  ConflictGraph g;
  g.weight.reserve(h.size());
  g.adjacent.resize(h.size());
  std::size_t directed = 0;
  for (std::size_t e = 0; e < h.size(); ++e) {
    g.weight.push_back(h.weight(static_cast<EdgeId>(e)));
    g.max_capacity = std::max(g.max_capacity, g.weight.back());
    auto& adj = g.adjacent[e];
    for (auto v : h.vertices(static_cast<EdgeId>(e))) {
      for (auto f : h.incident_to_vertex(v)) {
        if (f != static_cast<EdgeId>(e)) adj.push_back(f);
      }
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    directed += adj.size();
    if (directed / 2 > pair_budget) {
      throw ResourceLimit("conflict graph exceeds the pair budget of " + std::to_string(pair_budget) +
                          " adjacent pairs (" + std::to_string(h.size()) + " matches); use impgreedy or exact instead");
    }
  }
  return g;
}

inline bool is_independent(const ConflictGraph& g, const std::vector<int>& set) {
  std::vector<char> in(g.size(), 0);
  for (auto v : set) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.size() || in[static_cast<std::size_t>(v)]) return false;
    in[static_cast<std::size_t>(v)] = 1;
  }
  for (auto v : set) {
    for (auto u : g.adjacent[static_cast<std::size_t>(v)]) {
      if (in[static_cast<std::size_t>(u)]) return false;
    }
  }
  return true;
}

inline long long set_weight(const ConflictGraph& g, const std::vector<int>& set) {
  long long s = 0;
  for (auto v : set) s += g.weight[static_cast<std::size_t>(v)];
  return s;
}

/// Heaviest vertex first (lowest id on ties), dropping its neighbours.
inline std::vector<int> greedy_mwis(const ConflictGraph& g) {
  std::vector<int> order(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) order[v] = static_cast<int>(v);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.weight[static_cast<std::size_t>(a)] > g.weight[static_cast<std::size_t>(b)];
  });
  std::vector<char> blocked(g.size(), 0);
  std::vector<int> out;
  for (auto v : order) {
    if (blocked[static_cast<std::size_t>(v)]) continue;
    out.push_back(v);
    blocked[static_cast<std::size_t>(v)] = 1;
    for (auto u : g.adjacent[static_cast<std::size_t>(v)]) blocked[static_cast<std::size_t>(u)] = 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class SearchMode : std::uint8_t { any, best, square };

inline SearchMode search_mode_from_string(const std::string& s) {
  if (s == "any") return SearchMode::any;
  if (s == "best") return SearchMode::best;
  if (s == "square") return SearchMode::square;
  throw InvalidInput("unknown local search mode '" + s + "'");
}

struct LocalSearchOptions {
  SearchMode mode = SearchMode::any;
  double improve_time_limit = 10.0;  // seconds per improvement; <= 0 for none
  double alpha_factor = 1.0 + 1e-9;
  int max_talons = 0;                // 0: K + 1 from the graph
};

struct LocalSearchStats {
  int improvements = 0;
  bool timed_out = false;
};

namespace detail {

class ClawSearch {
 public:
  ClawSearch(const ConflictGraph& g, std::vector<int> start, const LocalSearchOptions& opt)
      : g_(g), opt_(opt), in_(g.size(), 0), stamp_(g.size(), 0), block_(g.size(), 0) {
    for (auto v : start) in_[static_cast<std::size_t>(v)] = 1;
    k_ = opt.max_talons > 0 ? opt.max_talons : g.max_capacity + 1;
  }

  LocalSearchStats run() {
    LocalSearchStats stats;
    for (;;) {
      deadline_ = opt_.improve_time_limit > 0
                      ? std::optional(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                         std::chrono::duration<double>(opt_.improve_time_limit)))
                      : std::nullopt;
      timed_out_ = false;
      best_.clear();
      best_gain_ = 0.0;
      found_ = false;
      for (std::size_t c = 0; c < g_.size() && !stop_scan(); ++c) scan_center(static_cast<int>(c));
      if (timed_out_) {
        stats.timed_out = true;
        break;
      }
      if (!found_) break;
      apply(best_);
      ++stats.improvements;
    }
    return stats;
  }

  [[nodiscard]] std::vector<int> result() const {
    std::vector<int> out;
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (in_[v]) out.push_back(static_cast<int>(v));
    }
    return out;
  }

 private:
  using Clock = std::chrono::steady_clock;

  [[nodiscard]] bool stop_scan() const { return timed_out_ || (found_ && opt_.mode != SearchMode::best); }

  void scan_center(int c) {
    cand_.clear();
    if (!in_[static_cast<std::size_t>(c)]) cand_.push_back(c);
    for (auto u : g_.adjacent[static_cast<std::size_t>(c)]) {
      if (!in_[static_cast<std::size_t>(u)]) cand_.push_back(u);
    }
    std::sort(cand_.begin(), cand_.end());
    chosen_.clear();
    extend(0);
  }

  void extend(std::size_t from) {
    for (std::size_t k = from; k < cand_.size() && !stop_scan(); ++k) {
      int v = cand_[k];
      if (block_[static_cast<std::size_t>(v)]) continue;
      if (deadline_ && (++ticks_ & 255) == 0 && Clock::now() > *deadline_) {
        timed_out_ = true;
        return;
      }
      chosen_.push_back(v);
      for (auto u : g_.adjacent[static_cast<std::size_t>(v)]) ++block_[static_cast<std::size_t>(u)];
      test(chosen_);
      if (static_cast<int>(chosen_.size()) < k_) extend(k + 1);
      for (auto u : g_.adjacent[static_cast<std::size_t>(v)]) --block_[static_cast<std::size_t>(u)];
      chosen_.pop_back();
    }
  }

  void test(const std::vector<int>& talons) {
    ++epoch_;
    double gain_sq = 0.0, lose_sq = 0.0;
    long long gain = 0, lose = 0;
    for (auto t : talons) {
      double w = g_.weight[static_cast<std::size_t>(t)];
      gain_sq += w * w;
      gain += g_.weight[static_cast<std::size_t>(t)];
      for (auto u : g_.adjacent[static_cast<std::size_t>(t)]) {
        auto U = static_cast<std::size_t>(u);
        if (!in_[U] || stamp_[U] == epoch_) continue;
        stamp_[U] = epoch_;
        double wu = g_.weight[U];
        lose_sq += wu * wu;
        lose += g_.weight[U];
      }
    }
    if (!(gain_sq > opt_.alpha_factor * lose_sq) || gain < lose) return;
    double delta = gain_sq - lose_sq;
    if (!found_ || delta > best_gain_) {
      found_ = true;
      best_gain_ = delta;
      best_ = talons;
    }
  }

  void apply(const std::vector<int>& talons) {
    for (auto t : talons) {
      for (auto u : g_.adjacent[static_cast<std::size_t>(t)]) in_[static_cast<std::size_t>(u)] = 0;
    }
    for (auto t : talons) in_[static_cast<std::size_t>(t)] = 1;
  }

  const ConflictGraph& g_;
  LocalSearchOptions opt_;
  int k_ = 1;
  std::vector<char> in_;
  std::vector<std::uint32_t> stamp_;
  std::vector<int> block_;
  std::uint32_t epoch_ = 0;
  std::vector<int> cand_, chosen_, best_;
  double best_gain_ = 0.0;
  bool found_ = false;
  bool timed_out_ = false;
  std::uint64_t ticks_ = 0;
  std::optional<Clock::time_point> deadline_;
};

}  // namespace detail

/// Claw local search from an independent set. A talon set T (independent,
/// at most k vertices from the closed neighbourhood of a center, outside I)
/// improves I when sum w(T)^2 > alpha * sum w(N(T) ∩ I)^2 and it does not
/// lower the total weight. Modes any/square apply the first improvement in
/// (center id, lexicographic talon) order; best applies the largest
/// squared gain of a full scan.
inline std::vector<int> local_search(const ConflictGraph& g, const std::vector<int>& start,
                                     const LocalSearchOptions& opt = {}, LocalSearchStats* stats = nullptr) {
  if (!(opt.alpha_factor > 1.0)) throw InvalidInput("alpha_factor must exceed 1");
  if (!is_independent(g, start)) throw InvalidInput("local search needs an independent starting set");
  detail::ClawSearch search(g, start, opt);
  auto st = search.run();
  if (stats) *stats = st;
  return search.result();
}

/// Edge ids of a vertex set, as a Solution over h.
inline Solution solution_from_vertices(const Hypergraph& h, const std::vector<int>& set, std::string solver) {
  std::vector<EdgeId> edges(set.begin(), set.end());
  return make_solution(h, std::move(edges), std::move(solver));
}

/// Greedy on the conflict graph.
inline Solution greedy_setpacking(const Hypergraph& h, std::size_t pair_budget = kDefaultPairBudget) {
  auto t0 = std::chrono::steady_clock::now();
  auto g = to_conflict_graph(h, pair_budget);
  auto s = solution_from_vertices(h, greedy_mwis(g), "greedy");
  s.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

/// Greedy followed by claw local search (AnyImp, BestImp or SquareImp).
inline Solution local_search_setpacking(const Hypergraph& h, SearchMode mode, double improve_time_limit,
                                        double alpha_factor, std::size_t pair_budget = kDefaultPairBudget) {
  auto t0 = std::chrono::steady_clock::now();
  auto g = to_conflict_graph(h, pair_budget);
  LocalSearchOptions opt;
  opt.mode = mode;
  opt.improve_time_limit = improve_time_limit;
  opt.alpha_factor = alpha_factor;
  auto set = local_search(g, greedy_mwis(g), opt);
  const char* name = mode == SearchMode::any ? "anyimp" : mode == SearchMode::best ? "bestimp" : "squareimp";
  auto s = solution_from_vertices(h, set, name);
  s.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace mtr
