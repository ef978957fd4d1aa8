#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mtr/types.hpp"

namespace mtr {

/// Hyperedge (i, J) together with the route that makes it feasible.
///
/// Type 1 routes are (o_i, o_j1, ..., o_jp, s, d_i); type 2 routes are
/// (o_i, s, d_j1, ..., d_jp, d_i). When the driver's preferred path is used the
/// route is that full node path instead. service_order lists riders in
/// pick-up (type 1) or drop-off (type 2) order. rider_durations[k] is the
/// combined ridesharing + transit travel time of riders[k].
struct FeasibleMatch {
  TripId driver = 0;
  std::vector<TripId> riders;  // ascending
  std::vector<NodeId> route;
  NodeId station = kNoNode;
  MatchType type = MatchType::type1;
  std::vector<TripId> service_order;
  Seconds departure = 0;  // driver's latest departure from o_i
  std::vector<Seconds> rider_durations;

  [[nodiscard]] int weight() const { return static_cast<int>(riders.size()); }
};

/// Bipartite hypergraph H(V, E) over trip ids. Vertices are exactly the trips
/// covered by some edge; each vertex also gets a dense index.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(bool abstract) : abstract_(abstract) {}

  /// Adds an edge; riders are sorted and must be nonempty, distinct and
  /// distinct from the driver. Duplicate (driver, riders) keys are rejected.
  EdgeId add(FeasibleMatch m) {
    if (m.riders.empty()) throw InvalidInput("a match needs at least one rider");
    std::sort(m.riders.begin(), m.riders.end());
    if (std::adjacent_find(m.riders.begin(), m.riders.end()) != m.riders.end()) {
      throw InvalidInput("a match lists a rider twice");
    }
    if (std::binary_search(m.riders.begin(), m.riders.end(), m.driver)) {
      throw InvalidInput("a match lists its driver as a rider");
    }
    auto key = key_of(m.driver, m.riders);
    if (index_.count(key)) throw InvalidInput("duplicate match for driver " + std::to_string(m.driver));
    auto id = static_cast<EdgeId>(edges_.size());
    index_.emplace(std::move(key), id);
    std::vector<int> verts;
    verts.push_back(touch(m.driver, true));
    for (auto r : m.riders) verts.push_back(touch(r, false));
    for (auto v : verts) incidence_[static_cast<std::size_t>(v)].push_back(id);
    edge_vertices_.push_back(std::move(verts));
    edges_.push_back(std::move(m));
    return id;
  }

  [[nodiscard]] bool is_abstract() const { return abstract_; }
  [[nodiscard]] std::size_t size() const { return edges_.size(); }
  [[nodiscard]] bool empty() const { return edges_.empty(); }
  [[nodiscard]] const FeasibleMatch& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  [[nodiscard]] const std::vector<FeasibleMatch>& edges() const { return edges_; }
  [[nodiscard]] int weight(EdgeId e) const { return edge(e).weight(); }

  [[nodiscard]] std::size_t vertex_count() const { return vertex_ids_.size(); }
  [[nodiscard]] TripId vertex_trip(int v) const { return vertex_ids_.at(static_cast<std::size_t>(v)); }
  [[nodiscard]] bool vertex_is_driver(int v) const { return vertex_driver_.at(static_cast<std::size_t>(v)) != 0; }
  [[nodiscard]] std::optional<int> vertex_of(TripId t) const {
    auto it = vertex_index_.find(t);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  /// Dense vertex indices of an edge, driver first.
  [[nodiscard]] std::span<const int> vertices(EdgeId e) const { return edge_vertices_.at(static_cast<std::size_t>(e)); }
  [[nodiscard]] std::span<const EdgeId> incident_to_vertex(int v) const { return incidence_.at(static_cast<std::size_t>(v)); }
  /// E_j: edges containing trip j (as driver or rider).
  [[nodiscard]] std::span<const EdgeId> incident(TripId t) const {
    auto v = vertex_of(t);
    if (!v) return {};
    return incidence_[static_cast<std::size_t>(*v)];
  }

  [[nodiscard]] std::vector<TripId> drivers() const { return collect(true); }
  [[nodiscard]] std::vector<TripId> riders() const { return collect(false); }

  [[nodiscard]] std::optional<EdgeId> find(TripId driver, std::vector<TripId> riders) const {
    std::sort(riders.begin(), riders.end());
    auto it = index_.find(key_of(driver, riders));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// First downward-closure violation, if any: an edge (i, J) whose subset
  /// J \ {q} is missing.
  [[nodiscard]] std::optional<std::string> closure_violation() const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& m = edges_[e];
      if (m.riders.size() < 2) continue;
      for (std::size_t k = 0; k < m.riders.size(); ++k) {
        auto sub = m.riders;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(k));
        if (!find(m.driver, sub)) {
          return "edge " + std::to_string(e) + " of driver " + std::to_string(m.driver) + " lacks the subset without rider " +
                 std::to_string(m.riders[k]);
        }
      }
    }
    return std::nullopt;
  }

 private:
  static std::vector<TripId> key_of(TripId driver, const std::vector<TripId>& riders) {
    std::vector<TripId> key;
    key.reserve(riders.size() + 1);
    key.push_back(driver);
    key.insert(key.end(), riders.begin(), riders.end());
    return key;
  }

  int touch(TripId t, bool driver) {
    auto [it, fresh] = vertex_index_.emplace(t, static_cast<int>(vertex_ids_.size()));
    if (fresh) {
      vertex_ids_.push_back(t);
      vertex_driver_.push_back(driver ? 1 : 0);
      incidence_.emplace_back();
    } else if ((vertex_driver_[static_cast<std::size_t>(it->second)] != 0) != driver) {
      throw InvalidInput("trip " + std::to_string(t) + " appears both as driver and rider");
    }
    return it->second;
  }

  [[nodiscard]] std::vector<TripId> collect(bool driver) const {
    std::vector<TripId> out;
    for (std::size_t v = 0; v < vertex_ids_.size(); ++v) {
      if ((vertex_driver_[v] != 0) == driver) out.push_back(vertex_ids_[v]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool abstract_ = false;
  std::vector<FeasibleMatch> edges_;
  std::vector<std::vector<int>> edge_vertices_;
  std::map<std::vector<TripId>, EdgeId> index_;
  std::unordered_map<TripId, int> vertex_index_;
  std::vector<TripId> vertex_ids_;
  std::vector<char> vertex_driver_;
  std::vector<std::vector<EdgeId>> incidence_;
};

inline nlohmann::json to_json(const FeasibleMatch& m) {
  return {{"driver", m.driver}, {"riders", m.riders}, {"route", m.route}, {"station", m.station},
          {"type", to_string(m.type)}, {"weight", m.weight()}, {"service_order", m.service_order},
          {"departure", m.departure}, {"rider_durations", m.rider_durations}};
}

inline FeasibleMatch feasible_match_from_json(const nlohmann::json& j) {
  FeasibleMatch m;
  m.driver = j.at("driver").get<TripId>();
  m.riders = j.at("riders").get<std::vector<TripId>>();
  m.route = j.value("route", std::vector<NodeId>{});
  m.station = j.value("station", kNoNode);
  m.type = match_type_from_string(j.value("type", std::string("type1")));
  m.service_order = j.value("service_order", m.riders);
  m.departure = j.value("departure", Seconds{0});
  m.rider_durations = j.value("rider_durations", std::vector<Seconds>{});
  if (j.contains("weight") && j.at("weight").get<int>() != static_cast<int>(m.riders.size())) {
    throw InvalidInput("edge weight must equal its rider count");
  }
  return m;
}

inline nlohmann::json to_json(const Hypergraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t e = 0; e < h.size(); ++e) {
    auto j = to_json(h.edges()[e]);
    j["id"] = e;
    edges.push_back(std::move(j));
  }
  return {{"abstract", h.is_abstract()}, {"edges", edges}};
}

inline Hypergraph hypergraph_from_json(const nlohmann::json& j) {
  try {
    Hypergraph h(j.value("abstract", false));
    for (const auto& e : j.at("edges")) h.add(feasible_match_from_json(e));
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed hypergraph: ") + e.what());
  }
}

}  // namespace mtr
