#pragma once

// Synthetic road network with a transit overlay.
//
// Car travel times are shortest paths over a directed road graph. Transit
// times use the simplified multiplier model: a rail or bus leg between two
// stops costs eps_mode * (car time between them), rounded half-up, with
// waiting and transfer time folded into eps. Every area has a home stop (its
// center node). A non-station node reaches the line network through a single
// access leg to its home stop; the leg is rail-mode for designated areas and
// bus-mode for urban ones.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtr/detail/lru_cache.hpp"
#include "mtr/types.hpp"

namespace mtr {

enum class AreaRole : std::uint8_t { hub, remote, urban };
enum class TransitMode : std::uint8_t { rail, bus };

inline std::string_view to_string(AreaRole r) {
  switch (r) {
    case AreaRole::hub: return "hub";
    case AreaRole::remote: return "remote";
    case AreaRole::urban: return "urban";
  }
  return "urban";
}

inline AreaRole area_role_from_string(std::string_view s) {
  if (s == "hub") return AreaRole::hub;
  if (s == "remote") return AreaRole::remote;
  if (s == "urban") return AreaRole::urban;
  throw InvalidInput("unknown area role '" + std::string(s) + "'");
}

inline bool is_designated(AreaRole r) { return r != AreaRole::urban; }

inline std::string_view to_string(TransitMode m) { return m == TransitMode::rail ? "rail" : "bus"; }

inline TransitMode transit_mode_from_string(std::string_view s) {
  if (s == "rail") return TransitMode::rail;
  if (s == "bus") return TransitMode::bus;
  throw InvalidInput("unknown transit mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Serialized network form

struct Node {
  std::int64_t x = 0;  // meters
  std::int64_t y = 0;
  int area = 0;
};

struct RoadEdge {
  NodeId from = 0;
  NodeId to = 0;
  Seconds time = 1;
};

struct Area {
  std::string name;
  AreaRole role = AreaRole::urban;
  int col = 0;
  int row = 0;
  NodeId center = 0;  // home stop
  std::vector<NodeId> nodes;
};

struct TransitLine {
  std::string name;
  TransitMode mode = TransitMode::rail;
  std::vector<NodeId> stations;
};

/// Everything needed to reconstruct a RoadTransitNetwork; this is exactly what
/// gets serialized.
struct NetworkParts {
  std::vector<Node> nodes;
  std::vector<RoadEdge> edges;
  std::vector<Area> areas;
  std::vector<TransitLine> lines;
  double eps_rail = 1.15;
  double eps_bus = 2.0;
};

struct TransitLeg {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  TransitMode mode = TransitMode::bus;
  Seconds duration = 0;
};

/// Public-transit-only route. Legs are contiguous and duration is their sum.
struct TransitRoute {
  std::vector<TransitLeg> legs;
  Seconds depart = 0;
  Seconds duration = 0;
};

namespace detail {

struct Csr {
  std::vector<std::int32_t> offsets;
  std::vector<NodeId> targets;
  std::vector<Seconds> weights;
};

inline Csr make_csr(std::size_t n, std::span<const RoadEdge> edges, bool reverse) {
  Csr g;
  g.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++g.offsets[static_cast<std::size_t>(reverse ? e.to : e.from) + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.targets.resize(edges.size());
  g.weights.resize(edges.size());
  auto fill = g.offsets;
  for (const auto& e : edges) {
    auto src = static_cast<std::size_t>(reverse ? e.to : e.from);
    auto slot = static_cast<std::size_t>(fill[src]++);
    g.targets[slot] = reverse ? e.from : e.to;
    g.weights[slot] = e.time;
  }
  return g;
}

inline std::vector<Seconds> dijkstra(const Csr& g, NodeId source) {
  const auto n = g.offsets.size() - 1;
  std::vector<Seconds> dist(n, kUnreachable);
  using Item = std::pair<Seconds, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[static_cast<std::size_t>(u)]) continue;
    for (auto k = g.offsets[static_cast<std::size_t>(u)]; k < g.offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      auto v = static_cast<std::size_t>(g.targets[static_cast<std::size_t>(k)]);
      auto nd = d + g.weights[static_cast<std::size_t>(k)];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, static_cast<NodeId>(v));
      }
    }
  }
  return dist;
}

}  // namespace detail

// ---------------------------------------------------------------------------

class RoadTransitNetwork {
 public:
  static constexpr std::size_t kDefaultCacheSources = 8192;

  explicit RoadTransitNetwork(NetworkParts parts, std::size_t cache_sources = kDefaultCacheSources)
      : parts_(std::move(parts)),
        cache_(std::make_shared<detail::LruCache<NodeId, std::shared_ptr<const std::vector<Seconds>>>>(
            cache_sources)) {
    validate_basic();
    forward_ = detail::make_csr(parts_.nodes.size(), parts_.edges, false);
    validate_connectivity();
    index_stations();
    validate_lines();
    build_line_graph();
  }

  [[nodiscard]] const NetworkParts& parts() const { return parts_; }
  [[nodiscard]] std::size_t node_count() const { return parts_.nodes.size(); }
  [[nodiscard]] const std::vector<Area>& areas() const { return parts_.areas; }
  [[nodiscard]] const std::vector<TransitLine>& lines() const { return parts_.lines; }
  [[nodiscard]] const std::vector<NodeId>& stations() const { return stations_; }
  [[nodiscard]] double eps(TransitMode m) const { return m == TransitMode::rail ? parts_.eps_rail : parts_.eps_bus; }

  [[nodiscard]] bool is_station(NodeId v) const {
    return valid_node(v) && station_slot_[static_cast<std::size_t>(v)] >= 0;
  }
  [[nodiscard]] int area_of(NodeId v) const { return node(v).area; }
  [[nodiscard]] const Area& area(int a) const { return parts_.areas.at(static_cast<std::size_t>(a)); }

  /// Areas closer than one macro cell in either direction (including
  /// diagonals) are adjacent; an area is adjacent to itself.
  [[nodiscard]] bool areas_adjacent(int a, int b) const {
    const auto& x = area(a);
    const auto& y = area(b);
    return std::abs(x.col - y.col) <= 1 && std::abs(x.row - y.row) <= 1;
  }

  /// Shortest car travel time u -> v.
  [[nodiscard]] Seconds travel_time(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    if (u == v) return 0;
    auto d = (*distances_from(u))[static_cast<std::size_t>(v)];
    if (d >= kUnreachable) {
      throw NoPathError("no road path from " + std::to_string(u) + " to " + std::to_string(v));
    }
    return d;
  }

  /// All shortest car travel times from u (kUnreachable where none).
  [[nodiscard]] std::shared_ptr<const std::vector<Seconds>> distances_from(NodeId u) const {
    check_node(u);
    if (auto hit = cache_->get(u)) return *hit;
    auto dist = std::make_shared<const std::vector<Seconds>>(detail::dijkstra(forward_, u));
    cache_->put(u, dist);
    return dist;
  }

  /// Car time along an explicit node path; consecutive nodes must share a road edge.
  [[nodiscard]] Seconds path_time(std::span<const NodeId> path) const {
    Seconds total = 0;
    for (std::size_t k = 1; k < path.size(); ++k) total += edge_time(path[k - 1], path[k]);
    return total;
  }

  [[nodiscard]] Seconds edge_time(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    Seconds best = kUnreachable;
    for (auto k = forward_.offsets[static_cast<std::size_t>(u)]; k < forward_.offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      if (forward_.targets[static_cast<std::size_t>(k)] == v) best = std::min(best, forward_.weights[static_cast<std::size_t>(k)]);
    }
    if (best >= kUnreachable) {
      throw InvalidInput("no road edge " + std::to_string(u) + " -> " + std::to_string(v));
    }
    return best;
  }

  /// Transit time between two stops that share a line of the given mode.
  [[nodiscard]] Seconds transit_time(NodeId s1, NodeId s2, TransitMode mode) const {
    if (!share_line(s1, s2, mode)) {
      throw InvalidInput("stations " + std::to_string(s1) + " and " + std::to_string(s2) +
                         " share no " + std::string(to_string(mode)) + " line");
    }
    return scaled(mode, travel_time(s1, s2));
  }

  [[nodiscard]] bool share_line(NodeId s1, NodeId s2, TransitMode mode) const {
    for (const auto& line : parts_.lines) {
      if (line.mode != mode) continue;
      bool a = std::find(line.stations.begin(), line.stations.end(), s1) != line.stations.end();
      bool b = std::find(line.stations.begin(), line.stations.end(), s2) != line.stations.end();
      if (a && b) return true;
    }
    return false;
  }

  /// Fastest public-transit duration o -> d; equal to fastest_transit_route(o, d, *).duration.
  [[nodiscard]] Seconds transit_duration(NodeId o, NodeId d) const {
    check_node(o);
    check_node(d);
    if (o == d) return 0;
    auto [entry, entry_cost] = entry_point(o);
    auto [exit, exit_cost] = exit_point(d);
    auto between = line_dist_[slot(entry) * stations_.size() + slot(exit)];
    if (between >= kUnreachable) {
      throw NoPathError("no transit path from " + std::to_string(o) + " to " + std::to_string(d));
    }
    return entry_cost + between + exit_cost;
  }

  [[nodiscard]] TransitRoute fastest_transit_route(NodeId o, NodeId d, Seconds depart) const {
    if (depart < 0) throw InvalidInput("departure time must be non-negative");
    TransitRoute route;
    route.depart = depart;
    route.duration = transit_duration(o, d);
    if (o == d) return route;
    auto [entry, entry_cost] = entry_point(o);
    auto [exit, exit_cost] = exit_point(d);
    if (entry != o) route.legs.push_back({o, entry, access_mode(o), entry_cost});
    auto n = stations_.size();
    for (auto cur = slot(entry), goal = slot(exit); cur != goal;) {
      auto nxt = static_cast<std::size_t>(line_next_[cur * n + goal]);
      const auto& leg = line_leg_[cur * n + nxt];
      route.legs.push_back({stations_[cur], stations_[nxt], leg.mode, leg.duration});
      cur = nxt;
    }
    if (exit != d) route.legs.push_back({exit, d, access_mode(d), exit_cost});
    return route;
  }

  /// Mode of the access/egress leg between a node and its home stop.
  [[nodiscard]] TransitMode access_mode(NodeId v) const {
    return is_designated(area(area_of(v)).role) ? TransitMode::rail : TransitMode::bus;
  }

  [[nodiscard]] NodeId home_stop(NodeId v) const { return area(area_of(v)).center; }

  /// Cost of a direct line leg (min over lines connecting the pair), or kUnreachable.
  [[nodiscard]] Seconds line_leg_time(NodeId a, NodeId b) const {
    if (!is_station(a) || !is_station(b)) return kUnreachable;
    return line_leg_[slot(a) * stations_.size() + slot(b)].duration;
  }

  [[nodiscard]] Seconds scaled(TransitMode mode, Seconds car_time) const {
    return round_half_up(eps(mode) * static_cast<double>(car_time));
  }

 private:
  struct LegInfo {
    Seconds duration = kUnreachable;
    TransitMode mode = TransitMode::bus;
  };

  [[nodiscard]] bool valid_node(NodeId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < parts_.nodes.size();
  }
  void check_node(NodeId v) const {
    if (!valid_node(v)) throw InvalidInput("node " + std::to_string(v) + " is not in the network");
  }
  [[nodiscard]] const Node& node(NodeId v) const {
    check_node(v);
    return parts_.nodes[static_cast<std::size_t>(v)];
  }
  [[nodiscard]] std::size_t slot(NodeId station) const {
    return static_cast<std::size_t>(station_slot_[static_cast<std::size_t>(station)]);
  }

  [[nodiscard]] std::pair<NodeId, Seconds> entry_point(NodeId o) const {
    if (is_station(o)) return {o, 0};
    auto home = home_stop(o);
    return {home, scaled(access_mode(o), travel_time(o, home))};
  }
  [[nodiscard]] std::pair<NodeId, Seconds> exit_point(NodeId d) const {
    if (is_station(d)) return {d, 0};
    auto home = home_stop(d);
    return {home, scaled(access_mode(d), travel_time(home, d))};
  }

  void validate_basic() {
    if (!(parts_.eps_rail > 1.0) || !(parts_.eps_bus > 1.0)) {
      throw InvalidInput("eps_rail and eps_bus must both exceed 1");
    }
    if (parts_.nodes.empty()) throw InvalidInput("network has no nodes");
    if (parts_.areas.empty()) throw InvalidInput("network has no areas");
    for (const auto& n : parts_.nodes) {
      if (n.area < 0 || static_cast<std::size_t>(n.area) >= parts_.areas.size()) {
        throw InvalidInput("node refers to unknown area");
      }
    }
    for (const auto& e : parts_.edges) {
      if (!valid_node(e.from) || !valid_node(e.to)) throw InvalidInput("road edge endpoint out of range");
      if (e.time <= 0) throw InvalidInput("road edge travel times must be positive integers");
    }
    for (std::size_t a = 0; a < parts_.areas.size(); ++a) {
      const auto& area = parts_.areas[a];
      if (!valid_node(area.center) || parts_.nodes[static_cast<std::size_t>(area.center)].area != static_cast<int>(a)) {
        throw InvalidInput("area '" + area.name + "' center is not one of its nodes");
      }
      for (auto v : area.nodes) {
        if (!valid_node(v) || parts_.nodes[static_cast<std::size_t>(v)].area != static_cast<int>(a)) {
          throw InvalidInput("area '" + area.name + "' lists a node of another area");
        }
      }
    }
  }

  void validate_connectivity() const {
    auto reverse = detail::make_csr(parts_.nodes.size(), parts_.edges, true);
    auto fwd = detail::dijkstra(forward_, 0);
    auto bwd = detail::dijkstra(reverse, 0);
    for (std::size_t v = 0; v < parts_.nodes.size(); ++v) {
      if (fwd[v] >= kUnreachable || bwd[v] >= kUnreachable) {
        throw InvalidInput("road graph is not strongly connected (node " + std::to_string(v) + ")");
      }
    }
  }

  void index_stations() {
    std::set<NodeId> all;
    for (const auto& line : parts_.lines) {
      if (line.stations.size() < 2) throw InvalidInput("line '" + line.name + "' needs at least two stations");
      for (std::size_t k = 0; k < line.stations.size(); ++k) {
        check_node(line.stations[k]);
        if (k > 0 && line.stations[k] == line.stations[k - 1]) {
          throw InvalidInput("line '" + line.name + "' repeats a station consecutively");
        }
        all.insert(line.stations[k]);
      }
    }
    stations_.assign(all.begin(), all.end());
    station_slot_.assign(parts_.nodes.size(), -1);
    for (std::size_t k = 0; k < stations_.size(); ++k) {
      station_slot_[static_cast<std::size_t>(stations_[k])] = static_cast<int>(k);
    }
  }

  void validate_lines() const {
    auto on_rail = [&](NodeId s) {
      return std::any_of(parts_.lines.begin(), parts_.lines.end(), [&](const TransitLine& l) {
        return l.mode == TransitMode::rail && std::find(l.stations.begin(), l.stations.end(), s) != l.stations.end();
      });
    };
    for (const auto& area : parts_.areas) {
      if (!is_station(area.center)) {
        throw InvalidInput("area '" + area.name + "' has no station at its center");
      }
      if (is_designated(area.role) && !on_rail(area.center)) {
        throw InvalidInput("designated area '" + area.name + "' is not on a rail line");
      }
    }
    // Every stop must reach the rail backbone through the line graph.
    const auto n = stations_.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& line : parts_.lines) {
      for (std::size_t k = 1; k < line.stations.size(); ++k) {
        auto a = slot(line.stations[k - 1]);
        auto b = slot(line.stations[k]);
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < n; ++k) {
      if (on_rail(stations_[k])) {
        seen[k] = 1;
        stack.push_back(k);
      }
    }
    if (stack.empty()) throw InvalidInput("network has no rail line");
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!seen[k]) {
        throw InvalidInput("station " + std::to_string(stations_[k]) + " is disconnected from the rail backbone");
      }
    }
  }

  void build_line_graph() {
    const auto n = stations_.size();
    line_leg_.assign(n * n, LegInfo{});
    for (std::size_t k = 0; k < n; ++k) line_leg_[k * n + k] = {0, TransitMode::rail};
    for (const auto& line : parts_.lines) {
      for (std::size_t k = 1; k < line.stations.size(); ++k) {
        auto a = line.stations[k - 1];
        auto b = line.stations[k];
        auto relax = [&](NodeId from, NodeId to) {
          auto cost = scaled(line.mode, travel_time(from, to));
          auto& leg = line_leg_[slot(from) * n + slot(to)];
          if (cost < leg.duration) leg = {cost, line.mode};
        };
        relax(a, b);
        relax(b, a);
      }
    }
    line_dist_.assign(n * n, kUnreachable);
    line_next_.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        line_dist_[i * n + j] = line_leg_[i * n + j].duration;
        if (line_dist_[i * n + j] < kUnreachable) line_next_[i * n + j] = static_cast<std::int32_t>(j);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        auto ik = line_dist_[i * n + k];
        if (ik >= kUnreachable) continue;
        for (std::size_t j = 0; j < n; ++j) {
          auto kj = line_dist_[k * n + j];
          if (kj >= kUnreachable) continue;
          if (ik + kj < line_dist_[i * n + j]) {
            line_dist_[i * n + j] = ik + kj;
            line_next_[i * n + j] = line_next_[i * n + k];
          }
        }
      }
    }
  }

  NetworkParts parts_;
  detail::Csr forward_;
  std::vector<NodeId> stations_;
  std::vector<int> station_slot_;
  std::vector<LegInfo> line_leg_;
  std::vector<Seconds> line_dist_;
  std::vector<std::int32_t> line_next_;
  std::shared_ptr<detail::LruCache<NodeId, std::shared_ptr<const std::vector<Seconds>>>> cache_;
};

// ---------------------------------------------------------------------------
// Synthetic construction

struct AreaSpec {
  std::string name;
  int col = 0;
  int row = 0;
  AreaRole role = AreaRole::urban;
};

struct LineSpec {
  std::string name;
  TransitMode mode = TransitMode::rail;
  std::vector<std::string> areas;  // stops at each area's center, in order
};

/// Layout of a synthetic network: areas sit on a macro grid, each area is a
/// small street grid, and neighbouring areas are joined by arterials.
struct NetworkSpec {
  int area_grid = 3;                 // street grid is area_grid x area_grid nodes
  double node_spacing_m = 600.0;
  double area_pitch_m = 3000.0;      // distance between neighbouring area centers
  double jitter_frac = 0.2;          // coordinate jitter as a fraction of node spacing
  double local_speed_mps = 8.33;
  double arterial_speed_mps = 13.9;
  double eps_rail = 1.15;
  double eps_bus = 2.0;
  bool auto_bus_feeders = true;      // urban areas off the rail network get a bus to the nearest rail stop
  std::vector<AreaSpec> areas;
  std::vector<LineSpec> lines;
};

/// 22-area layout: a downtown hub on the east edge, two remote airports, 19
/// urban areas, two rail lines from the airports to downtown; every urban
/// area reaches the rail backbone through a bus feeder.
inline NetworkSpec default_network_spec() {
  NetworkSpec spec;
  auto urban = [&](const char* name, int col, int row) { spec.areas.push_back({name, col, row, AreaRole::urban}); };
  spec.areas.push_back({"airport_nw", 0, 0, AreaRole::remote});
  urban("u01", 1, 0);
  urban("u02", 2, 0);
  urban("u03", 3, 0);
  urban("u04", 0, 1);
  urban("u05", 1, 1);
  urban("u06", 2, 1);
  urban("u07", 3, 1);
  urban("u08", 4, 1);
  urban("u09", 0, 2);
  urban("u10", 1, 2);
  urban("u11", 2, 2);
  urban("u12", 3, 2);
  spec.areas.push_back({"downtown", 4, 2, AreaRole::hub});
  urban("u13", 0, 3);
  urban("u14", 1, 3);
  urban("u15", 2, 3);
  urban("u16", 3, 3);
  urban("u17", 4, 3);
  spec.areas.push_back({"airport_sw", 1, 4, AreaRole::remote});
  urban("u18", 2, 4);
  urban("u19", 3, 4);
  spec.lines = {
      {"blue", TransitMode::rail, {"airport_nw", "downtown"}},
      {"orange", TransitMode::rail, {"airport_sw", "downtown"}},
  };
  return spec;
}

inline RoadTransitNetwork build_network(std::uint64_t seed, const NetworkSpec& spec) {
  if (spec.area_grid < 1) throw InvalidInput("area_grid must be at least 1");
  if (!(spec.local_speed_mps > 0) || !(spec.arterial_speed_mps > 0)) throw InvalidInput("speeds must be positive");
  int hubs = 0, remotes = 0, urbans = 0;
  std::map<std::string, int> by_name;
  std::map<std::pair<int, int>, int> by_cell;
  for (std::size_t a = 0; a < spec.areas.size(); ++a) {
    const auto& s = spec.areas[a];
    if (!by_name.emplace(s.name, static_cast<int>(a)).second) throw InvalidInput("duplicate area name '" + s.name + "'");
    if (!by_cell.emplace(std::pair{s.col, s.row}, static_cast<int>(a)).second) {
      throw InvalidInput("two areas share macro cell of '" + s.name + "'");
    }
    hubs += s.role == AreaRole::hub;
    remotes += s.role == AreaRole::remote;
    urbans += s.role == AreaRole::urban;
  }
  if (hubs < 1 || remotes < 2 || urbans < 4) {
    throw InvalidInput("network spec needs >=1 hub, >=2 remote and >=4 urban areas");
  }

  const int g = spec.area_grid;
  NetworkParts parts;
  parts.eps_rail = spec.eps_rail;
  parts.eps_bus = spec.eps_bus;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-spec.jitter_frac, spec.jitter_frac);
  const double half = static_cast<double>(g - 1) / 2.0;
  auto grid_node = [&](int a, int r, int c) { return static_cast<NodeId>(a * g * g + r * g + c); };

  for (std::size_t a = 0; a < spec.areas.size(); ++a) {
    const auto& s = spec.areas[a];
    Area area{s.name, s.role, s.col, s.row, grid_node(static_cast<int>(a), g / 2, g / 2), {}};
    for (int r = 0; r < g; ++r) {
      for (int c = 0; c < g; ++c) {
        double x = s.col * spec.area_pitch_m + (c - half + jitter(rng)) * spec.node_spacing_m;
        double y = s.row * spec.area_pitch_m + (r - half + jitter(rng)) * spec.node_spacing_m;
        area.nodes.push_back(static_cast<NodeId>(parts.nodes.size()));
        parts.nodes.push_back({std::llround(x), std::llround(y), static_cast<int>(a)});
      }
    }
    parts.areas.push_back(std::move(area));
  }

  auto connect = [&](NodeId u, NodeId v, double speed) {
    const auto& p = parts.nodes[static_cast<std::size_t>(u)];
    const auto& q = parts.nodes[static_cast<std::size_t>(v)];
    double dist = std::hypot(static_cast<double>(p.x - q.x), static_cast<double>(p.y - q.y));
    Seconds t = std::max<Seconds>(1, std::llround(dist / speed));
    parts.edges.push_back({u, v, t});
    parts.edges.push_back({v, u, t});
  };
  for (std::size_t a = 0; a < spec.areas.size(); ++a) {
    auto ai = static_cast<int>(a);
    for (int r = 0; r < g; ++r) {
      for (int c = 0; c < g; ++c) {
        if (c + 1 < g) connect(grid_node(ai, r, c), grid_node(ai, r, c + 1), spec.local_speed_mps);
        if (r + 1 < g) connect(grid_node(ai, r, c), grid_node(ai, r + 1, c), spec.local_speed_mps);
      }
    }
    const auto& s = spec.areas[a];
    if (auto east = by_cell.find({s.col + 1, s.row}); east != by_cell.end()) {
      for (int r = 0; r < g; ++r) connect(grid_node(ai, r, g - 1), grid_node(east->second, r, 0), spec.arterial_speed_mps);
    }
    if (auto south = by_cell.find({s.col, s.row + 1}); south != by_cell.end()) {
      for (int c = 0; c < g; ++c) connect(grid_node(ai, g - 1, c), grid_node(south->second, 0, c), spec.arterial_speed_mps);
    }
  }

  for (const auto& ls : spec.lines) {
    TransitLine line{ls.name, ls.mode, {}};
    for (const auto& name : ls.areas) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw InvalidInput("line '" + ls.name + "' names unknown area '" + name + "'");
      line.stations.push_back(parts.areas[static_cast<std::size_t>(it->second)].center);
    }
    parts.lines.push_back(std::move(line));
  }

  if (spec.auto_bus_feeders) {
    std::set<NodeId> rail_stops, any_stop;
    for (const auto& line : parts.lines) {
      for (auto s : line.stations) {
        any_stop.insert(s);
        if (line.mode == TransitMode::rail) rail_stops.insert(s);
      }
    }
    auto csr = detail::make_csr(parts.nodes.size(), parts.edges, false);
    for (const auto& area : parts.areas) {
      if (area.role != AreaRole::urban || any_stop.count(area.center) || rail_stops.empty()) continue;
      auto dist = detail::dijkstra(csr, area.center);
      NodeId best = *rail_stops.begin();
      for (auto s : rail_stops) {
        if (dist[static_cast<std::size_t>(s)] < dist[static_cast<std::size_t>(best)]) best = s;
      }
      parts.lines.push_back({"bus_" + area.name, TransitMode::bus, {area.center, best}});
    }
  }

  return RoadTransitNetwork(std::move(parts));
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const NetworkParts& p) {
  using nlohmann::json;
  json nodes = json::array();
  for (std::size_t v = 0; v < p.nodes.size(); ++v) {
    nodes.push_back({{"id", v}, {"x", p.nodes[v].x}, {"y", p.nodes[v].y}, {"area", p.nodes[v].area}});
  }
  json edges = json::array();
  for (const auto& e : p.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"time", e.time}});
  json areas = json::array();
  for (const auto& a : p.areas) {
    areas.push_back({{"name", a.name}, {"role", to_string(a.role)}, {"col", a.col}, {"row", a.row},
                     {"center", a.center}, {"nodes", a.nodes}});
  }
  json lines = json::array();
  for (const auto& l : p.lines) {
    lines.push_back({{"name", l.name}, {"mode", to_string(l.mode)}, {"stations", l.stations}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"areas", areas}, {"lines", lines},
          {"eps_rail", p.eps_rail}, {"eps_bus", p.eps_bus}};
}

inline NetworkParts network_parts_from_json(const nlohmann::json& j) {
  NetworkParts p;
  try {
    for (const auto& n : j.at("nodes")) {
      if (n.at("id").get<std::size_t>() != p.nodes.size()) throw InvalidInput("node ids must be 0..n-1 in order");
      p.nodes.push_back({n.at("x").get<std::int64_t>(), n.at("y").get<std::int64_t>(), n.at("area").get<int>()});
    }
    for (const auto& e : j.at("edges")) {
      p.edges.push_back({e.at("from").get<NodeId>(), e.at("to").get<NodeId>(), e.at("time").get<Seconds>()});
    }
    for (const auto& a : j.at("areas")) {
      p.areas.push_back({a.at("name").get<std::string>(), area_role_from_string(a.at("role").get<std::string>()),
                         a.value("col", 0), a.value("row", 0), a.at("center").get<NodeId>(),
                         a.at("nodes").get<std::vector<NodeId>>()});
    }
    for (const auto& l : j.at("lines")) {
      p.lines.push_back({l.at("name").get<std::string>(), transit_mode_from_string(l.at("mode").get<std::string>()),
                         l.at("stations").get<std::vector<NodeId>>()});
    }
    p.eps_rail = j.at("eps_rail").get<double>();
    p.eps_bus = j.at("eps_bus").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed network document: ") + e.what());
  }
  return p;
}

inline nlohmann::json to_json(const NetworkSpec& s) {
  using nlohmann::json;
  json areas = json::array();
  for (const auto& a : s.areas) areas.push_back({{"name", a.name}, {"col", a.col}, {"row", a.row}, {"role", to_string(a.role)}});
  json lines = json::array();
  for (const auto& l : s.lines) lines.push_back({{"name", l.name}, {"mode", to_string(l.mode)}, {"areas", l.areas}});
  return {{"area_grid", s.area_grid}, {"node_spacing_m", s.node_spacing_m}, {"area_pitch_m", s.area_pitch_m},
          {"jitter_frac", s.jitter_frac}, {"local_speed_mps", s.local_speed_mps},
          {"arterial_speed_mps", s.arterial_speed_mps}, {"eps_rail", s.eps_rail}, {"eps_bus", s.eps_bus},
          {"auto_bus_feeders", s.auto_bus_feeders}, {"areas", areas}, {"lines", lines}};
}

/// Missing scalar fields fall back to the defaults; areas and lines are required.
inline NetworkSpec network_spec_from_json(const nlohmann::json& j) {
  NetworkSpec s;
  try {
    s.area_grid = j.value("area_grid", s.area_grid);
    s.node_spacing_m = j.value("node_spacing_m", s.node_spacing_m);
    s.area_pitch_m = j.value("area_pitch_m", s.area_pitch_m);
    s.jitter_frac = j.value("jitter_frac", s.jitter_frac);
    s.local_speed_mps = j.value("local_speed_mps", s.local_speed_mps);
    s.arterial_speed_mps = j.value("arterial_speed_mps", s.arterial_speed_mps);
    s.eps_rail = j.value("eps_rail", s.eps_rail);
    s.eps_bus = j.value("eps_bus", s.eps_bus);
    s.auto_bus_feeders = j.value("auto_bus_feeders", s.auto_bus_feeders);
    for (const auto& a : j.at("areas")) {
      s.areas.push_back({a.at("name").get<std::string>(), a.at("col").get<int>(), a.at("row").get<int>(),
                         area_role_from_string(a.at("role").get<std::string>())});
    }
    for (const auto& l : j.at("lines")) {
      s.lines.push_back({l.at("name").get<std::string>(), transit_mode_from_string(l.value("mode", std::string("rail"))),
                         l.at("areas").get<std::vector<std::string>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed network spec: ") + e.what());
  }
  return s;
}

inline nlohmann::json to_json(const TransitRoute& r) {
  nlohmann::json legs = nlohmann::json::array();
  for (const auto& l : r.legs) {
    legs.push_back({{"from", l.from}, {"to", l.to}, {"mode", to_string(l.mode)}, {"duration", l.duration}});
  }
  return {{"legs", legs}, {"depart", r.depart}, {"duration", r.duration}};
}

}  // namespace mtr
