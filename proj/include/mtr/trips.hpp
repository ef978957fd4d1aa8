#pragma once

// Trip announcements and the seeded per-interval trip generator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtr/network.hpp"
#include "mtr/types.hpp"

namespace mtr {

/// A driver or rider announcement. Driver-only fields (n, z, p, station) are
/// ignored for riders and theta is ignored for drivers.
struct Trip {
  TripId id = 0;
  TripKind kind = TripKind::rider;
  NodeId o = 0;
  NodeId d = 0;
  int n = 0;                       // seats
  Seconds z = 0;                   // detour budget
  std::vector<NodeId> p;           // optional preferred path o..d
  std::optional<NodeId> station;   // station named together with p
  int delta = 1;                   // max pick-up (type 1) / drop-off (type 2) stops
  Seconds alpha = 0;
  Seconds beta = 0;
  Seconds gamma = 0;
  double theta = 1.0;
  MatchTypeSet types = MatchTypeSet::both();

  [[nodiscard]] bool is_driver() const { return kind == TripKind::driver; }
  [[nodiscard]] bool is_rider() const { return kind == TripKind::rider; }
};

/// Checks the trip invariants and applies the derived duration rules:
/// a driver's gamma is capped at t(p)+z (or t(o,d)+z); a rider's gamma
/// defaults to its fastest transit duration when unset (<= 0).
inline Trip normalize_trip(Trip trip, const RoadTransitNetwork& net) {
  auto fail = [&](const std::string& what) {
    throw InvalidInput("trip " + std::to_string(trip.id) + ": " + what);
  };
  if (trip.types.empty()) fail("match_types must be nonempty");
  if (trip.is_driver()) {
    if (trip.n < 1) fail("driver capacity must be at least 1");
    if (trip.delta < 1) fail("driver stop limit must be at least 1");
    if (trip.z < 0) fail("detour must be non-negative");
    Seconds base = 0;
    if (!trip.p.empty()) {
      if (trip.p.front() != trip.o || trip.p.back() != trip.d) fail("preferred path must run from o to d");
      base = net.path_time(trip.p);
    } else {
      base = net.travel_time(trip.o, trip.d);
    }
    trip.gamma = trip.gamma > 0 ? std::min(trip.gamma, base + trip.z) : base + trip.z;
    if (trip.station && !net.is_station(*trip.station)) fail("preferred station is not a station");
  } else {
    if (!(trip.theta > 0.0) || trip.theta > 1.0) fail("theta must lie in (0, 1]");
    if (trip.gamma <= 0) trip.gamma = net.transit_duration(trip.o, trip.d);
  }
  if (trip.alpha >= trip.beta) fail("alpha must be earlier than beta");
  if (trip.gamma <= 0) fail("gamma must be positive");
  return trip;
}

inline nlohmann::json match_types_to_json(MatchTypeSet s) {
  nlohmann::json out = nlohmann::json::array();
  for (auto t : kMatchTypes) {
    if (s.has(t)) out.push_back(to_string(t));
  }
  return out;
}

inline MatchTypeSet match_types_from_json(const nlohmann::json& j) {
  MatchTypeSet s;
  for (const auto& v : j) s.bits |= static_cast<std::uint8_t>(match_type_from_string(v.get<std::string>()));
  return s;
}

inline nlohmann::json to_json(const Trip& t) {
  nlohmann::json j = {{"id", t.id}, {"kind", to_string(t.kind)}, {"o", t.o}, {"d", t.d},
                      {"delta", t.delta}, {"alpha", t.alpha}, {"beta", t.beta}, {"gamma", t.gamma},
                      {"match_types", match_types_to_json(t.types)}};
  if (t.is_driver()) {
    j["n"] = t.n;
    j["z"] = t.z;
    if (!t.p.empty()) j["p"] = t.p;
    if (t.station) j["station"] = *t.station;
  } else {
    j["theta"] = t.theta;
  }
  return j;
}

inline Trip trip_from_json(const nlohmann::json& j) {
  Trip t;
  try {
    t.id = j.at("id").get<TripId>();
    auto kind = j.at("kind").get<std::string>();
    if (kind == "driver") {
      t.kind = TripKind::driver;
    } else if (kind == "rider") {
      t.kind = TripKind::rider;
    } else {
      throw InvalidInput("unknown trip kind '" + kind + "'");
    }
    t.o = j.at("o").get<NodeId>();
    t.d = j.at("d").get<NodeId>();
    t.delta = j.value("delta", 1);
    t.alpha = j.at("alpha").get<Seconds>();
    t.beta = j.at("beta").get<Seconds>();
    t.gamma = j.value("gamma", Seconds{0});
    t.types = j.contains("match_types") ? match_types_from_json(j.at("match_types")) : MatchTypeSet::both();
    t.n = j.value("n", 0);
    t.z = j.value("z", Seconds{0});
    t.p = j.value("p", std::vector<NodeId>{});
    if (j.contains("station")) t.station = j.at("station").get<NodeId>();
    t.theta = j.value("theta", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed trip: ") + e.what());
  }
  return t;
}

/// One interval's announcements. Rider ids come first, then driver ids.
struct TripBatch {
  int interval = 0;
  std::vector<Trip> drivers;
  std::vector<Trip> riders;
};

inline nlohmann::json to_json(const TripBatch& b) {
  nlohmann::json trips = nlohmann::json::array();
  for (const auto& r : b.riders) trips.push_back(to_json(r));
  for (const auto& d : b.drivers) trips.push_back(to_json(d));
  return {{"interval", b.interval}, {"trips", trips}};
}

inline TripBatch trip_batch_from_json(const nlohmann::json& j) {
  TripBatch b;
  b.interval = j.value("interval", 0);
  if (!j.contains("trips")) throw InvalidInput("trip file lacks a 'trips' array");
  for (const auto& tj : j.at("trips")) {
    auto t = trip_from_json(tj);
    (t.is_driver() ? b.drivers : b.riders).push_back(std::move(t));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Band distributions

/// Distance bands of the standard normal used to weight areas.
enum class Band : std::uint8_t { within_2sd, sd2_to_3, beyond_3sd, beyond_2sd };

inline std::string_view to_string(Band b) {
  switch (b) {
    case Band::within_2sd: return "within_2sd";
    case Band::sd2_to_3: return "2sd_to_3sd";
    case Band::beyond_3sd: return "beyond_3sd";
    case Band::beyond_2sd: return "beyond_2sd";
  }
  return "within_2sd";
}

inline Band band_from_string(std::string_view s) {
  if (s == "within_2sd") return Band::within_2sd;
  if (s == "2sd_to_3sd") return Band::sd2_to_3;
  if (s == "beyond_3sd") return Band::beyond_3sd;
  if (s == "beyond_2sd") return Band::beyond_2sd;
  throw InvalidInput("unknown band '" + std::string(s) + "'");
}

/// Standard normal mass of a band (two-sided).
inline double band_mass(Band b) {
  const double in2 = std::erf(2.0 / std::sqrt(2.0));
  const double in3 = std::erf(3.0 / std::sqrt(2.0));
  switch (b) {
    case Band::within_2sd: return in2;
    case Band::sd2_to_3: return in3 - in2;
    case Band::beyond_3sd: return 1.0 - in3;
    case Band::beyond_2sd: return 1.0 - in2;
  }
  return 0.0;
}

/// Splits each band's mass uniformly among its areas. Bands with no areas
/// drop out and the rest is renormalized.
inline std::vector<double> band_distribution(const std::vector<Band>& bands) {
  std::map<Band, int> members;
  for (auto b : bands) ++members[b];
  if (members.empty()) throw InvalidInput("band distribution needs at least one tagged area");
  double total = 0.0;
  for (auto [b, k] : members) total += band_mass(b);
  std::vector<double> out;
  out.reserve(bands.size());
  for (auto b : bands) out.push_back(band_mass(b) / total / members[b]);
  return out;
}

// ---------------------------------------------------------------------------
// Generation profile

struct BandMap {
  Band hub = Band::within_2sd;
  Band remote = Band::within_2sd;
  Band urban = Band::within_2sd;

  [[nodiscard]] Band of(AreaRole r) const {
    return r == AreaRole::hub ? hub : r == AreaRole::remote ? remote : urban;
  }
};

struct Period {
  std::string name;
  int first = 0;  // interval indices, inclusive
  int last = 0;
  BandMap pickup;
  BandMap dropoff;
};

struct PeakWindow {
  int first = 0;
  int last = 0;
  MatchType type = MatchType::type1;
};

struct CapacityClass {
  std::string name;
  int lo = 1;
  int hi = 3;
  double peak_weight = 0.0;
  double offpeak_weight = 0.0;
};

struct GenerationProfile {
  Seconds interval_length = 900;
  int intervals_per_day = 72;
  std::vector<double> count_curve;  // total trips (riders + drivers) per interval
  int riders_per_driver = 3;
  Seconds departure_window = 1800;  // alpha lies up to this far past the interval start
  int immediate_last = 4;           // trailing intervals whose trips depart immediately
  double theta_default = 0.8;
  double airport_dest_prob = 0.05;
  Seconds detour_min = 300;
  Seconds detour_max = 1200;
  double detour_factor = 2.0;       // z <= detour_factor * t(o,d)
  double beta_factor = 1.5;         // driver beta - alpha <= beta_factor * (t(o,d) + z)
  std::vector<CapacityClass> capacity;
  std::vector<PeakWindow> peaks;
  std::vector<Period> periods;

  [[nodiscard]] std::optional<MatchType> peak_type(int t) const {
    for (const auto& w : peaks) {
      if (t >= w.first && t <= w.last) return w.type;
    }
    return std::nullopt;
  }

  [[nodiscard]] const Period& period(int t) const {
    for (const auto& p : periods) {
      if (t >= p.first && t <= p.last) return p;
    }
    throw InvalidInput("no period covers interval " + std::to_string(t));
  }

  void validate() const {
    if (interval_length <= 0 || intervals_per_day <= 0) throw InvalidInput("interval layout must be positive");
    if (static_cast<int>(count_curve.size()) != intervals_per_day) {
      throw InvalidInput("count_curve length must equal intervals_per_day");
    }
    for (auto c : count_curve) {
      if (c < 0) throw InvalidInput("count_curve entries must be non-negative");
    }
    if (riders_per_driver < 1) throw InvalidInput("riders_per_driver must be at least 1");
    if (!(theta_default > 0.0) || theta_default > 1.0) throw InvalidInput("theta_default must lie in (0, 1]");
    if (airport_dest_prob < 0.0 || airport_dest_prob > 1.0) throw InvalidInput("airport_dest_prob must lie in [0, 1]");
    if (detour_min < 0 || detour_max < detour_min) throw InvalidInput("detour range is empty");
    if (beta_factor < 1.0) throw InvalidInput("beta_factor must be at least 1");
    double peak = 0.0, off = 0.0;
    for (const auto& c : capacity) {
      if (c.lo < 1 || c.hi < c.lo) throw InvalidInput("capacity class '" + c.name + "' has an empty range");
      peak += c.peak_weight;
      off += c.offpeak_weight;
    }
    if (std::abs(peak - 1.0) > 1e-9 || std::abs(off - 1.0) > 1e-9) {
      throw InvalidInput("capacity weights must sum to 1");
    }
    for (int t = 0; t < intervals_per_day; ++t) (void)period(t);
  }
};

/// Every field except count_curve, which lives in the scenario's profile file.
inline GenerationProfile default_generation_profile() {
  GenerationProfile g;
  g.capacity = {{"low", 1, 3, 0.95, 0.80}, {"mid", 3, 5, 0.05, 0.10}, {"high", 4, 6, 0.0, 0.10}};
  g.peaks = {{4, 15, MatchType::type1}, {44, 55, MatchType::type2}};
  using B = Band;
  const BandMap uniform{};
  g.periods = {
      {"morning_rush", 0, 15, uniform, {B::within_2sd, B::sd2_to_3, B::beyond_3sd}},
      {"morning_normal", 16, 23, {B::sd2_to_3, B::beyond_3sd, B::within_2sd}, uniform},
      {"noon", 24, 31, uniform, uniform},
      {"afternoon_normal", 32, 43, {B::within_2sd, B::within_2sd, B::beyond_2sd},
       {B::beyond_2sd, B::beyond_2sd, B::within_2sd}},
      {"afternoon_rush", 44, 55, {B::within_2sd, B::sd2_to_3, B::beyond_3sd},
       {B::beyond_3sd, B::sd2_to_3, B::within_2sd}},
      {"evening", 56, 71, {B::sd2_to_3, B::beyond_3sd, B::within_2sd}, {B::sd2_to_3, B::beyond_3sd, B::within_2sd}},
  };
  return g;
}

inline nlohmann::json to_json(const BandMap& m) {
  return {{"hub", to_string(m.hub)}, {"remote", to_string(m.remote)}, {"urban", to_string(m.urban)}};
}

inline BandMap band_map_from_json(const nlohmann::json& j) {
  return {band_from_string(j.at("hub").get<std::string>()), band_from_string(j.at("remote").get<std::string>()),
          band_from_string(j.at("urban").get<std::string>())};
}

inline nlohmann::json to_json(const GenerationProfile& g) {
  using nlohmann::json;
  json capacity = json::array();
  for (const auto& c : g.capacity) {
    capacity.push_back({{"name", c.name}, {"lo", c.lo}, {"hi", c.hi}, {"peak_weight", c.peak_weight},
                        {"offpeak_weight", c.offpeak_weight}});
  }
  json peaks = json::array();
  for (const auto& w : g.peaks) peaks.push_back({{"first", w.first}, {"last", w.last}, {"type", to_string(w.type)}});
  json periods = json::array();
  for (const auto& p : g.periods) {
    periods.push_back({{"name", p.name}, {"first", p.first}, {"last", p.last}, {"pickup", to_json(p.pickup)},
                       {"dropoff", to_json(p.dropoff)}});
  }
  return {{"interval_length", g.interval_length}, {"intervals_per_day", g.intervals_per_day},
          {"count_curve", g.count_curve}, {"riders_per_driver", g.riders_per_driver},
          {"departure_window", g.departure_window}, {"immediate_last", g.immediate_last},
          {"theta_default", g.theta_default}, {"airport_dest_prob", g.airport_dest_prob},
          {"detour_min", g.detour_min}, {"detour_max", g.detour_max}, {"detour_factor", g.detour_factor},
          {"beta_factor", g.beta_factor}, {"capacity", capacity}, {"peaks", peaks}, {"periods", periods}};
}

/// Fields missing from the document keep their default values.
inline GenerationProfile generation_profile_from_json(const nlohmann::json& j) {
  auto g = default_generation_profile();
  try {
    g.interval_length = j.value("interval_length", g.interval_length);
    g.intervals_per_day = j.value("intervals_per_day", g.intervals_per_day);
    g.count_curve = j.value("count_curve", g.count_curve);
    g.riders_per_driver = j.value("riders_per_driver", g.riders_per_driver);
    g.departure_window = j.value("departure_window", g.departure_window);
    g.immediate_last = j.value("immediate_last", g.immediate_last);
    g.theta_default = j.value("theta_default", g.theta_default);
    g.airport_dest_prob = j.value("airport_dest_prob", g.airport_dest_prob);
    g.detour_min = j.value("detour_min", g.detour_min);
    g.detour_max = j.value("detour_max", g.detour_max);
    g.detour_factor = j.value("detour_factor", g.detour_factor);
    g.beta_factor = j.value("beta_factor", g.beta_factor);
    if (j.contains("capacity")) {
      g.capacity.clear();
      for (const auto& c : j.at("capacity")) {
        g.capacity.push_back({c.at("name").get<std::string>(), c.at("lo").get<int>(), c.at("hi").get<int>(),
                              c.at("peak_weight").get<double>(), c.at("offpeak_weight").get<double>()});
      }
    }
    if (j.contains("peaks")) {
      g.peaks.clear();
      for (const auto& w : j.at("peaks")) {
        g.peaks.push_back({w.at("first").get<int>(), w.at("last").get<int>(),
                           match_type_from_string(w.at("type").get<std::string>())});
      }
    }
    if (j.contains("periods")) {
      g.periods.clear();
      for (const auto& p : j.at("periods")) {
        g.periods.push_back({p.at("name").get<std::string>(), p.at("first").get<int>(), p.at("last").get<int>(),
                             band_map_from_json(p.at("pickup")), band_map_from_json(p.at("dropoff"))});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed generation profile: ") + e.what());
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Generator

namespace detail {

inline std::size_t sample(std::mt19937_64& rng, const std::vector<double>& weights) {
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  return dist(rng);
}

inline Seconds uniform_seconds(std::mt19937_64& rng, Seconds lo, Seconds hi) {
  return std::uniform_int_distribution<Seconds>(lo, hi)(rng);
}

inline std::vector<double> area_weights(const RoadTransitNetwork& net, const BandMap& bands) {
  std::vector<Band> tags;
  for (const auto& a : net.areas()) tags.push_back(bands.of(a.role));
  return band_distribution(tags);
}

inline std::vector<double> masked(std::vector<double> w, const std::vector<char>& keep) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!keep[k]) w[k] = 0.0;
  }
  return w;
}

inline bool any_positive(const std::vector<double>& w) {
  return std::any_of(w.begin(), w.end(), [](double v) { return v > 0.0; });
}

}  // namespace detail

/// Number of trips generated in interval t; `scale` multiplies the curve.
inline int interval_trip_count(const GenerationProfile& g, int t, double scale = 1.0) {
  return static_cast<int>(round_half_up(g.count_curve.at(static_cast<std::size_t>(t)) * scale));
}

inline TripBatch generate_interval(const GenerationProfile& g, const RoadTransitNetwork& net, int t,
                                   std::uint64_t seed, double scale = 1.0) {
  if (t < 0 || t >= g.intervals_per_day) {
    throw InvalidInput("interval " + std::to_string(t) + " is outside [0, " + std::to_string(g.intervals_per_day) + ")");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t)};
  std::mt19937_64 rng(seq);

  const int total = interval_trip_count(g, t, scale);
  const int rpd = g.riders_per_driver;
  const int n_riders = (rpd * total + (rpd + 1) / 2) / (rpd + 1);
  const int n_drivers = total - n_riders;
  const auto& period = g.period(t);
  const auto peak = g.peak_type(t);
  const MatchTypeSet types = peak ? MatchTypeSet::only(*peak) : MatchTypeSet::both();
  const Seconds start = static_cast<Seconds>(t) * g.interval_length;
  const bool immediate = t >= g.intervals_per_day - g.immediate_last;
  auto departure = [&] { return immediate ? start : start + detail::uniform_seconds(rng, 0, g.departure_window); };
  auto pick_node = [&](int area) {
    const auto& nodes = net.area(area).nodes;
    return nodes[static_cast<std::size_t>(detail::uniform_seconds(rng, 0, static_cast<Seconds>(nodes.size()) - 1))];
  };

  const auto n_areas = net.areas().size();
  const auto pickup_w = detail::area_weights(net, period.pickup);
  const auto dropoff_w = detail::area_weights(net, period.dropoff);
  std::vector<std::vector<char>> far(n_areas, std::vector<char>(n_areas, 0));
  for (std::size_t a = 0; a < n_areas; ++a) {
    for (std::size_t b = 0; b < n_areas; ++b) far[a][b] = !net.areas_adjacent(static_cast<int>(a), static_cast<int>(b));
  }

  TripBatch batch;
  batch.interval = t;
  std::vector<int> riders_from(n_areas, 0);
  for (int k = 0; k < n_riders; ++k) {
    std::size_t pa = 0;
    std::vector<double> dest;
    for (;;) {
      pa = detail::sample(rng, pickup_w);
      dest = detail::masked(dropoff_w, far[pa]);
      if (detail::any_positive(dest)) break;
    }
    auto da = detail::sample(rng, dest);
    Trip r;
    r.id = k;
    r.kind = TripKind::rider;
    r.o = pick_node(static_cast<int>(pa));
    r.d = pick_node(static_cast<int>(da));
    r.alpha = departure();
    r.gamma = net.transit_duration(r.o, r.d);
    r.beta = r.alpha + r.gamma;
    r.theta = g.theta_default;
    r.types = types;
    ++riders_from[pa];
    batch.riders.push_back(std::move(r));
  }

  // Drivers per pickup area are proportional to the riders leaving it, with
  // floors carried forward so the totals match exactly.
  std::vector<double> cap_w;
  for (const auto& c : g.capacity) cap_w.push_back(peak ? c.peak_weight : c.offpeak_weight);
  std::vector<char> remote(n_areas, 0);
  for (std::size_t a = 0; a < n_areas; ++a) remote[a] = net.area(static_cast<int>(a)).role == AreaRole::remote;
  std::int64_t cum = 0;
  int emitted = 0;
  TripId next_id = n_riders;
  for (std::size_t pa = 0; pa < n_areas; ++pa) {
    cum += riders_from[pa];
    int upto = n_riders > 0 ? static_cast<int>(cum * n_drivers / n_riders) : 0;
    if (n_riders == 0 && pa + 1 == n_areas) upto = n_drivers;
    int here = upto - emitted;
    emitted = upto;
    if (here == 0) continue;

    std::vector<double> remote_w(n_areas, 0.0), other_w(n_areas, 0.0);
    double remote_sum = 0.0, other_sum = 0.0;
    for (std::size_t b = 0; b < n_areas; ++b) {
      if (!far[pa][b]) continue;
      if (remote[b]) {
        remote_w[b] = 1.0;
        remote_sum += 1.0;
      } else {
        other_w[b] = dropoff_w[b];
        other_sum += dropoff_w[b];
      }
    }
    // With no rider band mass on the far non-remote areas, fall back to uniform.
    if (other_sum <= 0.0) {
      for (std::size_t b = 0; b < n_areas; ++b) {
        if (far[pa][b] && !remote[b]) {
          other_w[b] = 1.0;
          other_sum += 1.0;
        }
      }
    }
    double remote_mass = remote_sum > 0.0 ? (other_sum > 0.0 ? g.airport_dest_prob : 1.0) : 0.0;
    std::vector<double> dest(n_areas, 0.0);
    for (std::size_t b = 0; b < n_areas; ++b) {
      if (remote_w[b] > 0.0) dest[b] = remote_mass * remote_w[b] / remote_sum;
      if (other_w[b] > 0.0) dest[b] = (1.0 - remote_mass) * other_w[b] / other_sum;
    }
    if (!detail::any_positive(dest)) {
      throw InvalidInput("area '" + net.area(static_cast<int>(pa)).name + "' has no non-adjacent destination");
    }

    for (int k = 0; k < here; ++k) {
      Trip dr;
      dr.id = next_id++;
      dr.kind = TripKind::driver;
      dr.o = pick_node(static_cast<int>(pa));
      dr.d = pick_node(static_cast<int>(detail::sample(rng, dest)));
      const auto& cls = g.capacity[detail::sample(rng, cap_w)];
      dr.n = static_cast<int>(detail::uniform_seconds(rng, cls.lo, cls.hi));
      dr.delta = dr.n <= 3 ? dr.n : static_cast<int>(detail::uniform_seconds(rng, dr.n - 2, dr.n));
      dr.alpha = departure();
      Seconds direct = net.travel_time(dr.o, dr.d);
      Seconds hi = std::min(static_cast<Seconds>(g.detour_factor * static_cast<double>(direct)), g.detour_max);
      dr.z = detail::uniform_seconds(rng, std::min(g.detour_min, hi), hi);
      dr.gamma = direct + dr.z;
      Seconds slack_hi = static_cast<Seconds>(std::floor(g.beta_factor * static_cast<double>(dr.gamma)));
      dr.beta = dr.alpha + detail::uniform_seconds(rng, dr.gamma, std::max(dr.gamma, slack_hi));
      dr.types = types;
      batch.drivers.push_back(std::move(dr));
    }
  }
  return batch;
}

}  // namespace mtr
