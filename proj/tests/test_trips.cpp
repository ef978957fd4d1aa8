#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "support/oracles.hpp"

using namespace mtr;
using mtr::testing::default_net;
using mtr::testing::flat_profile;

namespace {

GenerationProfile file_profile() {
  std::ifstream in(std::string(MTR_SCENARIO_DIR) + "/profile.json");
  return generation_profile_from_json(nlohmann::json::parse(in));
}

int downtown_area(const RoadTransitNetwork& net) {
  for (std::size_t a = 0; a < net.areas().size(); ++a) {
    if (net.areas()[a].role == AreaRole::hub) return static_cast<int>(a);
  }
  return -1;
}

}  // namespace

TEST(Bands, MassesFollowStandardNormal) {
  EXPECT_NEAR(band_mass(Band::within_2sd), 0.954499736, 1e-8);
  EXPECT_NEAR(band_mass(Band::sd2_to_3), 0.042800468, 1e-8);
  EXPECT_NEAR(band_mass(Band::beyond_3sd), 0.002699796, 1e-8);
}

TEST(Bands, MorningRushDropoff) {
  std::vector<Band> tags{Band::within_2sd, Band::sd2_to_3, Band::sd2_to_3};
  tags.insert(tags.end(), 19, Band::beyond_3sd);
  auto p = band_distribution(tags);
  EXPECT_NEAR(p[0], 0.95450, 5e-6);
  EXPECT_NEAR(p[1], 0.02140, 5e-6);
  EXPECT_NEAR(p[2], 0.02140, 5e-6);
  for (std::size_t k = 3; k < p.size(); ++k) EXPECT_NEAR(p[k], 0.0001421, 5e-8);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
}

TEST(Bands, SingleOccupiedBandRenormalizes) {
  auto p = band_distribution({Band::within_2sd});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
}

TEST(Bands, UniformTagGivesUniform) {
  auto p = band_distribution(std::vector<Band>(22, Band::within_2sd));
  for (double v : p) EXPECT_NEAR(v, 1.0 / 22, 1e-12);
}

TEST(Bands, EmptyInputRejected) { EXPECT_THROW(band_distribution({}), InvalidInput); }

TEST(Trips, NormalizeAppliesDurationRules) {
  const auto& net = default_net();
  Trip d;
  d.kind = TripKind::driver;
  d.o = 0;
  d.d = 100;
  d.n = 2;
  d.delta = 2;
  d.z = 300;
  d.alpha = 0;
  d.beta = 100000;
  d.gamma = 999999;
  auto nd = normalize_trip(d, net);
  EXPECT_EQ(nd.gamma, net.travel_time(0, 100) + 300);
  d.gamma = 10;
  EXPECT_EQ(normalize_trip(d, net).gamma, 10);

  Trip r;
  r.o = 0;
  r.d = 100;
  r.alpha = 0;
  r.beta = 100000;
  r.theta = 0.8;
  EXPECT_EQ(normalize_trip(r, net).gamma, net.transit_duration(0, 100));
  r.theta = 0.0;
  EXPECT_THROW(normalize_trip(r, net), InvalidInput);
  r.theta = 1.0;
  r.beta = 0;
  EXPECT_THROW(normalize_trip(r, net), InvalidInput);
  r.beta = 10;
  r.types = MatchTypeSet{};
  EXPECT_THROW(normalize_trip(r, net), InvalidInput);
}

TEST(Trips, PreferredPathCapsGamma) {
  const auto& net = default_net();
  Trip d;
  d.kind = TripKind::driver;
  d.o = 0;
  d.d = 2;
  d.p = {0, 1, 2};
  d.n = 1;
  d.z = 60;
  d.alpha = 0;
  d.beta = 100000;
  auto nd = normalize_trip(d, net);
  EXPECT_EQ(nd.gamma, net.path_time(d.p) + 60);
  d.p = {0, 1};
  EXPECT_THROW(normalize_trip(d, net), InvalidInput);
}

TEST(Trips, JsonRoundTrip) {
  const auto& net = default_net();
  auto batch = generate_interval(flat_profile(40), net, 20, 9);
  auto back = trip_batch_from_json(to_json(batch));
  EXPECT_EQ(to_json(back).dump(), to_json(batch).dump());
}

TEST(Profile, FileProfileMatchesPaperRanges) {
  auto g = file_profile();
  ASSERT_EQ(g.count_curve.size(), 72u);
  for (double c : g.count_curve) {
    EXPECT_GE(c, 350);
    EXPECT_LE(c, 1150);
  }
  EXPECT_EQ(g.interval_length, 900);
  EXPECT_DOUBLE_EQ(g.theta_default, 0.8);
}

TEST(Profile, ValidationRejectsBadInput) {
  auto g = flat_profile(10);
  g.count_curve.pop_back();
  EXPECT_THROW(g.validate(), InvalidInput);
  g = flat_profile(10);
  g.capacity[0].peak_weight = 0.5;
  EXPECT_THROW(g.validate(), InvalidInput);
  g = flat_profile(10);
  g.theta_default = 1.5;
  EXPECT_THROW(g.validate(), InvalidInput);
  EXPECT_THROW(generation_profile_from_json(nlohmann::json::object()), InvalidInput);  // no count curve
}

TEST(Generate, RejectsIntervalOutsideDay) {
  auto g = flat_profile(10);
  EXPECT_THROW(generate_interval(g, default_net(), 72, 1), InvalidInput);
  EXPECT_THROW(generate_interval(g, default_net(), -1, 1), InvalidInput);
}

TEST(Generate, DeterministicPerSeedAndInterval) {
  auto g = flat_profile(80);
  auto a = generate_interval(g, default_net(), 12, 77);
  auto b = generate_interval(g, default_net(), 12, 77);
  auto c = generate_interval(g, default_net(), 12, 78);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_NE(to_json(a).dump(), to_json(c).dump());
}

TEST(Generate, CountsFollowCurveAndRatio) {
  auto g = file_profile();
  const auto& net = default_net();
  long long total = 0, expected = 0;
  for (int t = 0; t < g.intervals_per_day; ++t) {
    auto b = generate_interval(g, net, t, 5, 0.1);
    int n = interval_trip_count(g, t, 0.1);
    ASSERT_EQ(static_cast<int>(b.riders.size() + b.drivers.size()), n);
    EXPECT_EQ(static_cast<int>(b.riders.size()), (3 * n + 2) / 4);
    total += static_cast<long long>(b.riders.size() + b.drivers.size());
    expected += n;
  }
  EXPECT_EQ(total, expected);
}

TEST(Generate, IdsRidersFirstThenDrivers) {
  auto b = generate_interval(flat_profile(50), default_net(), 30, 3);
  for (std::size_t k = 0; k < b.riders.size(); ++k) EXPECT_EQ(b.riders[k].id, static_cast<TripId>(k));
  for (std::size_t k = 0; k < b.drivers.size(); ++k) {
    EXPECT_EQ(b.drivers[k].id, static_cast<TripId>(b.riders.size() + k));
  }
}

TEST(Generate, ParameterRules) {
  auto g = flat_profile(200);
  const auto& net = default_net();
  for (int t : {0, 8, 30, 50, 69}) {
    auto b = generate_interval(g, net, t, 11);
    const Seconds start = static_cast<Seconds>(t) * 900;
    auto peak = g.peak_type(t);
    for (const auto& r : b.riders) {
      ASSERT_NO_THROW(normalize_trip(r, net));
      EXPECT_EQ(r.beta - r.alpha, net.transit_duration(r.o, r.d));
      EXPECT_EQ(r.gamma, net.transit_duration(r.o, r.d));
      EXPECT_DOUBLE_EQ(r.theta, 0.8);
      EXPECT_GE(r.alpha, start);
      EXPECT_LE(r.alpha, start + 1800);
      EXPECT_FALSE(net.areas_adjacent(net.area_of(r.o), net.area_of(r.d)));
      EXPECT_EQ(r.types.bits, peak ? MatchTypeSet::only(*peak).bits : MatchTypeSet::both().bits);
    }
    for (const auto& d : b.drivers) {
      ASSERT_NO_THROW(normalize_trip(d, net));
      Seconds direct = net.travel_time(d.o, d.d);
      Seconds hi = std::min<Seconds>(2 * direct, 1200);
      EXPECT_GE(d.z, std::min<Seconds>(300, hi));
      EXPECT_LE(d.z, hi);
      EXPECT_EQ(d.gamma, direct + d.z);
      EXPECT_LE(d.gamma, d.beta - d.alpha);
      EXPECT_LE(d.beta - d.alpha, static_cast<Seconds>(std::floor(1.5 * static_cast<double>(d.gamma))));
      EXPECT_GE(d.n, 1);
      EXPECT_LE(d.n, 6);
      if (d.n <= 3) {
        EXPECT_EQ(d.delta, d.n);
      } else {
        EXPECT_GE(d.delta, d.n - 2);
        EXPECT_LE(d.delta, d.n);
      }
      EXPECT_FALSE(net.areas_adjacent(net.area_of(d.o), net.area_of(d.d)));
    }
  }
}

TEST(Generate, LastFourIntervalsDepartImmediately) {
  auto g = flat_profile(100);
  for (int t = 68; t < 72; ++t) {
    auto b = generate_interval(g, default_net(), t, 2);
    for (const auto& tr : mtr::testing::all_trips(b)) EXPECT_EQ(tr.alpha, static_cast<Seconds>(t) * 900);
  }
}

TEST(Generate, PeakCapacityMixIsMostlyLow) {
  auto g = flat_profile(2000);
  int low = 0, total = 0;
  for (std::uint64_t seed = 1; total < 10000; ++seed) {
    auto b = generate_interval(g, default_net(), 8, seed);
    for (const auto& d : b.drivers) {
      low += d.n <= 3 ? 1 : 0;
      ++total;
    }
  }
  // a third of the mid class also draws 3 seats
  double expected = 0.95 + 0.05 / 3.0;
  EXPECT_NEAR(static_cast<double>(low) / total, expected, 0.02);
}

TEST(Generate, MorningRushSendsRidersDowntown) {
  auto g = flat_profile(400);
  const auto& net = default_net();
  int dt = downtown_area(net), hits = 0, n = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& r : generate_interval(g, net, 8, seed).riders) {
      if (net.areas_adjacent(net.area_of(r.o), dt)) continue;
      hits += net.area_of(r.d) == dt;
      ++n;
    }
  }
  EXPECT_GT(static_cast<double>(hits) / n, 0.9);
}

TEST(Generate, DriversReachAirportsRarely) {
  auto g = flat_profile(800);
  const auto& net = default_net();
  int remote = 0, n = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const auto& d : generate_interval(g, net, 30, seed).drivers) {
      remote += net.area(net.area_of(d.d)).role == AreaRole::remote;
      ++n;
    }
  }
  EXPECT_NEAR(static_cast<double>(remote) / n, 0.05, 0.02);
}

TEST(Generate, ZeroCountGivesEmptyBatch) {
  auto b = generate_interval(flat_profile(0), default_net(), 3, 1);
  EXPECT_TRUE(b.riders.empty());
  EXPECT_TRUE(b.drivers.empty());
}
