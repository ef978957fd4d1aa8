#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtr {

/// Road network vertex.
using NodeId = std::int32_t;
/// Integer label of a driver or rider trip, unique within one batch.
using TripId = std::int32_t;
/// Index of a hyperedge (feasible match) inside a Hypergraph.
using EdgeId = std::int32_t;
/// All times and durations are integer seconds.
using Seconds = std::int64_t;

inline constexpr NodeId kNoNode = -1;
inline constexpr Seconds kUnreachable = std::numeric_limits<Seconds>::max() / 4;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shortest path query had no path.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// Input violated a documented precondition or schema.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configured size budget would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

enum class TripKind : std::uint8_t { driver, rider };

/// Type 1: pick up riders at their origins, drop all at one station.
/// Type 2: pick up all riders at one station, drop each at its destination.
enum class MatchType : std::uint8_t { type1 = 1, type2 = 2 };

/// Bit set over MatchType.
struct MatchTypeSet {
  std::uint8_t bits = 0;

  static constexpr MatchTypeSet both() { return {3}; }
  static constexpr MatchTypeSet only(MatchType t) { return {static_cast<std::uint8_t>(t)}; }

  [[nodiscard]] constexpr bool has(MatchType t) const {
    return (bits & static_cast<std::uint8_t>(t)) != 0;
  }
  [[nodiscard]] constexpr bool empty() const { return bits == 0; }
  [[nodiscard]] constexpr MatchTypeSet operator&(MatchTypeSet o) const {
    return {static_cast<std::uint8_t>(bits & o.bits)};
  }
  constexpr bool operator==(const MatchTypeSet&) const = default;
};

inline constexpr MatchType kMatchTypes[] = {MatchType::type1, MatchType::type2};

inline std::string_view to_string(MatchType t) {
  return t == MatchType::type1 ? "type1" : "type2";
}

inline MatchType match_type_from_string(std::string_view s) {
  if (s == "type1" || s == "1") return MatchType::type1;
  if (s == "type2" || s == "2") return MatchType::type2;
  throw InvalidInput("unknown match type '" + std::string(s) + "'");
}

inline std::string_view to_string(TripKind k) {
  return k == TripKind::driver ? "driver" : "rider";
}

/// Rounds a non-negative real to the nearest integer, halves up. The small
/// bias absorbs binary representation error (1.15 * 1000 must give 1150).
inline Seconds round_half_up(double v) {
  return static_cast<Seconds>(v + 0.5 + 1e-9);
}

}  // namespace mtr
