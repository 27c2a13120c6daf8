#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace dynaraft {

/// All durations are integer microseconds.
using Micros = std::chrono::microseconds;

/// Simulation time: microseconds since simulation start. The global clock
/// never decreases.
using SimTime = std::chrono::microseconds;

using Term = std::uint64_t;
using LogIndex = std::uint64_t;

/// Server identifier, unique within a cluster. Doubles as an index into
/// per-server tables.
struct ServerId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const ServerId&) const = default;
  constexpr std::size_t index() const { return value; }
};

constexpr ServerId server(std::uint32_t v) { return ServerId{v}; }

/// Milliseconds with three decimals, the on-disk time representation.
std::string format_ms(Micros t);

inline double to_ms(Micros t) { return static_cast<double>(t.count()) / 1000.0; }

/// Milliseconds (possibly fractional) to microseconds, rounded to nearest.
Micros from_ms(double ms);

/// SplitMix64 step; used to derive independent seeds from one campaign seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dynaraft

template <>
struct std::hash<dynaraft::ServerId> {
  std::size_t operator()(const dynaraft::ServerId& id) const noexcept { return id.value; }
};
