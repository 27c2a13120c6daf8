#include "dynaraft/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace dynaraft {

std::string format_ms(Micros t) {
  const auto us = t.count();
  const auto mag = std::llabs(us);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", us < 0 ? "-" : "", mag / 1000, mag % 1000);
  return buf;
}

Micros from_ms(double ms) { return Micros{std::llround(ms * 1000.0)}; }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dynaraft
