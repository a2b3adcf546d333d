#pragma once

#include <cstdint>

namespace pertlab {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based uniform stream: the value depends only on
/// (seed, stream, index), never on which thread asks for it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t bits(std::uint64_t index, std::uint64_t lane = 0) const {
    return splitmix64(key_ ^ splitmix64(index * 0x100000001B3ULL + lane));
  }
  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t index, std::uint64_t lane = 0) const {
    return (static_cast<double>(bits(index, lane) >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

/// Stable 64-bit hash for stream identifiers built from text.
inline std::uint64_t fnv1a(const char* s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (; *s; ++s) {
    h ^= static_cast<unsigned char>(*s);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pertlab
