#pragma once

// Counter-based pseudo random numbers.
//
// Draw k (0-based) of a stream with key K is mix64(K + (k + 1) * 0x9E3779B97F4A7C15),
// i.e. the SplitMix64 sequence started at K. Streams for different purposes
// are keyed with derive_seed(), so every consumer owns an independent,
// reproducible sequence regardless of thread scheduling.

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace rmc {

/// SplitMix64 finalizer (Stafford variant 13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// 64-bit FNV-1a of a short label, used to turn purpose names into tags.
constexpr std::uint64_t tag_of(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// stream key = mix(... mix(mix(base ^ tag) ^ c0) ... ^ c_last).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                          std::initializer_list<std::uint64_t> coords = {});

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller; draws come in (cos, sin) pairs from two
  /// consecutive uniforms.
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmc
