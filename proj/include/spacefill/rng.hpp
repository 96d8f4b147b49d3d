#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace spacefill {

/// Deterministic random stream shared by every sampler.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All conversions to real and bounded integer values are done here
/// rather than through the std distributions, whose algorithms are
/// implementation-defined. Identical seeds therefore give identical streams on
/// every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [lo, hi). Throws std::invalid_argument if lo >= hi.
  double uniform(double lo, double hi);

  /// Unbiased integer in [0, n). Throws std::invalid_argument if n == 0.
  std::size_t index(std::size_t n);

  /// Fisher-Yates shuffle driven by index().
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Independent stream derived from this stream's seed and a tag. Does not
  /// advance this stream.
  Rng child(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of two 64-bit values into a new seed.
std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b);

/// FNV-1a hash of a string, used to turn identifiers into seed material.
std::uint64_t hash_name(std::string_view name);

}  // namespace spacefill
