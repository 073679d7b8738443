#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sympfact/rational.hpp"

namespace sympfact {

// Seeded generator with library-independent range mapping, so that a seed
// reproduces the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Seed for a named suite: FNV-1a of the name mixed into the base seed.
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view suite);
  static Rng derived(std::uint64_t seed, std::string_view suite) { return Rng(derive_seed(seed, suite)); }

  std::uint64_t next() { return engine_(); }
  // Inclusive range.
  long uniform_int(long lo, long hi);
  double uniform_real(double lo, double hi);
  // Numerator uniform in [-9, 9], denominator uniform in {1, 2, 3}.
  Rat small_rational();
  Rat nonzero_rational();

 private:
  std::mt19937_64 engine_;
};

}  // namespace sympfact
