#include "sympfact/random.hpp"

namespace sympfact {

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::string_view suite) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : suite) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer over the combination.
  std::uint64_t x = h ^ (seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long Rng::uniform_int(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(next() % span);
}

double Rng::uniform_real(double lo, double hi) {
  const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

Rat Rng::small_rational() {
  const long num = uniform_int(-9, 9);
  const long den = uniform_int(1, 3);
  return make_rat(num, den);
}

Rat Rng::nonzero_rational() {
  for (;;) {
    Rat r = small_rational();
    if (!is_zero(r)) return r;
  }
}

}  // namespace sympfact
