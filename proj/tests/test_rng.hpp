#pragma once

// Seeded generators for the tests; splitmix64 keeps every run reproducible
// without dragging in <random> engine/state differences across platforms.

#include <cmath>
#include <cstdint>
#include <limits>

#include "kogsvd2/fpcore.hpp"

namespace testref {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }

  bool flip() { return next() & 1; }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // sign * mantissa in [1,2) * 2^e with e uniform over [elo, ehi]
  template <kogsvd2::WorkingFloat T>
  T stratified(int elo, int ehi) {
    const int e = static_cast<int>(range(elo, ehi));
    const T f = T(1) + static_cast<T>(unit());
    const T v = std::scalbn(f, e);
    return flip() ? -v : v;
  }

  // any finite value, exponents spread over the whole range incl. subnormals
  template <kogsvd2::WorkingFloat T>
  T any_finite() {
    using kogsvd2::exp_max;
    using kogsvd2::exp_min;
    using kogsvd2::sig_digits;
    switch (next() % 16) {
      case 0: return T(0);
      case 1: return flip() ? -kogsvd2::sub_min<T> : kogsvd2::sub_min<T>;
      case 2: return flip() ? -kogsvd2::norm_max<T> : kogsvd2::norm_max<T>;
      case 3: return flip() ? -kogsvd2::norm_min<T> : kogsvd2::norm_min<T>;
      case 4:  // subnormal
        return stratified<T>(exp_min<T> - sig_digits<T> + 1, exp_min<T> - 1);
      default:
        return stratified<T>(exp_min<T>, exp_max<T>);
    }
  }

  // positive normal with exponent in [elo, ehi]
  template <kogsvd2::WorkingFloat T>
  T positive(int elo, int ehi) {
    return std::fabs(stratified<T>(elo, ehi));
  }
};

}  // namespace testref
