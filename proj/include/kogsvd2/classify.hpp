#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "kogsvd2/fpcore.hpp"

// Zero-pattern type of a 2x2 matrix, its scale type, and the overflow/
// underflow-avoiding power-of-two prescaling.

namespace kogsvd2 {

template <WorkingFloat T>
struct Matrix2 {
  T g11{0}, g12{0}, g21{0}, g22{0};

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

template <WorkingFloat T>
inline bool all_finite(const Matrix2<T>& g) noexcept {
  return std::isfinite(g.g11) && std::isfinite(g.g12) && std::isfinite(g.g21) &&
         std::isfinite(g.g22);
}

inline constexpr std::int64_t kExpSentinel = INT64_MIN;  // e_G of the zero matrix

// nonzero-position bitmask: bit0 g11, bit1 g21, bit2 g12, bit3 g22
struct TypeInfo {
  std::uint8_t t{0};
  int s_type{0};           // headroom exponent subtracted from the scaling target
  std::int64_t s{0};       // prescale: G' = 2^s G
  std::int64_t e_G{kExpSentinel};
};

inline constexpr int scale_type_of(std::uint8_t t) noexcept {
  // one class per scale type: {0,1,2,4,6,8,9} -> 0, 15 -> 2, the rest -> 1
  if (t == 15) return 2;
  if (t == 0 || t == 1 || t == 2 || t == 4 || t == 6 || t == 8 || t == 9) return 0;
  return 1;
}

template <WorkingFloat T>
TypeInfo classify(const Matrix2<T>& g) {
  if (!all_finite(g)) throw std::domain_error("classify: non-finite element");
  TypeInfo info;
  info.t = static_cast<std::uint8_t>((g.g11 != T(0) ? 1 : 0) | (g.g21 != T(0) ? 2 : 0) |
                                     (g.g12 != T(0) ? 4 : 0) | (g.g22 != T(0) ? 8 : 0));
  info.s_type = scale_type_of(info.t);
  for (T v : {g.g11, g.g21, g.g12, g.g22})
    if (v != T(0)) {
      const std::int64_t e = split(v).e;
      if (info.e_G == kExpSentinel || e > info.e_G) info.e_G = e;
    }
  info.s = info.e_G == kExpSentinel ? 0 : exp_max<T> - info.e_G - info.s_type;
  return info;
}

template <WorkingFloat T>
struct PrescaleResult {
  Matrix2<T> gp;
  std::int64_t s{0};
  bool inexact_underflow{false};
};

// G' = 2^s G; exact whenever s >= 0, inexact underflow possible otherwise
template <WorkingFloat T>
PrescaleResult<T> prescale(const Matrix2<T>& g, const TypeInfo& info) {
  PrescaleResult<T> r;
  r.s = info.s;
  r.gp = {assemble(r.s, g.g11), assemble(r.s, g.g12), assemble(r.s, g.g21),
          assemble(r.s, g.g22)};
  if (r.s < 0)
    r.inexact_underflow = assemble(-r.s, r.gp.g11) != g.g11 || assemble(-r.s, r.gp.g12) != g.g12 ||
                          assemble(-r.s, r.gp.g21) != g.g21 || assemble(-r.s, r.gp.g22) != g.g22;
  return r;
}

}  // namespace kogsvd2
