#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "kogsvd2/fpcore.hpp"

// Exponent-mantissa pairs 2^e * f with a 64-bit exponent and a normalized
// working-precision mantissa: scalars that cannot overflow or underflow until
// they are assembled back into a plain floating-point value.

namespace kogsvd2 {

template <WorkingFloat T>
struct EPair {
  std::int64_t e{0};
  T f{0};  // 0, or |f| in [1,2); never NaN or infinite

  constexpr EPair() = default;

  EPair(std::int64_t ee, T ff) {
    if (std::isnan(ff) || std::isinf(ff)) throw std::domain_error("EPair: non-finite mantissa");
    // exponents stay within a few binades of the format range by
    // construction; halfway to the integer limits is unreachable
    assert(ee > INT64_MIN / 2 && ee < INT64_MAX / 2);
    if (ff == T(0)) {
      e = 0;
      f = T(0);
      return;
    }
    const auto s = split(ff);
    e = ee + s.e;
    f = s.f;
  }

  static EPair from_value(T x) { return EPair(0, x); }

  T value() const noexcept { return assemble(e, f); }
  bool is_zero() const noexcept { return f == T(0); }

  friend bool operator==(const EPair& a, const EPair& b) noexcept {
    return a.e == b.e && a.f == b.f;
  }
};

namespace detail {
template <WorkingFloat T>
inline void require_positive_finite(T x, T y) {
  if (!(x > T(0)) || !(y > T(0)) || !std::isfinite(x) || !std::isfinite(y))
    throw std::domain_error("epair: operands must be positive and finite");
}
}  // namespace detail

// overflow-avoiding addition of positive finite scalars
template <WorkingFloat T>
EPair<T> oplus(T x, T y) {
  detail::require_positive_finite(x, y);
  const T z = x + y;
  if (z <= norm_max<T>) return EPair<T>(0, z);
  const T zh = T(0.5) * x + T(0.5) * y;  // <= norm_max since fl(nu/2+nu/2) = nu
  return EPair<T>(1, zh);
}

// underflow-avoiding subtraction of positive finite scalars
template <WorkingFloat T>
EPair<T> ominus(T x, T y) {
  detail::require_positive_finite(x, y);
  if (x == y) return EPair<T>();
  const T z = x - y;
  if (std::fabs(z) >= norm_min<T>) return EPair<T>(0, z);
  const std::int64_t c =
      exp_min<T> + sig_digits<T> - 1 - std::min(split(x).e, split(y).e);
  const T zs = assemble(c, x) - assemble(c, y);  // both scalings exact, no overflow
  return EPair<T>(-c, zs);
}

template <WorkingFloat T>
EPair<T> operator*(const EPair<T>& x, const EPair<T>& y) {
  return EPair<T>(x.e + y.e, x.f * y.f);
}

template <WorkingFloat T>
EPair<T> operator/(const EPair<T>& x, const EPair<T>& y) {
  if (y.f == T(0)) throw std::domain_error("epair: division by zero");
  return EPair<T>(x.e - y.e, x.f / y.f);
}

template <WorkingFloat T>
EPair<T> abs(const EPair<T>& x) noexcept {
  EPair<T> r = x;
  r.f = std::fabs(r.f);
  return r;
}

template <WorkingFloat T>
EPair<T> neg(const EPair<T>& x) noexcept {
  EPair<T> r = x;
  r.f = -r.f;
  return r;
}

// exact multiplication by 2^k
template <WorkingFloat T>
EPair<T> scale2(std::int64_t k, const EPair<T>& x) noexcept {
  EPair<T> r = x;
  if (!r.is_zero()) r.e += k;
  return r;
}

template <WorkingFloat T>
EPair<T> recip(const EPair<T>& x) {
  if (x.f == T(0)) throw std::domain_error("epair: reciprocal of zero");
  return EPair<T>(-x.e, T(1) / x.f);
}

// strict value order, decided on the sign/exponent/mantissa fields alone
template <WorkingFloat T>
bool less(const EPair<T>& x, const EPair<T>& y) noexcept {
  const int sx = (x.f > T(0)) - (x.f < T(0));
  const int sy = (y.f > T(0)) - (y.f < T(0));
  if (sx != sy) return sx < sy;
  if (sx == 0) return false;
  if (x.e != y.e) return sx > 0 ? x.e < y.e : x.e > y.e;
  return x.f < y.f;
}

}  // namespace kogsvd2
