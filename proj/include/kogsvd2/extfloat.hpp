#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "kogsvd2/epair.hpp"
#include "kogsvd2/fpcore.hpp"

// Reference scalar for the verification paths: a double-double significand
// (~106 bits) carried under a 64-bit binary exponent, so no intermediate
// quantity can overflow or underflow.  The addition uses the accurate
// double-word sum, keeping the relative error at a few 2^-106 even under
// full cancellation.

namespace kogsvd2 {

struct ExtFloat {
  std::int64_t e{0};
  double hi{0}, lo{0};  // value = 2^e * (hi + lo), |hi| in [1,2) or 0

  bool is_zero() const noexcept { return hi == 0.0; }
  int sign() const noexcept { return (hi > 0.0) - (hi < 0.0); }
};

namespace extdetail {

using detail::fast_two_sum;
using detail::two_prod;
using detail::two_sum;

inline ExtFloat make(std::int64_t e, double h, double l) noexcept {
  if (h == 0.0) {
    h = l;
    l = 0.0;
  }
  if (h == 0.0) return {};
  if (std::fabs(h) < std::fabs(l)) std::swap(h, l);
  double s, t;
  fast_two_sum(h, l, s, t);
  if (s == 0.0) return {};
  const int k = std::ilogb(s);
  // parts below 2^-120 of the head carry no representable information
  double tl = std::scalbn(t, -k);
  if (std::fabs(tl) < 0x1p-120) tl = 0.0;
  return {e + k, std::scalbn(s, -k), tl};
}

}  // namespace extdetail

inline ExtFloat ext_from(double x) noexcept {
  const auto s = split(x);
  return {s.e, s.f, 0.0};
}
inline ExtFloat ext_from(float x) noexcept { return ext_from(static_cast<double>(x)); }

template <WorkingFloat T>
inline ExtFloat ext_from(const EPair<T>& p) noexcept {
  if (p.is_zero()) return {};
  return {p.e, static_cast<double>(p.f), 0.0};
}

inline ExtFloat ext_neg(const ExtFloat& a) noexcept { return {a.e, -a.hi, -a.lo}; }
inline ExtFloat ext_abs(const ExtFloat& a) noexcept {
  return a.hi < 0 ? ext_neg(a) : a;
}
inline ExtFloat ext_scale2(std::int64_t k, const ExtFloat& a) noexcept {
  return a.is_zero() ? a : ExtFloat{a.e + k, a.hi, a.lo};
}

inline ExtFloat ext_add(const ExtFloat& a, const ExtFloat& b) noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t d = a.e - b.e;
  if (d > 120) return a;
  if (d < -120) return b;
  const ExtFloat& big = d >= 0 ? a : b;
  const ExtFloat& sml = d >= 0 ? b : a;
  const int sh = static_cast<int>(d >= 0 ? d : -d);
  const double bh = std::scalbn(sml.hi, -sh), bl = std::scalbn(sml.lo, -sh);
  double s1, s2, t1, t2;
  extdetail::two_sum(big.hi, bh, s1, s2);
  extdetail::two_sum(big.lo, bl, t1, t2);
  s2 += t1;
  extdetail::fast_two_sum(s1, s2, s1, s2);
  s2 += t2;
  extdetail::fast_two_sum(s1, s2, s1, s2);
  return extdetail::make(big.e, s1, s2);
}

inline ExtFloat ext_sub(const ExtFloat& a, const ExtFloat& b) noexcept {
  return ext_add(a, ext_neg(b));
}

inline ExtFloat ext_mul(const ExtFloat& a, const ExtFloat& b) noexcept {
  if (a.is_zero() || b.is_zero()) return {};
  double p, e;
  extdetail::two_prod(a.hi, b.hi, p, e);
  e += a.hi * b.lo + a.lo * b.hi + a.lo * b.lo;
  return extdetail::make(a.e + b.e, p, e);
}

inline ExtFloat ext_div(const ExtFloat& a, const ExtFloat& b) noexcept {
  if (a.is_zero()) return {};
  const double bd = b.hi + b.lo;
  const double q1 = a.hi / bd;
  double p, pe;
  extdetail::two_prod(q1, b.hi, p, pe);
  const double r = ((a.hi - p) - pe) + a.lo - q1 * b.lo;
  const double q2 = r / bd;
  return extdetail::make(a.e - b.e, q1, q2);
}

inline ExtFloat ext_sqrt(const ExtFloat& a) noexcept {
  if (a.is_zero()) return {};
  std::int64_t e = a.e;
  double h = a.hi, l = a.lo;
  if (e & 1) {  // even exponent so the root's scale is exact
    h *= 2;
    l *= 2;
    e -= 1;
  }
  const double q1 = std::sqrt(h + l);
  double p, pe;
  extdetail::two_prod(q1, q1, p, pe);
  double s1, s2, t1, t2;
  extdetail::two_sum(h, -p, s1, s2);
  extdetail::two_sum(l, -pe, t1, t2);
  s2 += t1;
  extdetail::fast_two_sum(s1, s2, s1, s2);
  const double q2 = (s1 + (s2 + t2)) / (2 * q1);
  return extdetail::make(e / 2, q1, q2);
}

inline int ext_cmp(const ExtFloat& a, const ExtFloat& b) noexcept {
  return ext_sub(a, b).sign();
}

// nearest double to 2^e * (hi+lo); overflows and underflows like scalbn
inline double ext_to_double(const ExtFloat& a) noexcept {
  const long ce = static_cast<long>(a.e < -100000 ? -100000 : (a.e > 100000 ? 100000 : a.e));
  return std::scalbln(a.hi + a.lo, ce);
}

inline ExtFloat ext_pow10(std::int64_t n) noexcept {
  ExtFloat base = ext_from(10.0);
  if (n < 0) base = ext_div(ext_from(1.0), base);
  std::uint64_t k = static_cast<std::uint64_t>(n < 0 ? -n : n);
  ExtFloat acc = ext_from(1.0);
  while (k) {
    if (k & 1) acc = ext_mul(acc, base);
    base = ext_mul(base, base);
    k >>= 1;
  }
  return acc;
}

// decimal rendering that stays meaningful outside the double range (used for
// condition numbers); plain shortest-round-trip formatting is the caller's
// job for in-range values
inline std::string ext_to_decimal(const ExtFloat& a) {
  if (a.is_zero()) return "0";
  const double l10 = static_cast<double>(a.e) * 0.30102999566398119521 +
                     std::log10(std::fabs(a.hi + a.lo));
  std::int64_t d10 = static_cast<std::int64_t>(std::floor(l10));
  ExtFloat m = ext_mul(a, ext_pow10(-d10));
  double md = ext_to_double(m);
  if (std::fabs(md) >= 10.0) {
    md /= 10.0;
    ++d10;
  } else if (std::fabs(md) < 1.0) {
    md *= 10.0;
    --d10;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17ge%+lld", md, static_cast<long long>(d10));
  return buf;
}

}  // namespace kogsvd2
