#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <utility>

// Scalar floating-point kernel shared by the whole library: exponent/mantissa
// splitting, a correctly rounded hypot, and the tan/sec helpers every plane
// rotation is derived from.  Rounding is to nearest (ties to even), gradual
// underflow on, exceptions non-stop; both binary32 and binary64 are supported
// as the working type.

namespace kogsvd2 {

template <class T>
concept WorkingFloat = std::is_same_v<T, float> || std::is_same_v<T, double>;

static_assert(std::numeric_limits<float>::is_iec559 &&
              std::numeric_limits<double>::is_iec559);

// p: significand bits; exponent convention: finite nonzero x = 2^e * f with
// 1 <= |f| < 2, so e = floor(lg|x|) even for subnormal x.
template <WorkingFloat T> inline constexpr int sig_digits = std::numeric_limits<T>::digits;
template <WorkingFloat T> inline constexpr int exp_max = std::numeric_limits<T>::max_exponent - 1;
template <WorkingFloat T> inline constexpr int exp_min = std::numeric_limits<T>::min_exponent - 1;
template <WorkingFloat T> inline constexpr T unit_roundoff = std::numeric_limits<T>::epsilon() / 2;
template <WorkingFloat T> inline constexpr T norm_min = std::numeric_limits<T>::min();
template <WorkingFloat T> inline constexpr T norm_max = std::numeric_limits<T>::max();
template <WorkingFloat T> inline constexpr T sub_min = std::numeric_limits<T>::denorm_min();

template <WorkingFloat T>
struct SplitScalar {
  std::int64_t e;
  T f;
};

// (0, +-0) for zeros, (0, +-inf) for infinities, (0, NaN) for NaN; the
// mantissa of a finite nonzero x is normal even when x is subnormal.
template <WorkingFloat T>
inline SplitScalar<T> split(T x) noexcept {
  if (x == T(0) || !std::isfinite(x)) return {0, x};
  int be;
  const T fr = std::frexp(x, &be);  // |fr| in [1/2, 1)
  return {static_cast<std::int64_t>(be) - 1, fr + fr};
}

// nearest working-precision value to 2^e * f; overflow gives +-inf and
// deep underflow gives (+-)0, both as ordinary rounded results
template <WorkingFloat T>
inline T assemble(std::int64_t e, T f) noexcept {
  const long ce = static_cast<long>(e < -100000 ? -100000 : (e > 100000 ? 100000 : e));
  return std::scalbln(f, ce);
}

namespace detail {

inline void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double bv = s - a;
  e = (a - (s - bv)) + (b - bv);
}

// requires |a| >= |b| or a == 0
inline void fast_two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  e = (a - s) + b;
}

inline void two_prod(double a, double b, double& p, double& e) noexcept {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Exact sign of x[0]+...+x[n-1].  Inputs must be far from the overflow and
// underflow thresholds so every two_sum below is error-free.
inline int exact_sum_sign(const double* x, int n) noexcept {
  double comp[16];  // nonoverlapping expansion, increasing magnitude
  int len = 0;
  for (int i = 0; i < n; ++i) {
    double q = x[i];
    int k = 0;
    for (int j = 0; j < len; ++j) {
      double s, err;
      two_sum(q, comp[j], s, err);
      if (err != 0.0) comp[k++] = err;
      q = s;
    }
    if (q != 0.0) comp[k++] = q;
    len = k;
  }
  if (len == 0) return 0;
  return (comp[len - 1] > 0.0) - (comp[len - 1] < 0.0);
}

// Round sqrt(x1+x2+y1+y2) onto the grid {j * 2^tg}, ties to even grid index.
// The sum is the exact scaled square s in [1, 8); z0 is an estimate of
// sqrt(s) accurate to a few units of the last grid place.
inline double round_sqrt_on_grid(double x1, double x2, double y1, double y2,
                                 double z0, int tg, double zlo, double zhi) noexcept {
  const double g = std::scalbn(1.0, tg);
  double z = std::nearbyint(std::scalbn(z0 < zlo ? zlo : (z0 > zhi ? zhi : z0), -tg));
  z = std::scalbn(z, tg);
  if (z < zlo) z = zlo;
  if (z > zhi) z = zhi;
  for (int iter = 0; iter < 8; ++iter) {
    double zq, zqe;
    two_prod(z, z, zq, zqe);
    const double zg = z * g;       // exact: z carries at most p bits, g a power of two
    const double g24 = std::scalbn(1.0, 2 * tg - 2);
    if (z < zhi) {
      // compare s against (z + g/2)^2 = z^2 + z*g + g^2/4
      const double up[8] = {x1, x2, y1, y2, -zq, -zqe, -zg, -g24};
      const int cu = exact_sum_sign(up, 8);
      if (cu > 0) { z += g; continue; }
      if (cu == 0) {  // exact midpoint: pick the even grid index
        const double idx = std::scalbn(z, -tg);
        return (std::fmod(idx, 2.0) == 0.0) ? z : z + g;
      }
    }
    if (z > zlo) {
      const double dn[8] = {x1, x2, y1, y2, -zq, -zqe, zg, -g24};
      const int cd = exact_sum_sign(dn, 8);
      if (cd < 0) { z -= g; continue; }
      if (cd == 0) {
        const double idx = std::scalbn(z, -tg);
        return (std::fmod(idx, 2.0) == 0.0) ? z : z - g;
      }
    }
    break;
  }
  return z;
}

}  // namespace detail

// Correctly rounded sqrt(a^2 + b^2): symmetric, monotone, zero iff both
// arguments are zero, finite whenever the rounded exact value is finite.
template <WorkingFloat T>
T hypot_cr(T a, T b) noexcept {
  if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<T>::infinity();
  if (std::isnan(a) || std::isnan(b)) return a + b;
  T big = std::fabs(a), small = std::fabs(b);
  if (big < small) std::swap(big, small);
  if (small == T(0)) return big;

  constexpr int p = sig_digits<T>;
  const int ea = std::ilogb(big), eb = std::ilogb(small);
  if (ea - eb >= p + 2) return big;  // the tail lies strictly inside big's rounding interval

  const double as = static_cast<double>(std::scalbn(big, -ea));    // [1, 2)
  const double bs = static_cast<double>(std::scalbn(small, -ea));  // [2^-(p+2), 2)
  double x1, x2, y1, y2;  // exact s = as^2 + bs^2 = x1+x2+y1+y2
  if constexpr (std::is_same_v<T, float>) {
    x1 = as * as;
    y1 = bs * bs;
    x2 = y2 = 0.0;
  } else {
    detail::two_prod(as, as, x1, x2);
    detail::two_prod(bs, bs, y1, y2);
  }

  // double-word estimate of sqrt(s)
  double s1, s2;
  detail::two_sum(x1, y1, s1, s2);
  const double slo = (x2 + y2) + s2;
  const double z0 = std::sqrt(s1);
  double zq, zqe;
  detail::two_prod(z0, z0, zq, zqe);
  const double resid = ((s1 - zq) - zqe) + slo;
  const double zdd = z0 + resid / (z0 + z0);

  const double s4[5] = {x1, x2, y1, y2, -4.0};
  const int cmp4 = detail::exact_sum_sign(s4, 5);
  const int tg_floor = (exp_min<T> - (p - 1)) - ea;  // grid of subnormal results, prescaled
  double zs;
  if (cmp4 == 0) {
    zs = 2.0;
  } else if (cmp4 < 0) {  // sqrt(s) in [1, 2)
    const int tg = tg_floor > (1 - p) ? tg_floor : (1 - p);
    zs = detail::round_sqrt_on_grid(x1, x2, y1, y2, zdd, tg, 1.0, 2.0);
  } else {  // sqrt(s) in (2, 2*sqrt(2)]
    const int tg = tg_floor > (2 - p) ? tg_floor : (2 - p);
    zs = detail::round_sqrt_on_grid(x1, x2, y1, y2, zdd, tg, 2.0, 3.0);
  }
  return static_cast<T>(std::scalbn(static_cast<T>(zs), ea));
}

// half-angle tangent from tan(2*phi); +-inf maps to +-1 and the image of the
// finite inputs stays inside [-1, 1]
template <WorkingFloat T>
inline T tan_from_double_angle(T t2) noexcept {
  if (std::isinf(t2)) return std::copysign(T(1), t2);
  return t2 / (T(1) + hypot_cr(t2, T(1)));
}

template <WorkingFloat T>
inline T sec_from_tan(T t) noexcept {
  return hypot_cr(t, T(1));
}

}  // namespace kogsvd2
