#pragma once

#include <cmath>

#include "kogsvd2/fpcore.hpp"

// Reference 2x2 upper-triangular SVD in the classic LAPACK style (xLASV2),
// ported with its exact arithmetic sequence and sign conventions so it can
// serve as the comparison routine in the error studies.  The rotation pairs
// satisfy
//   [ csl snl ]  [ f g ]  [ csr -snr ]   [ ssmax   0   ]
//   [-snl csl ]  [ 0 h ]  [ snr  csr ] = [   0   ssmin ].

namespace kogsvd2 {

template <WorkingFloat T>
struct Lasv2Out {
  T ssmin{}, ssmax{};
  T snr{}, csr{}, snl{}, csl{};
};

template <WorkingFloat T>
Lasv2Out<T> lasv2_ref(T f, T g, T h) noexcept {
  constexpr T one = T(1), two = T(2), four = T(4), half = T(0.5), zero = T(0);
  const T eps = unit_roundoff<T>;  // xLAMCH('E'): 2^-p under round-to-nearest

  T ssmin, ssmax, snr, csr, snl, csl;
  T clt{}, crt{}, slt{}, srt{};

  T ft = f;
  T fa = std::fabs(ft);
  T ht = h;
  T ha = std::fabs(h);

  // pmax points to the largest absolute entry: 1 = f, 2 = g, 3 = h
  int pmax = 1;
  const bool swap = ha > fa;
  if (swap) {
    pmax = 3;
    std::swap(ft, ht);
    std::swap(fa, ha);
  }
  const T gt = g;
  const T ga = std::fabs(gt);
  if (ga == zero) {
    ssmin = ha;
    ssmax = fa;
    clt = one;
    crt = one;
    slt = zero;
    srt = zero;
  } else {
    bool gasmal = true;
    if (ga > fa) {
      pmax = 2;
      if (fa / ga < eps) {
        // very large ga
        gasmal = false;
        ssmax = ga;
        if (ha > one)
          ssmin = fa / (ga / ha);
        else
          ssmin = (fa / ga) * ha;
        clt = one;
        slt = ht / gt;
        srt = one;
        crt = ft / gt;
      }
    }
    if (gasmal) {
      const T d = fa - ha;
      T l;
      if (d == fa)
        l = one;  // copes with infinite f or h
      else
        l = d / fa;
      const T m = gt / ft;
      T t = two - l;
      const T mm = m * m;
      const T tt = t * t;
      const T s = std::sqrt(tt + mm);
      T r;
      if (l == zero)
        r = std::fabs(m);
      else
        r = std::sqrt(l * l + mm);
      const T a = half * (s + r);
      ssmin = ha / a;
      ssmax = fa * a;
      if (mm == zero) {
        // m is very tiny
        if (l == zero)
          t = std::copysign(two, ft) * std::copysign(one, gt);
        else
          t = gt / std::copysign(d, ft) + m / t;
      } else {
        t = (m / (s + t) + m / (r + l)) * (one + a);
      }
      const T ll = std::sqrt(t * t + four);
      crt = two / ll;
      srt = t / ll;
      clt = (crt + srt * m) / a;
      slt = (ht / ft) * srt / a;
    }
  }
  if (swap) {
    csl = srt;
    snl = crt;
    csr = slt;
    snr = clt;
  } else {
    csl = clt;
    snl = slt;
    csr = crt;
    snr = srt;
  }

  // correct the signs of ssmax and ssmin
  T tsign{};
  if (pmax == 1) tsign = std::copysign(one, csr) * std::copysign(one, csl) * std::copysign(one, f);
  if (pmax == 2) tsign = std::copysign(one, snr) * std::copysign(one, csl) * std::copysign(one, g);
  if (pmax == 3) tsign = std::copysign(one, snr) * std::copysign(one, snl) * std::copysign(one, h);
  ssmax = std::copysign(ssmax, tsign);
  ssmin = std::copysign(ssmin, tsign * std::copysign(one, f) * std::copysign(one, h));

  return {ssmin, ssmax, snr, csr, snl, csl};
}

}  // namespace kogsvd2
