#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "kogsvd2/classify.hpp"
#include "kogsvd2/epair.hpp"
#include "kogsvd2/fpcore.hpp"

// Three-phase SVD of a real 2x2 matrix: prescaling and the simple zero
// patterns, a fully pivoted URV triangularization, and a triangular SVD built
// on the correctly rounded hypot, with the left rotations composed into a
// single one.  Factors U and V are exact products of signed permutations and
// one plane rotation each; the singular values stay in exponent-mantissa form
// until the caller assembles them.

namespace kogsvd2 {

// signed permutation: exactly one +-1 in every row and column
struct SignPerm {
  std::int8_t m[2][2]{{1, 0}, {0, 1}};

  static SignPerm identity() noexcept { return {}; }
  static SignPerm exchange() noexcept { return {{{0, 1}, {1, 0}}}; }
  static SignPerm row_signs(int s0, int s1) noexcept {
    return {{{static_cast<std::int8_t>(s0), 0}, {0, static_cast<std::int8_t>(s1)}}};
  }

  friend SignPerm operator*(const SignPerm& a, const SignPerm& b) noexcept {
    SignPerm r{{{0, 0}, {0, 0}}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r.m[i][j] = static_cast<std::int8_t>(a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j]);
    return r;
  }

  SignPerm transposed() const noexcept {
    return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}};
  }

  template <WorkingFloat T>
  Matrix2<T> as_matrix() const noexcept {
    return {static_cast<T>(m[0][0]), static_cast<T>(m[0][1]), static_cast<T>(m[1][0]),
            static_cast<T>(m[1][1])};
  }
};

// s * g, error-free
template <WorkingFloat T>
Matrix2<T> apply_left(const SignPerm& s, const Matrix2<T>& g) noexcept {
  Matrix2<T> r;
  for (int i = 0; i < 2; ++i) {
    T a, b;
    if (s.m[i][0] != 0) {
      a = static_cast<T>(s.m[i][0]) * g.g11;
      b = static_cast<T>(s.m[i][0]) * g.g12;
    } else {
      a = static_cast<T>(s.m[i][1]) * g.g21;
      b = static_cast<T>(s.m[i][1]) * g.g22;
    }
    (i == 0 ? r.g11 : r.g21) = a;
    (i == 0 ? r.g12 : r.g22) = b;
  }
  return r;
}

// g * s, error-free
template <WorkingFloat T>
Matrix2<T> apply_right(const Matrix2<T>& g, const SignPerm& s) noexcept {
  Matrix2<T> r;
  for (int j = 0; j < 2; ++j) {
    T a, b;
    if (s.m[0][j] != 0) {
      a = g.g11 * static_cast<T>(s.m[0][j]);
      b = g.g21 * static_cast<T>(s.m[0][j]);
    } else {
      a = g.g12 * static_cast<T>(s.m[1][j]);
      b = g.g22 * static_cast<T>(s.m[1][j]);
    }
    (j == 0 ? r.g11 : r.g12) = a;
    (j == 0 ? r.g21 : r.g22) = b;
  }
  return r;
}

enum class Tan2PhiBranch : std::uint8_t {
  none,
  diag_equal,     // r11 == r22
  offdiag_equal,  // r12 == r22
  small_ratio,    // fl(r11/r12) < eps, triangular-input case only
  fallback,       // hypot not correctly rounded
  general,
  general_inf,    // h == r22
};

enum class SvdPath : std::uint8_t {
  simple,
  mono_col,
  mono_row,
  tri13,
  urv15,
  urv15_to_diag,
  urv15_to_row,
};

struct BranchTrace {
  std::uint8_t type_initial{0};
  std::uint8_t type_scaled{0};
  SvdPath path{SvdPath::simple};
  Tan2PhiBranch t2p{Tan2PhiBranch::none};
  bool tanpsi_inf{false};
  bool diag_swap{false};
  bool sigma_swap{false};
  bool compose_minus{false};
  bool prescale_inexact{false};
  bool urv_col_swap{false};
  bool urv_row_swap{false};
};

enum class WideChannel : std::uint8_t { wider_type, kahan_det };

struct Options {
  bool hypot_is_cr = true;   // false exercises the no-correctly-rounded-hypot fallback
  bool ominus_for_d = false; // underflow-avoiding subtraction for d (default: plain)
#ifdef KOGSVD2_KAHAN_DET
  WideChannel wide_channel = WideChannel::kahan_det;
#else
  WideChannel wide_channel = WideChannel::wider_type;
#endif
};

template <WorkingFloat T>
struct Svd2Result {
  Matrix2<T> u, v;
  EPair<T> sigma1, sigma2;
  std::int64_t s{0};
  BranchTrace trace;
};

// -------------------------------------------------------------------------
// phase 1: the simple patterns

// t' congruent to 9 (at most one nonzero per row and column): exact SVD by
// permutations and row signs
template <WorkingFloat T>
Svd2Result<T> svd_simple(const Matrix2<T>& a, std::int64_t s, BranchTrace trace) {
  trace.path = SvdPath::simple;
  const std::uint8_t t = trace.type_scaled;
  SignPerm pu = SignPerm::identity(), pv = SignPerm::identity();
  switch (t) {
    case 2:  // lone g21: rows
    case 6:  // antidiagonal: rows
      pu = SignPerm::exchange();
      break;
    case 4:  // lone g12: columns
      pv = SignPerm::exchange();
      break;
    case 8:  // lone g22: both
      pu = pv = SignPerm::exchange();
      break;
    default:  // 0, 1, 9
      break;
  }
  Matrix2<T> d = apply_right(apply_left(pu.transposed(), a), pv);
  if (std::fabs(d.g11) < std::fabs(d.g22)) {
    pu = pu * SignPerm::exchange();
    pv = pv * SignPerm::exchange();
    d = apply_right(apply_left(SignPerm::exchange(), d), SignPerm::exchange());
  }
  const SignPerm sg =
      SignPerm::row_signs(std::signbit(d.g11) ? -1 : 1, std::signbit(d.g22) ? -1 : 1);
  Svd2Result<T> out;
  out.u = (pu * sg).template as_matrix<T>();
  out.v = pv.template as_matrix<T>();
  out.sigma1 = scale2(-s, EPair<T>(0, std::fabs(d.g11)));
  out.sigma2 = scale2(-s, EPair<T>(0, std::fabs(d.g22)));
  out.s = s;
  out.trace = trace;
  return out;
}

namespace detail {

template <WorkingFloat T>
struct Rot {
  T c, s;
  Matrix2<T> as_matrix() const noexcept { return {c, -s, s, c}; }
};

template <WorkingFloat T>
inline Rot<T> rot_from_tan_sec(T tan, T sec) noexcept {
  return {T(1) / sec, tan / sec};
}

}  // namespace detail

// t' congruent to 3 or 5 (one nonzero column or row): one Givens rotation,
// the larger singular value set to the hypot of the nonzero pair
template <WorkingFloat T>
Svd2Result<T> svd_mono(const Matrix2<T>& gp, std::int64_t s, BranchTrace trace) {
  const std::uint8_t t = trace.type_scaled;
  Svd2Result<T> out;
  out.s = s;
  if (t == 3 || t == 12) {
    trace.path = SvdPath::mono_col;
    const SignPerm pv = t == 12 ? SignPerm::exchange() : SignPerm::identity();
    Matrix2<T> a = apply_right(gp, pv);
    const SignPerm su = SignPerm::row_signs(std::signbit(a.g11) ? -1 : 1,
                                            std::signbit(a.g21) ? -1 : 1);
    a = apply_left(su, a);
    const bool swap = a.g11 < a.g21;
    const SignPerm pu = swap ? SignPerm::exchange() : SignPerm::identity();
    a = apply_left(pu, a);
    const T tan = a.g21 / a.g11;
    const T sec = sec_from_tan(tan);
    const T sig1 = hypot_cr(a.g11, a.g21);
    const auto uth = detail::rot_from_tan_sec(tan, sec).as_matrix();
    out.u = apply_left(su, apply_left(pu, uth));
    out.v = pv.template as_matrix<T>();
    out.sigma1 = scale2(-s, EPair<T>(0, sig1));
  } else {  // 5 or 10
    trace.path = SvdPath::mono_row;
    const SignPerm pu = t == 10 ? SignPerm::exchange() : SignPerm::identity();
    Matrix2<T> a = apply_left(pu.transposed(), gp);
    const SignPerm sv = SignPerm::row_signs(std::signbit(a.g11) ? -1 : 1,
                                            std::signbit(a.g12) ? -1 : 1);
    a = apply_right(a, sv);
    const bool swap = a.g11 < a.g12;
    const SignPerm pvo = swap ? SignPerm::exchange() : SignPerm::identity();
    a = apply_right(a, pvo);
    const T tan = a.g12 / a.g11;
    const T sec = sec_from_tan(tan);
    const T sig1 = hypot_cr(a.g11, a.g12);
    const auto vth = detail::rot_from_tan_sec(tan, sec).as_matrix();
    out.u = pu.template as_matrix<T>();
    out.v = apply_left(sv, apply_left(pvo, vth));
    out.sigma1 = scale2(-s, EPair<T>(0, sig1));
  }
  out.sigma2 = EPair<T>();
  out.trace = trace;
  return out;
}

// -------------------------------------------------------------------------
// phase 2: triangularization

// t' congruent to 13 (three nonzeros): error-free reduction to a positive
// upper triangle, R = Uplus^T G' Vplus exactly
template <WorkingFloat T>
struct Tri13 {
  Matrix2<T> r;
  SignPerm uplus, vplus;
};

template <WorkingFloat T>
Tri13<T> triangularize13(const Matrix2<T>& gp, std::uint8_t t) {
  const bool row_swap = t == 14 || t == 11;
  const bool col_swap = t == 7 || t == 11;
  const SignPerm pu = row_swap ? SignPerm::exchange() : SignPerm::identity();
  const SignPerm pv = col_swap ? SignPerm::exchange() : SignPerm::identity();
  Matrix2<T> a = apply_right(apply_left(pu.transposed(), gp), pv);
  const int s11 = std::signbit(a.g11) ? -1 : 1;
  a = apply_left(SignPerm::row_signs(s11, 1), a);
  const int s12 = std::signbit(a.g12) ? -1 : 1;
  a = apply_right(a, SignPerm::row_signs(1, s12));
  const int s22 = std::signbit(a.g22) ? -1 : 1;
  a = apply_left(SignPerm::row_signs(1, s22), a);
  return {a, pu * SignPerm::row_signs(s11, s22), pv * SignPerm::row_signs(1, s12)};
}

namespace detail {

// fl(FL(FL(a*b + c*d) / q1) / q2) with FL carried at no less than twice the
// working precision.  The FL carrier is not assumed to span a wider exponent
// range than the working type: each factor is brought to [1,2) and the two
// products aligned at their larger scale, which keeps every intermediate
// normal for all inputs (products of dyadic values cannot cancel below their
// common quantum).  The quotient is scaled back before the final division.
template <WorkingFloat T>
T wide_dot2_div(T a, T b, T c, T d, T q1, T q2, WideChannel wc) {
  const int sa = std::ilogb(a) + std::ilogb(b);
  const int sb = std::ilogb(c) + std::ilogb(d);
  const int scale = std::max(sa, sb);
  const int guard = wc == WideChannel::kahan_det ? sig_digits<T> + 20 : 120;
  // factor pairs scaled so both products land at 2^-scale of their true value
  T a1 = std::scalbn(a, -std::ilogb(a));
  T b1 = std::scalbn(b, -(std::ilogb(b) + (scale - sa)));
  T c1 = std::scalbn(c, -std::ilogb(c));
  T d1 = std::scalbn(d, -(std::ilogb(d) + (scale - sb)));
  if (scale - sa > guard) a1 = b1 = T(0);  // term below the carrier's horizon
  if (scale - sb > guard) c1 = d1 = T(0);
  const T qs = std::scalbn(q1, -std::ilogb(q1));
  const int kq = std::ilogb(q1);

  if (wc == WideChannel::kahan_det) {
    const T w = c1 * d1;
    const T e = std::fma(c1, d1, -w);
    const T f = std::fma(a1, b1, w);
    return std::scalbn((f + e) / qs, scale - kq) / q2;
  }
  if constexpr (std::is_same_v<T, float>) {
    const double num = static_cast<double>(a1) * b1 + static_cast<double>(c1) * d1;
    return std::scalbn(static_cast<T>(num / static_cast<double>(qs)), scale - kq) / q2;
  } else {
    double p1, e1, p2, e2;
    two_prod(a1, b1, p1, e1);
    two_prod(c1, d1, p2, e2);
    double s1, s2, t1, t2;
    two_sum(p1, p2, s1, s2);
    two_sum(e1, e2, t1, t2);
    s2 += t1;
    fast_two_sum(s1, s2, s1, s2);
    s2 += t2;
    fast_two_sum(s1, s2, s1, s2);
    const double h = s1 / qs;
    const double rem = std::fma(-h, qs, s1) + s2;
    return std::scalbn(h + rem / qs, scale - kq) / q2;
  }
}

}  // namespace detail

// fully pivoted URV of a matrix with no zeros (t' = 15)
template <WorkingFloat T>
struct Urv15 {
  bool col_swap{false}, row_swap{false};
  int sr0{1}, sr1{1};           // row signs taken from the first column
  Matrix2<T> gppp;              // fully pivoted input of the QR step
  T tan_theta{0}, sec_theta{1};
  T r11{0}, r12_raw{0}, r22_raw{0};
  int s12{1}, s22{1};
  Matrix2<T> r;                 // positive upper triangle, when next == triangular
  bool ext_is_r22{true};        // which element went through the wide channel
  enum class Next : std::uint8_t { triangular, diagonal, row } next{Next::triangular};
};

template <WorkingFloat T>
Urv15<T> urv15(const Matrix2<T>& gp, const Options& opt = {}) {
  Urv15<T> out;
  const T w1 = hypot_cr(gp.g11, gp.g21);
  const T w2 = hypot_cr(gp.g12, gp.g22);
  out.col_swap = w1 < w2;
  Matrix2<T> a = out.col_swap ? Matrix2<T>{gp.g12, gp.g11, gp.g22, gp.g21} : gp;
  const T w1p = out.col_swap ? w2 : w1;
  out.sr0 = std::signbit(a.g11) ? -1 : 1;
  out.sr1 = std::signbit(a.g21) ? -1 : 1;
  a = apply_left(SignPerm::row_signs(out.sr0, out.sr1), a);
  out.row_swap = a.g11 < a.g21;
  if (out.row_swap) a = Matrix2<T>{a.g21, a.g22, a.g11, a.g12};
  out.gppp = a;  // a.g11 >= a.g21 > 0

  out.tan_theta = a.g21 / a.g11;
  out.sec_theta = sec_from_tan(out.tan_theta);
  out.r11 = w1p;
  const bool same_sign = std::signbit(a.g12) == std::signbit(a.g22);
  if (same_sign) {
    out.r12_raw = std::fma(a.g22, out.tan_theta, a.g12) / out.sec_theta;
    out.r22_raw = detail::wide_dot2_div(a.g22, a.g11, -a.g12, a.g21, a.g11,
                                        out.sec_theta, opt.wide_channel);
    out.ext_is_r22 = true;
  } else {
    out.r22_raw = std::fma(-a.g12, out.tan_theta, a.g22) / out.sec_theta;
    out.r12_raw = detail::wide_dot2_div(a.g12, a.g11, a.g22, a.g21, a.g11,
                                        out.sec_theta, opt.wide_channel);
    out.ext_is_r22 = false;
  }

  if (out.r12_raw == T(0)) {
    out.next = Urv15<T>::Next::diagonal;
    return out;
  }
  if (out.r22_raw == T(0)) {
    out.next = Urv15<T>::Next::row;
    return out;
  }
  out.s12 = std::signbit(out.r12_raw) ? -1 : 1;
  const T r22p = static_cast<T>(out.s12) * out.r22_raw;
  out.s22 = std::signbit(r22p) ? -1 : 1;
  out.r = {out.r11, std::fabs(out.r12_raw), T(0), std::fabs(out.r22_raw)};
  out.next = Urv15<T>::Next::triangular;
  return out;
}

// -------------------------------------------------------------------------
// phase 3: SVD of the positive upper triangle

// Double-angle tangent of the left rotation.  rt must satisfy
// rt.g11 >= rt.g22 > 0, rt.g12 > 0 (the caller permutes R^T otherwise).
template <WorkingFloat T>
T tan2phi(const Matrix2<T>& rt, bool t13, const Options& opt, Tan2PhiBranch& branch) {
  const T r11 = rt.g11, r12 = rt.g12, r22 = rt.g22;
  if (r11 == r22) {
    branch = Tan2PhiBranch::diag_equal;
    return (T(2) * r22) / r12;
  }
  if (r12 == r22) {
    branch = Tan2PhiBranch::offdiag_equal;
    const EPair<T> num = scale2(1, EPair<T>(0, r12) * EPair<T>(0, r22));
    return (num / (EPair<T>(0, r11) * EPair<T>(0, r11))).value();
  }
  if (t13 && r11 / r12 < unit_roundoff<T>) {
    branch = Tan2PhiBranch::small_ratio;
    return (T(2) * r22) / r12;
  }
  if (!opt.hypot_is_cr) {
    branch = Tan2PhiBranch::fallback;
    if (r11 > r12) {
      const T x = r12 / r11, y = r22 / r11;
      return ((T(2) * x) * y) / std::max(std::fma(x - y, x + y, T(1)), T(0));
    }
    const T x = r11 / r12, y = r22 / r12;
    return (T(2) * y) / std::max(std::fma(x - y, x + y, T(1)), T(0));
  }
  const T h = hypot_cr(r11, r12);
  if (h == r22) {
    branch = Tan2PhiBranch::general_inf;
    return std::numeric_limits<T>::infinity();
  }
  branch = Tan2PhiBranch::general;
  const EPair<T> sum = oplus(h, r22);
  const EPair<T> dif = opt.ominus_for_d ? ominus(h, r22) : EPair<T>(0, h - r22);
  const EPair<T> num = scale2(1, EPair<T>(0, r12) * EPair<T>(0, r22));
  return (num / (dif * sum)).value();
}

template <WorkingFloat T>
struct TriSvd {
  T tan_phi{0}, sec_phi{1}, cos_phi{1}, sin_phi{0};
  T tan_psi{0}, sec_psi{1}, cos_psi{1}, sin_psi{0};
  EPair<T> sig1, sig2;  // ordered: !(sig1 < sig2)
  bool sigma_swapped{false};
  bool tanpsi_inf{false};
  Tan2PhiBranch t2p{Tan2PhiBranch::none};
};

// Functions of phi and psi and the singular values of rt;
// rt.g11 >= rt.g22 > 0, rt.g12 > 0.
template <WorkingFloat T>
TriSvd<T> tri_svd(const Matrix2<T>& rt, bool t13, const Options& opt = {}) {
  TriSvd<T> out;
  const T t2f = tan2phi(rt, t13, opt, out.t2p);
  out.tan_phi = tan_from_double_angle(t2f);
  out.sec_phi = sec_from_tan(out.tan_phi);
  out.cos_phi = T(1) / out.sec_phi;
  out.sin_phi = out.tan_phi / out.sec_phi;

  const EPair<T> r11p(0, rt.g11), r22p(0, rt.g22);
  const T t = std::fma(rt.g22, out.tan_phi, rt.g12);  // always finite after prescaling
  out.tan_psi = t / rt.g11;
  if (std::isinf(out.tan_psi)) {
    out.tanpsi_inf = true;
    const EPair<T> tp(0, t);
    const EPair<T> cos_pair = r11p / tp;
    out.cos_psi = cos_pair.value();  // subnormal output allowed
    out.sin_psi = T(1);
    out.sec_psi = std::numeric_limits<T>::infinity();
    out.sig1 = tp;
    out.sig2 = r22p * cos_pair;
  } else {
    out.sec_psi = sec_from_tan(out.tan_psi);
    out.cos_psi = T(1) / out.sec_psi;
    out.sin_psi = out.tan_psi / out.sec_psi;
    const EPair<T> ratio = EPair<T>(0, out.sec_phi) / EPair<T>(0, out.sec_psi);
    out.sig1 = r11p / ratio;
    out.sig2 = r22p * ratio;
  }
  if (less(out.sig1, out.sig2)) {
    std::swap(out.sig1, out.sig2);
    out.sigma_swapped = true;
  }
  return out;
}

template <WorkingFloat T>
struct RotCS {
  T c, s;
};

// Single-rotation form of the product of the left SVD rotation (tangent
// tan_phi_bold, possibly infinite) with the QR rotation (tan_theta in [0,1]);
// minus form when a second-row sign flip sits between the two factors.  The
// returned cosine/sine carry the correct quadrant.
template <WorkingFloat T>
RotCS<T> compose_left(T tan_phi_bold, T tan_theta, bool minus_form) noexcept {
  T tanchi;
  bool beyond_quarter;  // composed angle past pi/2
  if (std::isinf(tan_phi_bold)) {
    tanchi = (minus_form ? T(1) : T(-1)) / tan_theta;
    beyond_quarter = !minus_form;
  } else {
    const T num = minus_form ? tan_phi_bold - tan_theta : tan_phi_bold + tan_theta;
    const T den = minus_form ? std::fma(tan_phi_bold, tan_theta, T(1))
                             : std::fma(-tan_phi_bold, tan_theta, T(1));
    // an infinite denominator only arises with tan_theta >> eps^2; the limit
    // form keeps the quotient meaningful
    tanchi = std::isinf(den) ? std::copysign(T(1) / tan_theta, den) : num / den;
    beyond_quarter = !minus_form && den < T(0);
  }
  RotCS<T> r;
  if (std::isinf(tanchi)) {
    r.c = T(0);
    r.s = std::copysign(T(1), tanchi);
  } else {
    const T sec = sec_from_tan(tanchi);
    r.c = T(1) / sec;
    r.s = tanchi / sec;
  }
  if (beyond_quarter) {
    r.c = -r.c;
    r.s = -r.s;
  }
  return r;
}

namespace detail {

template <WorkingFloat T>
inline Matrix2<T> col2_negated(const Matrix2<T>& m) noexcept {
  return {m.g11, -m.g12, m.g21, -m.g22};
}
template <WorkingFloat T>
inline Matrix2<T> row2_negated(const Matrix2<T>& m) noexcept {
  return {m.g11, m.g12, -m.g21, -m.g22};
}
template <WorkingFloat T>
inline Matrix2<T> cols_swapped(const Matrix2<T>& m) noexcept {
  return {m.g12, m.g11, m.g22, m.g21};
}

}  // namespace detail

// -------------------------------------------------------------------------
// final assembly

template <WorkingFloat T>
struct LeftFactor {
  bool composed{false};  // general (no-zeros) inputs compose two rotations
  SignPerm uplus;        // explicit error-free factor otherwise
  int sr0{1}, sr1{1};
  bool row_swap{false};
  T tan_theta{0};
  int s22{1};
};

// Swap identities, error-free sign/permutation products, backscaling.
template <WorkingFloat T>
Svd2Result<T> assemble_svd(const Matrix2<T>& r, const LeftFactor<T>& left,
                           const SignPerm& vplus, std::int64_t s, bool t13,
                           const Options& opt, BranchTrace trace) {
  const bool diag_swap = r.g11 < r.g22;
  trace.diag_swap = diag_swap;
  const Matrix2<T> rt =
      diag_swap ? Matrix2<T>{r.g22, r.g12, T(0), r.g11} : r;
  const TriSvd<T> ts = tri_svd(rt, t13, opt);
  trace.t2p = ts.t2p;
  trace.tanpsi_inf = ts.tanpsi_inf;
  trace.sigma_swap = ts.sigma_swapped;

  // right factor: a plane rotation (times a column sign when swapped)
  const Matrix2<T> vrot =
      diag_swap ? Matrix2<T>{ts.sin_phi, ts.cos_phi, ts.cos_phi, -ts.sin_phi}
                : Matrix2<T>{ts.cos_psi, -ts.sin_psi, ts.sin_psi, ts.cos_psi};
  Matrix2<T> v = apply_left(vplus, vrot);

  Matrix2<T> u;
  if (!left.composed) {
    const Matrix2<T> urot =
        diag_swap ? Matrix2<T>{ts.sin_psi, ts.cos_psi, ts.cos_psi, -ts.sin_psi}
                  : Matrix2<T>{ts.cos_phi, -ts.sin_phi, ts.sin_phi, ts.cos_phi};
    u = apply_left(left.uplus, urot);
  } else {
    const T tan_phi_bold = diag_swap ? T(1) / ts.tan_psi : ts.tan_phi;
    const bool minus_form = left.s22 < 0;
    trace.compose_minus = minus_form;
    const RotCS<T> chi = compose_left(tan_phi_bold, left.tan_theta, minus_form);
    Matrix2<T> m = Matrix2<T>{chi.c, -chi.s, chi.s, chi.c};
    if (diag_swap) m = detail::col2_negated(m);
    if (minus_form) m = detail::row2_negated(m);
    if (left.row_swap) m = apply_left(SignPerm::exchange(), m);
    u = apply_left(SignPerm::row_signs(left.sr0, left.sr1), m);
  }

  if (ts.sigma_swapped) {
    u = detail::cols_swapped(u);
    v = detail::cols_swapped(v);
  }

  Svd2Result<T> out;
  out.u = u;
  out.v = v;
  out.sigma1 = scale2(-s, ts.sig1);
  out.sigma2 = scale2(-s, ts.sig2);
  out.s = s;
  out.trace = trace;
  return out;
}

// -------------------------------------------------------------------------
// driver

template <WorkingFloat T>
Svd2Result<T> svd2(const Matrix2<T>& g, const Options& opt = {}) {
  const TypeInfo info = classify(g);
  BranchTrace trace;
  trace.type_initial = info.t;

  if (info.s_type == 0) {  // not scaled, only permuted
    trace.type_scaled = info.t;
    return svd_simple(g, 0, trace);
  }

  const auto pre = prescale(g, info);
  trace.prescale_inexact = pre.inexact_underflow;
  const std::uint8_t t1 = classify(pre.gp).t;
  trace.type_scaled = t1;

  if (scale_type_of(t1) == 0) return svd_simple(pre.gp, pre.s, trace);
  if (t1 == 3 || t1 == 12 || t1 == 5 || t1 == 10) return svd_mono(pre.gp, pre.s, trace);

  if (t1 != 15) {  // 7, 11, 13, 14
    trace.path = SvdPath::tri13;
    const auto tri = triangularize13(pre.gp, t1);
    LeftFactor<T> left;
    left.uplus = tri.uplus;
    return assemble_svd(tri.r, left, tri.vplus, pre.s, true, opt, trace);
  }

  const auto urv = urv15(pre.gp, opt);
  trace.urv_col_swap = urv.col_swap;
  trace.urv_row_swap = urv.row_swap;
  const SignPerm pu = urv.row_swap ? SignPerm::exchange() : SignPerm::identity();
  const SignPerm s1 = SignPerm::row_signs(urv.sr0, urv.sr1);
  const SignPerm pv = urv.col_swap ? SignPerm::exchange() : SignPerm::identity();

  if (urv.next == Urv15<T>::Next::triangular) {
    trace.path = SvdPath::urv15;
    LeftFactor<T> left;
    left.composed = true;
    left.sr0 = urv.sr0;
    left.sr1 = urv.sr1;
    left.row_swap = urv.row_swap;
    left.tan_theta = urv.tan_theta;
    left.s22 = urv.s22;
    const SignPerm vplus = pv * SignPerm::row_signs(1, urv.s12);
    return assemble_svd(urv.r, left, vplus, pre.s, false, opt, trace);
  }

  // degenerate triangle: finish as a simple pattern, keeping the applied
  // rotation in an explicitly formed left factor
  const auto uth = detail::rot_from_tan_sec(urv.tan_theta, urv.sec_theta).as_matrix();
  const Matrix2<T> uleft = apply_left(s1, apply_left(pu, uth));

  Svd2Result<T> out;
  out.s = pre.s;
  if (urv.next == Urv15<T>::Next::diagonal) {
    trace.path = SvdPath::urv15_to_diag;
    T d1 = urv.r11, d2 = urv.r22_raw;
    const bool ord_swap = std::fabs(d1) < std::fabs(d2);
    if (ord_swap) std::swap(d1, d2);
    const SignPerm ps = ord_swap ? SignPerm::exchange() : SignPerm::identity();
    const SignPerm sg = SignPerm::row_signs(std::signbit(d1) ? -1 : 1,
                                            std::signbit(d2) ? -1 : 1);
    out.u = apply_right(apply_right(uleft, ps), sg);
    out.v = (pv * ps).template as_matrix<T>();
    out.sigma1 = scale2(-pre.s, EPair<T>(0, std::fabs(d1)));
    out.sigma2 = scale2(-pre.s, EPair<T>(0, std::fabs(d2)));
  } else {
    trace.path = SvdPath::urv15_to_row;
    // remaining row [r11, r12_raw]: column signs, ordering, one rotation
    const SignPerm sv2 = SignPerm::row_signs(1, std::signbit(urv.r12_raw) ? -1 : 1);
    T a = urv.r11, b = std::fabs(urv.r12_raw);
    const bool ord_swap = a < b;
    if (ord_swap) std::swap(a, b);
    const SignPerm pvo = ord_swap ? SignPerm::exchange() : SignPerm::identity();
    const T tan = b / a;
    const T sec = sec_from_tan(tan);
    const auto vth = detail::rot_from_tan_sec(tan, sec).as_matrix();
    out.u = uleft;
    out.v = apply_left(pv, apply_left(sv2, apply_left(pvo, vth)));
    out.sigma1 = scale2(-pre.s, EPair<T>(0, hypot_cr(urv.r11, urv.r12_raw)));
    out.sigma2 = EPair<T>();
  }
  out.trace = trace;
  return out;
}

// working-precision view of a singular value; overflow and underflow follow
// the ordinary rounding rules of assemble()
template <WorkingFloat T>
inline T sigma_value(const EPair<T>& sig) noexcept {
  return sig.value();
}

}  // namespace kogsvd2
