#pragma once

#include <cmath>
#include <cstdint>

#include "kogsvd2/classify.hpp"
#include "kogsvd2/extfloat.hpp"
#include "kogsvd2/svd2.hpp"

// Reference decomposition and error measures.  The same three-phase method is
// run in ExtFloat arithmetic; the wide exponent makes prescaling unnecessary
// and the ill-conditioned differences are evaluated through algebraically
// equal forms without cancellation, so the reference singular values carry
// ~50 guard bits against either working precision on every input.

namespace kogsvd2 {

struct ExtMat {
  ExtFloat a11, a12, a21, a22;
};

inline ExtMat ext_mat_mul(const ExtMat& x, const ExtMat& y) noexcept {
  return {ext_add(ext_mul(x.a11, y.a11), ext_mul(x.a12, y.a21)),
          ext_add(ext_mul(x.a11, y.a12), ext_mul(x.a12, y.a22)),
          ext_add(ext_mul(x.a21, y.a11), ext_mul(x.a22, y.a21)),
          ext_add(ext_mul(x.a21, y.a12), ext_mul(x.a22, y.a22))};
}

inline ExtMat ext_mat_transpose(const ExtMat& x) noexcept {
  return {x.a11, x.a21, x.a12, x.a22};
}

inline ExtFloat ext_mat_fnorm(const ExtMat& x) noexcept {
  ExtFloat s = ext_mul(x.a11, x.a11);
  s = ext_add(s, ext_mul(x.a12, x.a12));
  s = ext_add(s, ext_mul(x.a21, x.a21));
  s = ext_add(s, ext_mul(x.a22, x.a22));
  return ext_sqrt(s);
}

template <WorkingFloat T>
inline ExtMat ext_mat_from(const Matrix2<T>& g) noexcept {
  return {ext_from(g.g11), ext_from(g.g12), ext_from(g.g21), ext_from(g.g22)};
}

struct ExtSvd {
  ExtFloat sigma1, sigma2;  // sigma1 >= sigma2 >= 0
  ExtMat u, v;
};

namespace oracle_detail {

inline ExtFloat ext_hypot(const ExtFloat& a, const ExtFloat& b) noexcept {
  return ext_sqrt(ext_add(ext_mul(a, a), ext_mul(b, b)));
}

inline ExtMat ext_rot(const ExtFloat& c, const ExtFloat& s) noexcept {
  return {c, ext_neg(s), s, c};
}

inline ExtMat ext_signperm(const SignPerm& p) noexcept {
  auto f = [](int v) { return ext_from(static_cast<double>(v)); };
  return {f(p.m[0][0]), f(p.m[0][1]), f(p.m[1][0]), f(p.m[1][1])};
}

// SVD of a positive upper triangle [[a, b],[0, c]] with a >= c > 0, b > 0.
// The spectral gap factors (a-c)^2 + b^2 and (a+c)^2 + b^2 are sums of
// positive terms, so every quantity here is fully accurate.
struct TriRef {
  ExtFloat sigma1, sigma2;
  ExtFloat cphi, sphi, cpsi, spsi;
};

inline TriRef tri_ref(const ExtFloat& a, const ExtFloat& b, const ExtFloat& c) noexcept {
  TriRef out;
  const ExtFloat one = ext_from(1.0);
  const ExtFloat amc = ext_sub(a, c), apc = ext_add(a, c), b2 = ext_mul(b, b);
  const ExtFloat dm = ext_add(ext_mul(amc, amc), b2);
  const ExtFloat dp = ext_add(ext_mul(apc, apc), b2);
  const ExtFloat gap = ext_sqrt(ext_mul(dm, dp));
  const ExtFloat tau = ext_add(ext_add(ext_mul(a, a), b2), ext_mul(c, c));
  out.sigma1 = ext_sqrt(ext_scale2(-1, ext_add(tau, gap)));
  out.sigma2 = ext_div(ext_mul(a, c), out.sigma1);

  // tan(2 phi) = 2bc / ((a-c)(a+c) + b^2), all terms nonnegative
  const ExtFloat den = ext_add(ext_mul(amc, apc), b2);
  const ExtFloat t2f = ext_div(ext_scale2(1, ext_mul(b, c)), den);
  const ExtFloat tphi =
      ext_div(t2f, ext_add(one, ext_sqrt(ext_add(ext_mul(t2f, t2f), one))));
  const ExtFloat sphi = ext_sqrt(ext_add(ext_mul(tphi, tphi), one));
  const ExtFloat tpsi = ext_div(ext_add(b, ext_mul(c, tphi)), a);
  const ExtFloat spsi = ext_sqrt(ext_add(ext_mul(tpsi, tpsi), one));
  out.cphi = ext_div(one, sphi);
  out.sphi = ext_div(tphi, sphi);
  out.cpsi = ext_div(one, spsi);
  out.spsi = ext_div(tpsi, spsi);
  return out;
}

}  // namespace oracle_detail

template <WorkingFloat T>
ExtSvd svd2_ext(const Matrix2<T>& g) {
  using namespace oracle_detail;
  const TypeInfo info = classify(g);
  const std::uint8_t t = info.t;
  ExtSvd out;

  if (scale_type_of(t) == 0) {  // permutations and row signs only
    SignPerm pu = SignPerm::identity(), pv = SignPerm::identity();
    if (t == 2 || t == 6) pu = SignPerm::exchange();
    if (t == 4) pv = SignPerm::exchange();
    if (t == 8) pu = pv = SignPerm::exchange();
    Matrix2<T> d = apply_right(apply_left(pu.transposed(), g), pv);
    if (std::fabs(d.g11) < std::fabs(d.g22)) {
      pu = pu * SignPerm::exchange();
      pv = pv * SignPerm::exchange();
      d = apply_right(apply_left(SignPerm::exchange(), d), SignPerm::exchange());
    }
    const SignPerm sg =
        SignPerm::row_signs(std::signbit(d.g11) ? -1 : 1, std::signbit(d.g22) ? -1 : 1);
    out.sigma1 = ext_from(std::fabs(d.g11));
    out.sigma2 = ext_from(std::fabs(d.g22));
    out.u = ext_signperm(pu * sg);
    out.v = ext_signperm(pv);
    return out;
  }

  if (t == 3 || t == 12 || t == 5 || t == 10) {
    const bool col_case = t == 3 || t == 12;
    SignPerm pu = SignPerm::identity(), pv = SignPerm::identity();
    Matrix2<T> a = g;
    if (t == 12) {
      pv = SignPerm::exchange();
      a = apply_right(a, pv);
    }
    if (t == 10) {
      pu = SignPerm::exchange();
      a = apply_left(pu.transposed(), a);
    }
    const T x = a.g11, y = col_case ? a.g21 : a.g12;
    const SignPerm sgn = SignPerm::row_signs(std::signbit(x) ? -1 : 1,
                                             std::signbit(y) ? -1 : 1);
    const T ax = std::fabs(x), ay = std::fabs(y);
    const bool swap = ax < ay;
    const ExtFloat hi = ext_from(swap ? ay : ax), lo = ext_from(swap ? ax : ay);
    const ExtFloat sig1 = ext_hypot(hi, lo);
    const ExtFloat tan = ext_div(lo, hi);
    const ExtFloat sec = ext_sqrt(ext_add(ext_mul(tan, tan), ext_from(1.0)));
    const ExtMat rot = ext_rot(ext_div(ext_from(1.0), sec), ext_div(tan, sec));
    const SignPerm ord = swap ? SignPerm::exchange() : SignPerm::identity();
    out.sigma1 = sig1;
    out.sigma2 = ExtFloat{};
    if (col_case) {
      out.u = ext_mat_mul(ext_mat_mul(ext_signperm(sgn), ext_signperm(ord)), rot);
      out.v = ext_signperm(pv);
    } else {
      out.u = ext_signperm(pu);
      out.v = ext_mat_mul(ext_mat_mul(ext_signperm(sgn), ext_signperm(ord)), rot);
    }
    return out;
  }

  // triangular-equivalent and full patterns reduce to a positive triangle
  ExtFloat r11, r12, r22;
  ExtMat uplus, vplus;
  if (t != 15) {
    const auto tri = triangularize13(g, t);
    r11 = ext_from(tri.r.g11);
    r12 = ext_from(tri.r.g12);
    r22 = ext_from(tri.r.g22);
    uplus = ext_signperm(tri.uplus);
    vplus = ext_signperm(tri.vplus);
  } else {
    const ExtFloat w1 = ext_hypot(ext_from(g.g11), ext_from(g.g21));
    const ExtFloat w2 = ext_hypot(ext_from(g.g12), ext_from(g.g22));
    const bool col_swap = ext_cmp(w1, w2) < 0;
    Matrix2<T> a = col_swap ? Matrix2<T>{g.g12, g.g11, g.g22, g.g21} : g;
    const ExtFloat w = col_swap ? w2 : w1;
    const int s0 = std::signbit(a.g11) ? -1 : 1, s1 = std::signbit(a.g21) ? -1 : 1;
    a = apply_left(SignPerm::row_signs(s0, s1), a);
    const bool row_swap = a.g11 < a.g21;
    if (row_swap) a = Matrix2<T>{a.g21, a.g22, a.g11, a.g12};
    // numerators are exact: products of working-precision values
    const ExtFloat num12 =
        ext_add(ext_mul(ext_from(a.g12), ext_from(a.g11)), ext_mul(ext_from(a.g22), ext_from(a.g21)));
    const ExtFloat num22 =
        ext_sub(ext_mul(ext_from(a.g22), ext_from(a.g11)), ext_mul(ext_from(a.g12), ext_from(a.g21)));
    r11 = w;
    r12 = ext_div(num12, w);
    r22 = ext_div(num22, w);
    const int s12 = r12.sign() < 0 ? -1 : 1;
    const int s22 = r12.sign() * r22.sign() < 0 ? -1 : 1;
    r12 = ext_abs(r12);
    r22 = ext_abs(r22);
    const SignPerm pu = row_swap ? SignPerm::exchange() : SignPerm::identity();
    const SignPerm pv = col_swap ? SignPerm::exchange() : SignPerm::identity();
    const SignPerm s1p = SignPerm::row_signs(s0, s1);
    // U+ = S1 PU Utheta S22; theta from the pivoted first column
    const ExtFloat tth = ext_div(ext_from(a.g21), ext_from(a.g11));
    const ExtFloat sth = ext_sqrt(ext_add(ext_mul(tth, tth), ext_from(1.0)));
    const ExtMat uth = ext_rot(ext_div(ext_from(1.0), sth), ext_div(tth, sth));
    uplus = ext_mat_mul(ext_mat_mul(ext_signperm(s1p), ext_signperm(pu)),
                        ext_mat_mul(uth, ext_signperm(SignPerm::row_signs(1, s22))));
    vplus = ext_signperm(pv * SignPerm::row_signs(1, s12));
    if (r22.is_zero()) {  // exactly singular input
      const bool ord = ext_cmp(r11, r12) < 0;
      const ExtFloat hi = ord ? r12 : r11, lo = ord ? r11 : r12;
      const ExtFloat tan = ext_div(lo, hi);
      const ExtFloat sec = ext_sqrt(ext_add(ext_mul(tan, tan), ext_from(1.0)));
      const ExtMat rot = ext_rot(ext_div(ext_from(1.0), sec), ext_div(tan, sec));
      const SignPerm po = ord ? SignPerm::exchange() : SignPerm::identity();
      out.sigma1 = ext_hypot(r11, r12);
      out.sigma2 = ExtFloat{};
      out.u = uplus;
      out.v = ext_mat_mul(vplus, ext_mat_mul(ext_signperm(po), rot));
      return out;
    }
  }

  const bool diag_swap = ext_cmp(r11, r22) < 0;
  const ExtFloat a = diag_swap ? r22 : r11;
  const ExtFloat c = diag_swap ? r11 : r22;
  const auto ts = oracle_detail::tri_ref(a, r12, c);
  out.sigma1 = ts.sigma1;
  out.sigma2 = ts.sigma2;
  ExtMat ut, vt;
  if (!diag_swap) {
    ut = ext_rot(ts.cphi, ts.sphi);
    vt = ext_rot(ts.cpsi, ts.spsi);
  } else {
    ut = {ts.spsi, ts.cpsi, ts.cpsi, ext_neg(ts.spsi)};
    vt = {ts.sphi, ts.cphi, ts.cphi, ext_neg(ts.sphi)};
  }
  out.u = ext_mat_mul(uplus, ut);
  out.v = ext_mat_mul(vplus, vt);
  return out;
}

// ------------------------------------------------------------------------
// error measures

struct ErrorMetrics {
  double reG{0}, reS1{0}, reS2{0}, reU{0}, reV{0};
  ExtFloat kappa2{};
  bool kappa_inf{false};
};

namespace oracle_detail {

inline double ext_ratio(const ExtFloat& num, const ExtFloat& den) noexcept {
  if (num.is_zero()) return 0.0;
  if (den.is_zero()) return std::numeric_limits<double>::infinity();
  return ext_to_double(ext_div(num, den));
}

inline double ortho_defect(const ExtMat& q) noexcept {
  ExtMat m = ext_mat_mul(ext_mat_transpose(q), q);
  const ExtFloat one = ext_from(1.0);
  m.a11 = ext_sub(m.a11, one);
  m.a22 = ext_sub(m.a22, one);
  return ext_to_double(ext_mat_fnorm(m));
}

}  // namespace oracle_detail

// re G, re sigma_i, re U, re V of a computed decomposition against the
// reference values, evaluated in ExtFloat from working-precision data
template <WorkingFloat T>
ErrorMetrics metrics(const Matrix2<T>& g, const Matrix2<T>& u, const Matrix2<T>& v,
                     const ExtFloat& sig1, const ExtFloat& sig2, const ExtSvd& ref) {
  ErrorMetrics out;
  const ExtMat ge = ext_mat_from(g);
  const ExtMat ue = ext_mat_from(u);
  const ExtMat ve = ext_mat_from(v);
  const ExtMat sig{sig1, ExtFloat{}, ExtFloat{}, sig2};
  ExtMat rec = ext_mat_mul(ext_mat_mul(ue, sig), ext_mat_transpose(ve));
  rec.a11 = ext_sub(ge.a11, rec.a11);
  rec.a12 = ext_sub(ge.a12, rec.a12);
  rec.a21 = ext_sub(ge.a21, rec.a21);
  rec.a22 = ext_sub(ge.a22, rec.a22);
  out.reG = oracle_detail::ext_ratio(ext_mat_fnorm(rec), ext_mat_fnorm(ge));

  // the computed values may carry reconstruction signs; the singular value
  // itself is the magnitude
  auto relerr = [](const ExtFloat& want, const ExtFloat& got) {
    if (want.is_zero() && got.is_zero()) return 0.0;
    return oracle_detail::ext_ratio(ext_abs(ext_sub(want, ext_abs(got))), want);
  };
  out.reS1 = relerr(ref.sigma1, sig1);
  out.reS2 = relerr(ref.sigma2, sig2);
  out.reU = oracle_detail::ortho_defect(ue);
  out.reV = oracle_detail::ortho_defect(ve);
  if (ref.sigma2.is_zero()) {
    out.kappa_inf = !ref.sigma1.is_zero();
    out.kappa2 = ExtFloat{};
  } else {
    out.kappa2 = ext_div(ref.sigma1, ref.sigma2);
  }
  return out;
}

}  // namespace kogsvd2
