#include "kogsvd2/epair.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "exact_ref.hpp"
#include "test_rng.hpp"

using namespace kogsvd2;
using testref::Dyadic;
using testref::Rng;
using testref::within_one_mantissa_rounding;

template <class T>
class EPairTest : public ::testing::Test {};
using Precisions = ::testing::Types<float, double>;
TYPED_TEST_SUITE(EPairTest, Precisions);

TYPED_TEST(EPairTest, OplusBasics) {
  using T = TypeParam;
  const auto r = oplus(T(1), T(1));
  EXPECT_EQ(r.e, 1);
  EXPECT_EQ(r.f, T(1));

  // forced overflow branch: fl(nu+nu) overflows, fl(nu/2+nu/2) = nu
  const auto s = split(norm_max<T>);
  const auto o = oplus(norm_max<T>, norm_max<T>);
  EXPECT_EQ(o.e, s.e + 1);
  EXPECT_EQ(o.f, s.f);

  EXPECT_THROW(oplus(T(-1), T(1)), std::domain_error);
  EXPECT_THROW(oplus(T(0), T(1)), std::domain_error);
  EXPECT_THROW(oplus(std::numeric_limits<T>::infinity(), T(1)), std::domain_error);
}

TYPED_TEST(EPairTest, OplusSecondBranchNearMax) {
  using T = TypeParam;
  const T nu = norm_max<T>;
  const auto r = oplus(nu, nu / 2);  // exact 3nu/2
  const Dyadic exact = Dyadic::from(nu) + Dyadic::from(nu / 2);
  EXPECT_TRUE(within_one_mantissa_rounding(r.e, r.f, exact));
  EXPECT_LE(r.f, T(2));
}

TYPED_TEST(EPairTest, OminusBasics) {
  using T = TypeParam;
  const auto z = ominus(T(1.5), T(1.5));
  EXPECT_EQ(z.e, 0);
  EXPECT_EQ(z.f, T(0));

  const auto r = ominus(T(2), T(1));
  EXPECT_EQ(r.e, 0);
  EXPECT_EQ(r.f, T(1));

  // mu*(1+2eps) - mu = 2^(e_mu - p + 1) exactly, reachable only via rescaling
  const T mu = norm_min<T>;
  const T x = mu + T(2) * unit_roundoff<T> * mu;
  const auto u = ominus(x, mu);
  EXPECT_EQ(u.e, exp_min<T> - sig_digits<T> + 1);
  EXPECT_EQ(u.f, T(1));

  EXPECT_THROW(ominus(T(1), T(-1)), std::domain_error);
}

TYPED_TEST(EPairTest, OminusUnderflowBranchStaysNormal) {
  using T = TypeParam;
  Rng rng(0x45500001u);
  int hits = 0;
  for (int i = 0; i < 1000000; ++i) {
    // close values around the normal threshold force |fl(x-y)| < mu
    const int e = static_cast<int>(rng.range(exp_min<T> - 4, exp_min<T> + 6));
    const T x = rng.positive<T>(e, e);
    const T y = x - std::scalbn(static_cast<T>(1 + static_cast<int>(rng.next() % 7)),
                                e - sig_digits<T> + 1);
    if (!(y > T(0)) || x == y) continue;
    const T d = x - y;
    if (std::fabs(d) >= norm_min<T>) continue;
    ++hits;
    const auto r = ominus(x, y);
    ASSERT_GE(std::fabs(r.f), T(1));
    ASSERT_LT(std::fabs(r.f), T(2));
    const Dyadic exact = Dyadic::from(x) - Dyadic::from(y);
    ASSERT_TRUE(within_one_mantissa_rounding(r.e, r.f, exact));
    // the rescaled difference z = 2^c*(x-y) must land in [mu, nu]
    const std::int64_t c = exp_min<T> + sig_digits<T> - 1 - std::min(split(x).e, split(y).e);
    const T z = assemble(r.e + c, r.f);
    ASSERT_GE(std::fabs(z), norm_min<T>);
    ASSERT_LE(std::fabs(z), norm_max<T>);
  }
  EXPECT_GT(hits, 100000);
}

TYPED_TEST(EPairTest, MulDivUnary) {
  using T = TypeParam;
  const EPair<T> a(0, T(1.5));
  const auto sq = a * a;
  EXPECT_EQ(sq.e, 1);
  EXPECT_EQ(sq.f, T(1.125));

  const EPair<T> one(0, T(1));
  const EPair<T> k(7, T(1.75));
  EXPECT_EQ(one * k, k);
  EXPECT_EQ(k / k, one);

  const auto r = recip(EPair<T>(0, T(1.6)));
  EXPECT_EQ(r.e, -1);
  EXPECT_EQ(r.f, T(1) / T(1.6) * T(2));

  EXPECT_EQ(abs(EPair<T>(5, T(-1.25))).f, T(1.25));
  EXPECT_EQ(neg(EPair<T>(5, T(1.25))).f, T(-1.25));
  const auto sc = scale2(3, EPair<T>(0, T(1.5)));
  EXPECT_EQ(sc.e, 3);
  EXPECT_EQ(sc.f, T(1.5));
  EXPECT_EQ(scale2(9, EPair<T>()).e, 0);  // canonical zero

  EXPECT_THROW(recip(EPair<T>()), std::domain_error);
  EXPECT_THROW(EPair<T>(0, std::numeric_limits<T>::quiet_NaN()), std::domain_error);
}

TYPED_TEST(EPairTest, OpsMatchExactOracle) {
  using T = TypeParam;
  Rng rng(0x45500002u);
  for (int i = 0; i < 1000000; ++i) {
    const T x = rng.positive<T>(exp_min<T>, exp_max<T>);
    const T y = rng.positive<T>(exp_min<T>, exp_max<T>);
    const Dyadic dx = Dyadic::from(x), dy = Dyadic::from(y);

    const auto p = oplus(x, y);
    ASSERT_TRUE(within_one_mantissa_rounding(p.e, p.f, dx + dy)) << x << "+" << y;
    if (x != y) {
      const auto m = ominus(x, y);
      ASSERT_TRUE(within_one_mantissa_rounding(m.e, m.f, dx - dy)) << x << "-" << y;
    }

    const EPair<T> ex(rng.range(-1000, 1000), rng.flip() ? x : -x);
    const EPair<T> ey(rng.range(-1000, 1000), y);
    const Dyadic vx = Dyadic::from(ex.f) * Dyadic::pow2(ex.e);
    const Dyadic vy = Dyadic::from(ey.f) * Dyadic::pow2(ey.e);

    const auto mu = ex * ey;
    ASSERT_TRUE(within_one_mantissa_rounding(mu.e, mu.f, vx * vy));

    // quotient check by cross-multiplication: |q*y - x| <= 2^(qe-p) * |y|
    const auto q = ex / ey;
    const Dyadic qv = Dyadic::from(q.f) * Dyadic::pow2(q.e);
    const Dyadic lhs = (qv * vy - vx).abs();
    const Dyadic rhs = Dyadic::pow2(q.e - sig_digits<T>) * vy.abs();
    ASSERT_FALSE(rhs < lhs);
  }
}

TYPED_TEST(EPairTest, MulExactWhenRepresentable) {
  using T = TypeParam;
  Rng rng(0x45500003u);
  for (int i = 0; i < 100000; ++i) {
    // products of short mantissas are exact
    const T fx = T(1) + static_cast<T>(rng.next() % 1024) / T(1024);
    const T fy = T(1) + static_cast<T>(rng.next() % 1024) / T(1024);
    const EPair<T> x(rng.range(-99, 99), fx), y(rng.range(-99, 99), fy);
    const auto m = x * y;
    const Dyadic exact = (Dyadic::from(fx) * Dyadic::pow2(x.e)) * (Dyadic::from(fy) * Dyadic::pow2(y.e));
    ASSERT_EQ(cmp(Dyadic::from(m.f) * Dyadic::pow2(m.e), exact), 0);
  }
}

TYPED_TEST(EPairTest, LessIsValueOrder) {
  using T = TypeParam;
  EXPECT_TRUE(less(EPair<T>(0, T(1)), EPair<T>(1, T(1))));
  EXPECT_TRUE(less(EPair<T>(9, T(-1.5)), EPair<T>(-9, T(1))));
  EXPECT_FALSE(less(EPair<T>(), EPair<T>()));

  Rng rng(0x45500004u);
  std::vector<EPair<T>> v;
  for (int i = 0; i < 64; ++i) {
    T f = rng.positive<T>(0, 0);
    if (rng.flip()) f = -f;
    if (rng.next() % 8 == 0) v.emplace_back();
    else v.emplace_back(rng.range(-40, 40), f);
  }
  for (const auto& a : v)
    for (const auto& b : v) {
      const Dyadic va = Dyadic::from(a.f) * Dyadic::pow2(a.e);
      const Dyadic vb = Dyadic::from(b.f) * Dyadic::pow2(b.e);
      ASSERT_EQ(less(a, b), va < vb);
      // antisymmetry
      ASSERT_FALSE(less(a, b) && less(b, a));
    }
  // transitivity on the sampled set
  for (const auto& a : v)
    for (const auto& b : v)
      for (const auto& c : v)
        if (less(a, b) && less(b, c)) {
          ASSERT_TRUE(less(a, c));
        }
}

TYPED_TEST(EPairTest, OplusMantissaNeverExceedsMax) {
  using T = TypeParam;
  Rng rng(0x45500005u);
  for (int i = 0; i < 200000; ++i) {
    const T x = rng.positive<T>(exp_max<T> - 3, exp_max<T>);
    const T y = rng.positive<T>(exp_max<T> - 3, exp_max<T>);
    const auto r = oplus(x, y);
    ASSERT_TRUE(std::isfinite(r.f));
    ASSERT_LE(assemble<T>(0, r.f), norm_max<T>);
  }
}
