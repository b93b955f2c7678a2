#include "kogsvd2/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kogsvd2;

namespace {

RunConfig base_cfg() {
  RunConfig cfg;
  cfg.shape = Shape::tri;
  cfg.regime = Regime::bullet;
  cfg.count = 20000;
  cfg.seed = 0x1234abcdu;
  cfg.routine = Routine::kog;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(GenerateTest, DeterministicPerIndex) {
  const auto cfg = base_cfg();
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto a = generate<double>(cfg, i);
    const auto b = generate<double>(cfg, i);
    ASSERT_EQ(a, b);
  }
  // different indices give different draws
  EXPECT_NE(generate<double>(cfg, 1), generate<double>(cfg, 2));
}

TEST(GenerateTest, RegimeContainment) {
  auto cfg = base_cfg();
  cfg.shape = Shape::gen;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    const auto g = generate<double>(cfg, i);
    for (double v : {g.g11, g.g12, g.g21, g.g22}) {
      ASSERT_GE(std::fabs(v), norm_min<double>);
      ASSERT_LE(std::fabs(v), norm_max<double> / 4);
    }
  }
  cfg.regime = Regime::sigma;
  cfg.varsigma = 900;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    const auto g = generate<double>(cfg, i);
    for (double v : {g.g11, g.g12, g.g21, g.g22})
      ASSERT_GE(std::fabs(v), std::scalbn(norm_min<double>, 900));
  }
  cfg.regime = Regime::circ;
  cfg.shape = Shape::tri;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    const auto g = generate<double>(cfg, i);
    ASSERT_LT(std::fabs(g.g11), 1.0);
    ASSERT_NE(g.g11, 0.0);
    ASSERT_NE(g.g22, 0.0);
    ASSERT_EQ(g.g21, 0.0);
  }
}

TEST(RunBatchTest, EmptyBatchIsZero) {
  auto cfg = base_cfg();
  cfg.count = 0;
  const auto st = run_batch<double>(cfg);
  EXPECT_EQ(st.reG, 0.0);
  EXPECT_EQ(st.reS1, 0.0);
  EXPECT_EQ(st.reS2, 0.0);
  EXPECT_EQ(st.reU, 0.0);
  EXPECT_EQ(st.reV, 0.0);
  EXPECT_TRUE(st.maxKappa2.is_zero());
}

TEST(RunBatchTest, ValidationRejectsBadCombos) {
  auto cfg = base_cfg();
  cfg.routine = Routine::lasv2;
  cfg.shape = Shape::gen;
  EXPECT_THROW(run_batch<double>(cfg), std::invalid_argument);
  cfg = base_cfg();
  cfg.regime = Regime::sigma;
  cfg.varsigma = 0;
  EXPECT_THROW(run_batch<double>(cfg), std::invalid_argument);
  cfg.varsigma = 5000;
  EXPECT_THROW(run_batch<double>(cfg), std::invalid_argument);
}

TEST(RunBatchTest, ThreadCountInvariance) {
  auto cfg = base_cfg();
  cfg.count = 30000;
  cfg.threads = 1;
  const auto a = run_batch<double>(cfg);
  cfg.threads = 4;
  const auto b = run_batch<double>(cfg);
  cfg.threads = 16;
  const auto c = run_batch<double>(cfg);
  const std::string ra = csv_row(cfg, a), rb = csv_row(cfg, b), rc = csv_row(cfg, c);
  EXPECT_EQ(ra, rb);
  EXPECT_EQ(ra, rc);
  EXPECT_EQ(a.counts.tanpsi_inf, b.counts.tanpsi_inf);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(a.counts.t2p[i], c.counts.t2p[i]);
}

TEST(RunBatchTest, TriangularBulletBands) {
  auto cfg = base_cfg();
  cfg.count = 50000;
  const auto st = run_batch<double>(cfg);
  const double eps = unit_roundoff<double>;
  EXPECT_LE(st.reS1, 10 * eps);
  EXPECT_LE(st.reS2, 10 * eps);
  EXPECT_LE(st.reU, 8 * eps);
  EXPECT_LE(st.reV, 8 * eps);
  EXPECT_LE(st.reG, 8 * eps);
  EXPECT_FALSE(st.kappa_inf);
  EXPECT_GT(st.maxKappa2.e, 100);  // wildly conditioned draws appear quickly

  cfg.routine = Routine::lasv2;
  const auto sl = run_batch<double>(cfg);
  EXPECT_EQ(sl.reS2, 1.0);  // smaller values lost to underflow
  EXPECT_LE(sl.reS1, 10 * eps);
}

TEST(RunBatchTest, CsvShape) {
  auto cfg = base_cfg();
  cfg.count = 100;
  const auto st = run_batch<double>(cfg);
  const std::string row = csv_row(cfg, st);
  // 13 columns
  int commas = 0;
  for (char ch : row) commas += ch == ',';
  EXPECT_EQ(commas, 12);
  EXPECT_EQ(csv_header(),
            "precision,shape,regime,varsigma,count,seed,routine,reG,reS1,reS2,reU,reV,maxKappa2");
  EXPECT_EQ(row.find("double,tri,bullet,0,100,"), 0u);
}

TEST(RunBatchTest, GeneralSafeRangeResidualBands) {
  // full matrices across the whole safe range: the residual and the
  // orthogonality stay at a few eps even where the smaller singular value
  // loses relative accuracy
  RunConfig cfg;
  cfg.shape = Shape::gen;
  cfg.regime = Regime::bullet;
  cfg.count = 50000;
  cfg.seed = 0xfeedbeefu;
  cfg.threads = 0;
  const auto st = run_batch<double>(cfg);
  const double eps = unit_roundoff<double>;
  EXPECT_LE(st.reG, 8 * eps);
  EXPECT_LE(st.reU, 8 * eps);
  EXPECT_LE(st.reV, 8 * eps);
  EXPECT_LE(st.reS1, 10 * eps);
}

TEST(RunBatchTest, SinglePrecisionRuns) {
  auto cfg = base_cfg();
  cfg.single_precision = true;
  cfg.count = 20000;
  const auto st = run_batch_any(cfg);
  EXPECT_LE(st.reS1, 10 * static_cast<double>(unit_roundoff<float>));
  EXPECT_LE(st.reU, 8 * static_cast<double>(unit_roundoff<float>));
}

TEST(RunBatchTest, BranchCoverageOnMixedBatch) {
  // general full-range draws visit the bulk branches; targeted inputs drive
  // the degenerate ones random draws cannot reach
  RunConfig cfg;
  cfg.shape = Shape::gen;
  cfg.regime = Regime::bullet;
  cfg.count = 1 << 20;
  cfg.seed = 77;
  cfg.threads = 0;
  auto st = run_batch<double>(cfg);
  cfg.shape = Shape::tri;
  cfg.regime = Regime::circ;
  cfg.seed = 78;
  const auto st2 = run_batch<double>(cfg);
  st.merge(st2);

  const double mu = norm_min<double>, nu = norm_max<double>;
  const Matrix2<double> targeted[] = {
      {1, 1, 0, 1},                      // equal diagonal
      {2, 1, 0, 1},                      // off-diagonal equals the corner
      {mu, 1, 0, mu / 2},                // tiny ratio shortcut
      {mu, nu / 4, 0, mu},               // infinite tan psi
      {4, 3, 0, 2},                      // plain general
      {1, 3, 0, 4},                      // diagonal swap
      {2, 0, 0, 1},                      // permutation class
      {3, 0, 4, 0},                      // single column
      {1, 1, 0, 0},                      // single row
      {1, 1, 1, -1},                     // rotation zeroes the off-diagonal
      {2, 4, 1, 2},                      // rotation zeroes the corner
  };
  Options opt;
  for (const auto& g : targeted) st.counts.add(svd2(g, opt).trace);
  opt.hypot_is_cr = false;
  st.counts.add(svd2(Matrix2<double>{4, 3, 0, 2}, opt).trace);  // fallback form
  opt.hypot_is_cr = true;
  // h == r22 cannot survive the diagonal ordering (a correctly rounded hypot
  // gives h >= r11, and r11 == r22 is taken earlier), so the branch is driven
  // by a direct call on an unordered triangle
  Tan2PhiBranch direct;
  tan2phi(Matrix2<double>{mu, mu, 0, hypot_cr(mu, mu)}, true, opt, direct);
  ASSERT_EQ(direct, Tan2PhiBranch::general_inf);
  ++st.counts.t2p[static_cast<int>(direct)];

  for (auto b : {Tan2PhiBranch::diag_equal, Tan2PhiBranch::offdiag_equal,
                 Tan2PhiBranch::small_ratio, Tan2PhiBranch::fallback,
                 Tan2PhiBranch::general, Tan2PhiBranch::general_inf})
    EXPECT_GT(st.counts.t2p[static_cast<int>(b)], 0u) << static_cast<int>(b);
  EXPECT_GT(st.counts.tanpsi_inf, 0u);
  EXPECT_GT(st.counts.diag_swap, 0u);
  EXPECT_GT(st.counts.compose_minus, 0u);
  for (auto p : {SvdPath::simple, SvdPath::mono_col, SvdPath::mono_row, SvdPath::tri13,
                 SvdPath::urv15, SvdPath::urv15_to_diag, SvdPath::urv15_to_row})
    EXPECT_GT(st.counts.path[static_cast<int>(p)], 0u) << static_cast<int>(p);
}
