#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kogsvd2/lasv2.hpp"
#include "kogsvd2/oracle.hpp"
#include "kogsvd2/svd2.hpp"

// Batch experiment runner: seeded counter-based generators for the random
// regimes, a thread pool over fixed index blocks with a deterministic
// reduction, and CSV emission.  Identical configurations produce identical
// bytes regardless of the worker count.

namespace kogsvd2 {

enum class Shape : std::uint8_t { tri, gen };
enum class Regime : std::uint8_t { circ, bullet, sigma };
enum class Routine : std::uint8_t { kog, lasv2 };

struct RunConfig {
  bool single_precision = false;
  Shape shape = Shape::tri;
  Regime regime = Regime::circ;
  int varsigma = 0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  Routine routine = Routine::kog;
  int threads = 1;
  Options options{};
};

template <WorkingFloat T>
void validate(const RunConfig& cfg) {
  if (cfg.routine == Routine::lasv2 && cfg.shape != Shape::tri)
    throw std::invalid_argument("lasv2 accepts triangular inputs only");
  if (cfg.regime == Regime::sigma) {
    if (cfg.varsigma < 1) throw std::invalid_argument("sigma regime needs varsigma >= 1");
    if (exp_min<T> + cfg.varsigma > exp_max<T> - 2)
      throw std::invalid_argument("varsigma exceeds the exponent range");
  }
}

struct BranchCounts {
  std::uint64_t t2p[7]{};     // Tan2PhiBranch slots
  std::uint64_t path[7]{};    // SvdPath slots
  std::uint64_t tanpsi_inf{}, diag_swap{}, compose_minus{}, sigma_swap{},
      prescale_inexact{};

  void add(const BranchTrace& t) noexcept {
    ++t2p[static_cast<int>(t.t2p)];
    ++path[static_cast<int>(t.path)];
    tanpsi_inf += t.tanpsi_inf;
    diag_swap += t.diag_swap;
    compose_minus += t.compose_minus;
    sigma_swap += t.sigma_swap;
    prescale_inexact += t.prescale_inexact;
  }
  void merge(const BranchCounts& o) noexcept {
    for (int i = 0; i < 7; ++i) {
      t2p[i] += o.t2p[i];
      path[i] += o.path[i];
    }
    tanpsi_inf += o.tanpsi_inf;
    diag_swap += o.diag_swap;
    compose_minus += o.compose_minus;
    sigma_swap += o.sigma_swap;
    prescale_inexact += o.prescale_inexact;
  }
};

struct ErrorStats {
  double reG{0}, reS1{0}, reS2{0}, reU{0}, reV{0};
  ExtFloat maxKappa2{};
  bool kappa_inf{false};
  BranchCounts counts;

  void absorb(const ErrorMetrics& m, const BranchTrace* trace) noexcept {
    reG = std::fmax(reG, m.reG);
    reS1 = std::fmax(reS1, m.reS1);
    reS2 = std::fmax(reS2, m.reS2);
    reU = std::fmax(reU, m.reU);
    reV = std::fmax(reV, m.reV);
    if (m.kappa_inf)
      kappa_inf = true;
    else if (ext_cmp(m.kappa2, maxKappa2) > 0)
      maxKappa2 = m.kappa2;
    if (trace) counts.add(*trace);
  }
  void merge(const ErrorStats& o) noexcept {
    reG = std::fmax(reG, o.reG);
    reS1 = std::fmax(reS1, o.reS1);
    reS2 = std::fmax(reS2, o.reS2);
    reU = std::fmax(reU, o.reU);
    reV = std::fmax(reV, o.reV);
    kappa_inf = kappa_inf || o.kappa_inf;
    if (ext_cmp(o.maxKappa2, maxKappa2) > 0) maxKappa2 = o.maxKappa2;
    counts.merge(o.counts);
  }
};

struct BatchAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace harness_detail {

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Stream {
  std::uint64_t s;
  Stream(std::uint64_t seed, std::uint64_t index) noexcept
      : s(mix64(seed + 0x9e3779b97f4a7c15ull * (index + 1))) {}
  std::uint64_t next() noexcept {
    s += 0x9e3779b97f4a7c15ull;
    return mix64(s);
  }
};

template <WorkingFloat T>
std::string bits_of(T x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", static_cast<double>(x));
  return buf;
}

}  // namespace harness_detail

// deterministic function of (seed, index)
template <WorkingFloat T>
Matrix2<T> generate(const RunConfig& cfg, std::uint64_t index) {
  harness_detail::Stream st(cfg.seed, index);
  constexpr int p = sig_digits<T>;

  auto circ = [&]() {
    const std::uint64_t u = st.next();
    const T m = static_cast<T>(static_cast<double>(u >> 11) * 0x1p-53);
    return (u & 1) ? -m : m;
  };
  auto ranged = [&](int elo, int ehi) {
    const std::uint64_t u = st.next();
    const int e = elo + static_cast<int>(u % static_cast<std::uint64_t>(ehi - elo + 1));
    const T f = T(1) + std::scalbn(static_cast<T>(st.next() >> (64 - (p - 1))), 1 - p);
    const T v = std::scalbn(f, e);
    return (u >> 63) ? -v : v;
  };
  auto element = [&]() {
    switch (cfg.regime) {
      case Regime::circ:
        return circ();
      case Regime::bullet:
        return ranged(exp_min<T>, exp_max<T> - 2);
      default:
        return ranged(exp_min<T> + cfg.varsigma, exp_max<T> - 2);
    }
  };
  auto nonzero = [&]() {
    T v = element();
    while (v == T(0)) v = element();  // only the circ regime can draw zero
    return v;
  };

  Matrix2<T> g;
  if (cfg.shape == Shape::tri) {
    g.g11 = nonzero();
    g.g12 = element();
    g.g21 = T(0);
    g.g22 = nonzero();
  } else {
    g.g11 = element();
    g.g12 = element();
    g.g21 = element();
    g.g22 = element();
  }
  return g;
}

namespace harness_detail {

template <WorkingFloat T>
void run_one(const RunConfig& cfg, std::uint64_t index, ErrorStats& stats) {
  const Matrix2<T> g = generate<T>(cfg, index);
  const ExtSvd ref = svd2_ext(g);
  auto fail = [&](const char* what) {
    throw BatchAbort(std::string(what) + " at index " + std::to_string(index) + ": g = [" +
                     bits_of(g.g11) + ", " + bits_of(g.g12) + "; " + bits_of(g.g21) + ", " +
                     bits_of(g.g22) + "]");
  };
  ErrorMetrics m;
  if (cfg.routine == Routine::kog) {
    const Svd2Result<T> r = svd2(g, cfg.options);
    if (!all_finite(r.u) || !all_finite(r.v) || !std::isfinite(r.sigma1.f) ||
        !std::isfinite(r.sigma2.f))
      fail("non-finite factor");
    m = metrics(g, r.u, r.v, ext_from(r.sigma1), ext_from(r.sigma2), ref);
    if (std::isnan(m.reG) || std::isnan(m.reS1) || std::isnan(m.reS2) || std::isnan(m.reU) ||
        std::isnan(m.reV))
      fail("NaN metric");
    stats.absorb(m, &r.trace);
  } else {
    const Lasv2Out<T> r = lasv2_ref(g.g11, g.g12, g.g22);
    const Matrix2<T> u{r.csl, -r.snl, r.snl, r.csl};
    const Matrix2<T> v{r.csr, -r.snr, r.snr, r.csr};
    if (!all_finite(u) || !all_finite(v) || !std::isfinite(r.ssmax) || !std::isfinite(r.ssmin))
      fail("non-finite factor");
    m = metrics(g, u, v, ext_from(r.ssmax), ext_from(r.ssmin), ref);
    if (std::isnan(m.reG) || std::isnan(m.reS1) || std::isnan(m.reS2) || std::isnan(m.reU) ||
        std::isnan(m.reV))
      fail("NaN metric");
    stats.absorb(m, nullptr);
  }
}

}  // namespace harness_detail

template <WorkingFloat T>
ErrorStats run_batch(const RunConfig& cfg) {
  validate<T>(cfg);
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t nblocks = (cfg.count + kBlock - 1) / kBlock;
  std::vector<ErrorStats> block_stats(nblocks);
  std::vector<std::string> block_fail(nblocks);
  std::atomic<std::uint64_t> next_block{0};

  int workers = cfg.threads;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (static_cast<std::uint64_t>(workers) > nblocks && nblocks > 0)
    workers = static_cast<int>(nblocks);

  auto work = [&]() {
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      const std::uint64_t lo = b * kBlock;
      const std::uint64_t hi = std::min(cfg.count, lo + kBlock);
      try {
        for (std::uint64_t i = lo; i < hi; ++i)
          harness_detail::run_one<T>(cfg, i, block_stats[b]);
      } catch (const BatchAbort& e) {
        block_fail[b] = e.what();
      }
    }
  };

  if (workers == 1 || nblocks <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  ErrorStats total;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    if (!block_fail[b].empty()) throw BatchAbort(block_fail[b]);
    total.merge(block_stats[b]);
  }
  return total;
}

// ------------------------------------------------------------------------
// CSV boundary

namespace harness_detail {

inline std::string shortest(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace harness_detail

inline std::string csv_header() {
  return "precision,shape,regime,varsigma,count,seed,routine,reG,reS1,reS2,reU,reV,maxKappa2";
}

inline std::string csv_row(const RunConfig& cfg, const ErrorStats& st) {
  using harness_detail::shortest;
  std::string row;
  row += cfg.single_precision ? "single" : "double";
  row += cfg.shape == Shape::tri ? ",tri" : ",gen";
  row += cfg.regime == Regime::circ ? ",circ" : (cfg.regime == Regime::bullet ? ",bullet" : ",sigma");
  row += "," + std::to_string(cfg.varsigma);
  row += "," + std::to_string(cfg.count);
  char seedbuf[20];
  std::snprintf(seedbuf, sizeof seedbuf, "%016llx", static_cast<unsigned long long>(cfg.seed));
  row += ",";
  row += seedbuf;
  row += cfg.routine == Routine::kog ? ",kog" : ",lasv2";
  row += "," + shortest(st.reG);
  row += "," + shortest(st.reS1);
  row += "," + shortest(st.reS2);
  row += "," + shortest(st.reU);
  row += "," + shortest(st.reV);
  row += ",";
  if (st.kappa_inf) {
    row += "inf";
  } else if (st.maxKappa2.e > -1000 && st.maxKappa2.e < 1000) {
    row += shortest(ext_to_double(st.maxKappa2));
  } else {
    row += ext_to_decimal(st.maxKappa2);
  }
  return row;
}

inline ErrorStats run_batch_any(const RunConfig& cfg) {
  return cfg.single_precision ? run_batch<float>(cfg) : run_batch<double>(cfg);
}

}  // namespace kogsvd2
