// Batch error-study driver: generates random 2x2 matrices in the configured
// regime, runs the chosen routine against the extended-precision reference,
// and emits one CSV row of per-batch error maxima.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "kogsvd2/kogsvd2.hpp"

namespace {

struct SweepSpec {
  int lo, hi, step;
};

SweepSpec parse_sweep(const std::string& s) {
  // varsigma=A..B:step
  int lo, hi, step = 1;
  if (std::sscanf(s.c_str(), "varsigma=%d..%d:%d", &lo, &hi, &step) < 2 || step < 1 || hi < lo)
    throw CLI::ValidationError("--sweep expects varsigma=A..B:step");
  return {lo, hi, step};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch error study for the 2x2 SVD routines"};

  std::string precision = "double", shape = "tri", regime = "circ", routine = "kog";
  std::string seed_hex = "0", out_path, sweep_spec;
  kogsvd2::RunConfig cfg;
  cfg.count = 1 << 20;

  app.add_option("--precision", precision)->check(CLI::IsMember({"single", "double"}));
  app.add_option("--shape", shape)->check(CLI::IsMember({"tri", "gen"}));
  app.add_option("--regime", regime)->check(CLI::IsMember({"circ", "bullet", "sigma"}));
  app.add_option("--varsigma", cfg.varsigma);
  app.add_option("--count", cfg.count);
  app.add_option("--seed", seed_hex, "64-bit seed, hexadecimal");
  app.add_option("--routine", routine)->check(CLI::IsMember({"kog", "lasv2"}));
  app.add_option("--threads", cfg.threads, "0 = all hardware threads");
  app.add_option("--out", out_path, "CSV path (stdout when omitted)");
  app.add_option("--sweep", sweep_spec, "varsigma=A..B:step, one row per varsigma");
  bool no_cr_hypot = false;
  app.add_flag("--emulate-noncr-hypot", no_cr_hypot,
               "route the double-angle tangent through the fallback branch");

  CLI11_PARSE(app, argc, argv);

  cfg.single_precision = precision == "single";
  cfg.shape = shape == "tri" ? kogsvd2::Shape::tri : kogsvd2::Shape::gen;
  cfg.regime = regime == "circ" ? kogsvd2::Regime::circ
               : regime == "bullet" ? kogsvd2::Regime::bullet
                                    : kogsvd2::Regime::sigma;
  cfg.routine = routine == "kog" ? kogsvd2::Routine::kog : kogsvd2::Routine::lasv2;
  cfg.options.hypot_is_cr = !no_cr_hypot;
  try {
    cfg.seed = std::stoull(seed_hex, nullptr, 16);
  } catch (const std::exception&) {
    std::cerr << "bad --seed, expected hexadecimal\n";
    return 2;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "cannot open " << out_path << "\n";
      return 2;
    }
    out = &file;
  }

  try {
    *out << kogsvd2::csv_header() << "\n";
    if (!sweep_spec.empty()) {
      const SweepSpec sw = parse_sweep(sweep_spec);
      cfg.regime = kogsvd2::Regime::sigma;
      for (int vs = sw.lo; vs <= sw.hi; vs += sw.step) {
        cfg.varsigma = vs;
        const auto st = kogsvd2::run_batch_any(cfg);
        *out << kogsvd2::csv_row(cfg, st) << "\n";
      }
    } else {
      const auto st = kogsvd2::run_batch_any(cfg);
      *out << kogsvd2::csv_row(cfg, st) << "\n";
    }
  } catch (const kogsvd2::BatchAbort& e) {
    std::cerr << "batch aborted: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
