// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero if any criterion fails.

#include "rpcoh/coherence.hpp"
#include "rpcoh/compass.hpp"
#include "rpcoh/dynamics.hpp"
#include "rpcoh/io.hpp"
#include "rpcoh/model.hpp"
#include "rpcoh/random_states.hpp"
#include "rpcoh/selfcheck.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace rpcoh;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { lines.push_back("      " + what); }
};

std::string num(double v) { return format_number(v); }

std::string describe(const OracleResult& r) {
  return r.name + ": max error " + num(r.max_error) + " < " + num(r.tolerance) + " over " + std::to_string(r.cases) +
         " values";
}

bool report(int id, const std::string& title, const Verdict& v) {
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << '\n';
  for (const auto& l : v.lines) std::cout << "    " << l << '\n';
  std::cout << std::flush;
  return v.pass;
}

Verdict larmor_pair_without_dephasing() {
  Verdict v;
  const auto t0 = Clock::now();
  const OracleResult c = check_fictitious_coherence(1.0);
  const OracleResult marks = check_fictitious_landmarks(1.0);
  const double elapsed = seconds_since(t0);
  v.require(c.passed(), describe(c));
  v.require(marks.passed(), describe(marks));
  v.require(elapsed < 1.0, "runtime " + num(elapsed) + " s < 1 s");
  return v;
}

Verdict larmor_pair_with_dephasing() {
  Verdict v;
  const auto t0 = Clock::now();
  const OracleResult exact = check_dephased_pair(1.0, 0.2);
  v.require(exact.passed(), describe(exact));
  double previous = INFINITY;
  for (double ratio : {0.2, 0.05, 0.01}) {
    const OracleResult r = check_closed_forms(1.0, ratio);
    v.require(r.passed(), "K_d/Omega = " + num(ratio) + ": " + describe(r));
    v.require(r.max_error < previous, "error decreases with K_d/Omega (" + num(r.max_error) + " < " + num(previous) + ")");
    previous = r.max_error;
  }
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 5.0, "runtime " + num(elapsed) + " s < 5 s");
  return v;
}

Verdict quantifier_properties() {
  Verdict v;
  const auto t0 = Clock::now();
  Rng rng(2024);
  constexpr std::size_t kPerDim = 1000;
  for (std::size_t d : {4u, 8u, 16u}) {
    const StProjectors proj = StProjectors::for_dimension(d);
    const SpinSystem sys = spin_half_system(d);
    double worst_order = 0.0, worst_incoherent = 0.0, worst_rel = 0.0, worst_pure = 0.0, worst_mono = 0.0;
    for (std::size_t i = 0; i < kPerDim; ++i) {
      const DensityMatrix rho = random_density_matrix(d, rng, 1 + i % d);
      const CoherenceReport r = st_coherence(rho, proj);
      // 0 <= C <= H2[p_S] <= 1, each with 1e-10 slack.
      worst_order = std::max({worst_order, -r.coherence, r.coherence - r.bound, r.bound - 1.0});
      const DensityMatrix hat = decohere(rho, proj);
      worst_incoherent = std::max(worst_incoherent, std::abs(st_coherence(hat, proj).coherence));
      worst_rel = std::max(worst_rel, std::abs(r.coherence - relative_entropy(rho, hat)));

      const CoherenceReport p = st_coherence(DensityMatrix::from_pure(random_pure_state(sys, rng)), proj);
      worst_pure = std::max(worst_pure, std::abs(p.coherence - p.bound));

      const auto kraus = lift_nuclear_kraus(random_kraus_set(sys.nuclear_dim(), 2 + i % 3, rng), sys);
      worst_mono = std::max(worst_mono, st_coherence(apply_kraus(rho, kraus), proj).coherence - r.coherence);
    }
    const std::string at = " (d = " + std::to_string(d) + ", " + std::to_string(kPerDim) + " states)";
    v.require(worst_order <= 1e-10, "0 <= C <= H2[p_S] <= 1: worst violation " + num(worst_order) + at);
    v.require(worst_pure < 1e-10, "pure states |C - H2[p_S]| = " + num(worst_pure) + at);
    v.require(worst_incoherent <= 1e-10, "C(decohered) = " + num(worst_incoherent) + at);
    v.require(worst_rel <= 1e-10, "|C - S(rho||rho_hat)| = " + num(worst_rel) + at);
    v.require(worst_mono <= 1e-10, "nuclear Kraus map raises C by at most " + num(worst_mono) + at);
  }
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 30.0, "runtime " + num(elapsed) + " s < 30 s");
  return v;
}

Verdict entanglement_fixture() {
  Verdict v;
  const SpinSystem sys = SpinSystem::single_proton();
  const double r2 = 1.0 / std::sqrt(2.0);
  Operator up = Operator::Zero(2, 2), down = Operator::Zero(2, 2);
  up(0, 0) = 1.0;
  down(1, 1) = 1.0;
  const auto measurement = lift_nuclear_kraus(std::vector<Operator>{up, down}, sys);
  for (auto [triplet, label] : {std::pair{PairState::TripletPlus, "|t+>"}, std::pair{PairState::TripletZero, "|t0>"}}) {
    const DensityMatrix rho = DensityMatrix::from_pure(make_pure_state(
        sys, {{PairState::Singlet, r2, nuclear_basis_state(sys, 0)}, {triplet, r2, nuclear_basis_state(sys, 1)}}));
    const double before = st_coherence(rho).coherence;
    const double after = st_coherence(apply_kraus(rho, measurement)).coherence;
    v.require(std::abs(before - 1.0) < 1e-12,
              std::string("(|s,up> + ") + label + "|down>)/sqrt2: C = " + num(before) + " (|C - 1| = " +
                  num(std::abs(before - 1.0)) + ")");
    v.require(std::abs(after) < 1e-12, "after nuclear z measurement: C = " + num(after));
  }
  return v;
}

Verdict yield_exactness() {
  Verdict v;
  const auto t0 = Clock::now();
  const OracleResult methods = check_yield_methods(100, 99);
  v.require(methods.passed(), describe(methods));

  Rng rng(100);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_sum = 0.0;
  for (int i = 0; i < 100; ++i) {
    const HamiltonianSpec spec = HamiltonianSpec::compass(10 * u(rng), 10 * u(rng), 10 * u(rng), 1.0,
                                                          3.14159 * u(rng), -10 + 20 * u(rng));
    const Operator h = build_hamiltonian(spec);
    for (double kd : {0.0, 1.0, 5.0, 10.0}) {
      const YieldPair y = singlet_yield(h, initial_state(spec.system), EvolutionParams::defaults(h, kd));
      worst_sum = std::max(worst_sum, std::abs(y.singlet + y.triplet - 1.0));
    }
  }
  v.require(worst_sum < 1e-8, "|Y_S + Y_T - 1| = " + num(worst_sum) + " over 400 evaluations");
  const OracleResult closed = check_haberkorn_yield(1.0);
  v.require(closed.passed(), describe(closed));
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 60.0, "runtime " + num(elapsed) + " s < 60 s");
  return v;
}

struct EnsembleRun {
  EnsembleResult result;
  std::string csv;
  double seconds = 0.0;
};

EnsembleRun run_and_save(const EnsembleConfig& config, const fs::path& path) {
  const auto t0 = Clock::now();
  EnsembleRun run;
  run.result = run_ensemble(config, [&](std::size_t done, std::size_t total) {
    if (done % 100 == 0 || done == total) std::cerr << "  ensemble " << done << "/" << total << '\n';
  });
  run.seconds = seconds_since(t0);
  std::ostringstream s;
  write_ensemble_csv(s, run.result.records);
  run.csv = s.str();
  std::ofstream(path, std::ios::binary) << run.csv;
  return run;
}

const DephasingStats& at_rate(const EnsembleStats& stats, double kd) {
  for (const auto& d : stats.per_dephasing)
    if (d.dephasing == kd) return d;
  throw std::runtime_error("dephasing rate missing from the ensemble");
}

Verdict ensemble_reproduction(const EnsembleConfig& config, const EnsembleRun& run, const EnsembleStats& stats) {
  Verdict v;
  const std::size_t attempted = config.samples * config.dephasing_rates.size();
  v.note("samples " + std::to_string(config.samples) + " per K_d, seed " + std::to_string(config.seed) + ", " +
         std::to_string(run.result.records.size()) + " records, runtime " + num(run.seconds) + " s");
  v.require(static_cast<double>(run.result.failed) < 1e-3 * static_cast<double>(attempted),
            "dropped records " + std::to_string(run.result.failed) + " < 0.1% of " + std::to_string(attempted));

  // (a)
  for (const auto& d : stats.per_dephasing) {
    const double r = d.pearson.value_or(NAN);
    v.require(r >= 0.15 && r <= 0.45, "(a) K_d = " + num(d.dephasing) + ": Pearson r = " + num(r) +
                                          " in [0.15, 0.45] (Spearman " + num(d.spearman.value_or(NAN)) + ")");
  }
  // (b)
  bool dy_down = true, cb_down = true;
  std::string dy_list, cb_list;
  for (std::size_t i = 0; i < stats.per_dephasing.size(); ++i) {
    const auto& d = stats.per_dephasing[i];
    dy_list += (i ? ", " : "") + num(d.mean_delta_yield);
    cb_list += (i ? ", " : "") + num(d.mean_coherence);
    if (i > 0) {
      dy_down = dy_down && d.mean_delta_yield < stats.per_dephasing[i - 1].mean_delta_yield;
      cb_down = cb_down && d.mean_coherence < stats.per_dephasing[i - 1].mean_coherence;
    }
  }
  v.require(dy_down, "(b) <<dY_S>> strictly decreasing: " + dy_list);
  v.require(cb_down, "(b) <<C_bar>> strictly decreasing: " + cb_list);
  // (c)
  const double pair_r = stats.mean_pair_correlation.value_or(NAN);
  v.require(pair_r >= 0.9, "(c) correlation of (<<C_bar>>, <<dY_S>>) pairs = " + num(pair_r) + " >= 0.9");
  // (d)
  const double drop = 1.0 - at_rate(stats, 10.0).mean_delta_yield / at_rate(stats, 0.0).mean_delta_yield;
  v.require(drop >= 0.40 && drop <= 0.75, "(d) <<dY_S>> drop from K_d = 0 to 10: " + num(100 * drop) + "% in [40%, 75%]");
  // (e)
  const double sd0 = at_rate(stats, 0.0).singlet_hist.stddev, sd10 = at_rate(stats, 10.0).singlet_hist.stddev;
  v.require(sd10 < sd0, "(e) Y_S standard deviation " + num(sd10) + " at K_d = 10 < " + num(sd0) + " at K_d = 0");
  // (f)
  for (std::size_t i = 0; i < stats.per_dephasing.size(); ++i) {
    for (std::size_t j = i + 1; j < stats.per_dephasing.size(); ++j) {
      const auto& a = stats.per_dephasing[i];
      const auto& b = stats.per_dephasing[j];
      const double diff = std::abs(a.mean_singlet - b.mean_singlet);
      const double se = std::hypot(a.stderr_singlet, b.stderr_singlet);
      v.require(diff <= 2.0 * se, "(f) <<Y_S>> K_d = " + num(a.dephasing) + " vs " + num(b.dephasing) + ": " +
                                      num(a.mean_singlet) + " vs " + num(b.mean_singlet) + ", |diff| = " + num(diff) +
                                      " <= 2 x combined standard error " + num(2.0 * se));
    }
  }
  return v;
}

Verdict exchange_reproduction(const EnsembleStats& stats) {
  Verdict v;
  if (!stats.exchange) {
    v.require(false, "no records at K_d = 1");
    return v;
  }
  const auto& bins = stats.exchange->bins;
  const std::size_t n = bins.size();
  if (n < 3) {
    v.require(false, "need at least three J bins");
    return v;
  }
  for (const auto& b : bins) {
    v.note("J in [" + num(b.lo) + ", " + num(b.hi) + "): n = " + std::to_string(b.count) + ", r = " +
           (b.correlation ? num(*b.correlation) : std::string("n/a")) + ", <<dY_S>> = " + num(b.mean_delta_yield));
  }
  // With an odd bin count "the central bins" is ambiguous, so every bin other
  // than the two outermost ones must satisfy the central-bin conditions.
  const std::size_t middle = n / 2;
  const double outer_r = std::min(bins[0].correlation.value_or(NAN), bins[n - 1].correlation.value_or(NAN));
  const double outer_dy = std::max(bins[0].mean_delta_yield, bins[n - 1].mean_delta_yield);
  for (std::size_t b = 1; b + 1 < n; ++b) {
    const double r = bins[b].correlation.value_or(NAN);
    v.require(r < outer_r, "bin " + std::to_string(b) + ": r " + num(r) + " < outermost-bin r " + num(outer_r));
  }
  for (std::size_t b = 1; b + 1 < n; ++b) {
    v.require(bins[b].mean_delta_yield > outer_dy, "bin " + std::to_string(b) + ": <<dY_S>> " +
                                                       num(bins[b].mean_delta_yield) + " > outermost-bin " +
                                                       num(outer_dy));
  }
  bool middle_highest = true;
  for (std::size_t b = 0; b < n; ++b)
    if (b != middle) middle_highest = middle_highest && bins[middle].mean_delta_yield > bins[b].mean_delta_yield;
  v.require(middle_highest, "<<dY_S>> highest in the middle bin (" + num(bins[middle].mean_delta_yield) + ")");

  std::string band;
  for (const auto& b : stats.exchange->band_correlations) {
    band += " K_d=" + num(b.dephasing) + ": r=" + (b.correlation ? num(*b.correlation) : std::string("n/a")) +
            " (n=" + std::to_string(b.count) + ")";
  }
  v.note("|J| < 2 band:" + band);
  if (bins[0].correlation && bins[n - 1].correlation) {
    v.note("J-sign asymmetry (reported only): r(J<0 outer) - r(J>0 outer) = " +
           num(*bins[0].correlation - *bins[n - 1].correlation));
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string workdir = "acceptance_out";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned threads_a = 1, threads_b = 3;
  app.add_option("--workdir", workdir, "directory for ensemble CSVs and reports");
  app.add_option("--samples", samples, "ensemble size per dephasing rate");
  app.add_option("--seed", seed, "ensemble seed");
  app.add_option("--threads-first", threads_a, "worker threads of the first ensemble run");
  app.add_option("--threads-second", threads_b, "worker threads of the repeat run");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(workdir);

  bool all = true;
  all &= report(1, "Larmor pair, K_d = 0: C(t) = H2[cos^2(Omega t/2)]", larmor_pair_without_dephasing());
  all &= report(2, "Larmor pair, K_d = Omega/5: exact oracle and closed forms", larmor_pair_with_dephasing());
  all &= report(3, "quantifier properties on random states", quantifier_properties());
  all &= report(4, "electron-nuclear entanglement fixture", entanglement_fixture());
  all &= report(5, "yield exactness", yield_exactness());

  EnsembleConfig config;
  config.samples = samples;
  config.seed = seed;
  config.threads = threads_a;
  const EnsembleRun first = run_and_save(config, fs::path(workdir) / "ensemble_first.csv");
  const EnsembleStats stats = compute_stats(first.result.records);
  std::ofstream(fs::path(workdir) / "ensemble_stats.json") << stats_to_json(stats).dump(2) << '\n';
  {
    std::ofstream report_file(fs::path(workdir) / "ensemble_stats.txt");
    write_stats_report(report_file, stats);
  }
  all &= report(6, "ensemble correlation study", ensemble_reproduction(config, first, stats));
  all &= report(7, "exchange-interval analysis at K_d = 1", exchange_reproduction(stats));

  config.threads = threads_b;
  const EnsembleRun second = run_and_save(config, fs::path(workdir) / "ensemble_second.csv");
  Verdict det;
  det.require(first.csv == second.csv, "byte-identical CSVs with " + std::to_string(threads_a) + " and " +
                                           std::to_string(threads_b) + " threads (" +
                                           std::to_string(first.csv.size()) + " bytes)");
  all &= report(8, "determinism across thread counts", det);

  std::cout << (all ? "all criteria passed" : "one or more criteria failed") << '\n';
  return all ? 0 : 1;
}
