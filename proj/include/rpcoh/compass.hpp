#pragma once

#include "rpcoh/dynamics.hpp"
#include "rpcoh/model.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace rpcoh {

struct YieldPair {
  double singlet = 0.0;
  double triplet = 0.0;
};

enum class YieldMethod {
  Resolvent,   // Y = k Tr(Q X), (k - L) X = rho_0
  Quadrature,  // trapezoid along a trajectory, with Euler-Maclaurin end corrections
};

/// Y_S = int_0^inf k Tr(rho_t Q_S) dt and likewise Y_T. The quadrature route
/// uses params.dt and params.t_max; the resolvent route only k, K_d, engine.
YieldPair singlet_yield(const Operator& hamiltonian, const DensityMatrix& rho0, const EvolutionParams& params,
                        YieldMethod method = YieldMethod::Resolvent);

/// Resolvent yields with the projectors and dephasing superoperator built
/// once; repeated calls only rebuild the commutator part.
class YieldSolver {
 public:
  YieldSolver(std::size_t dim, double k, double dephasing);
  YieldPair operator()(const Operator& hamiltonian, const DensityMatrix& rho0) const;

 private:
  StProjectors proj_;
  double k_;
  Matrix static_part_;  // k - (dephasing superoperator)
};

struct MeanCoherence {
  double value = 0.0;
  bool truncated = false;  // horizon left more than 1e-10 of the reaction unaccounted
};

/// int_0^inf k e^{-kt} C(rho_t) dt by the trapezoid rule over the trajectory.
/// The trajectory must carry coherence values.
MeanCoherence mean_coherence(const Trajectory& trajectory, double k);

struct SweepParams {
  std::size_t n_phi = 64;
  double epsilon = std::numbers::pi / 64.0;

  /// epsilon in grid steps; throws ConfigError unless it is a positive
  /// multiple of pi / n_phi small enough to leave an interior point.
  std::size_t epsilon_steps() const;
};

struct SweepResult {
  std::vector<double> phi;
  std::vector<double> singlet_yield;
  double delta_yield = 0.0;  // max |Y_S(phi0 + eps) - Y_S(phi0 - eps)|
  double phi_star = 0.0;
  std::size_t star_index = 0;
};

/// Y_S on phi = 0, pi/n, ..., (n-1)pi/n (the yield has period pi for
/// diagonal tensors), then the central-difference figure of merit over
/// interior grid points. The spec's own phi is ignored.
SweepResult angular_sweep(const HamiltonianSpec& spec, const EvolutionParams& params, const SweepParams& sweep);

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct EnsembleConfig {
  std::size_t samples = 1000;
  std::vector<double> dephasing_rates{0.0, 1.0, 5.0, 10.0};
  ParameterRange a_xx{0.0, 10.0};
  ParameterRange a_yy{0.0, 10.0};
  ParameterRange a_zz{0.0, 10.0};
  ParameterRange exchange{-10.0, 10.0};
  double omega = 1.0;
  double k = 1.0;
  std::uint64_t seed = 1;
  SweepParams sweep;
  int observable_stride = 5;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct EnsembleRecord {
  std::size_t sample = 0;
  double dephasing = 0.0;
  double a_xx = 0.0, a_yy = 0.0, a_zz = 0.0, exchange = 0.0;
  double phi_star = 0.0;
  double delta_yield = 0.0;
  double mean_coherence = 0.0;
  double singlet_yield = 0.0;
  double triplet_yield = 0.0;
};

struct EnsembleResult {
  std::vector<EnsembleRecord> records;  // sample-major, K_d in config order
  std::size_t failed = 0;               // (sample, K_d) pairs dropped on numerical failure
};

struct SampleParameters {
  double a_xx, a_yy, a_zz, exchange;
};

/// Parameters of sample `index`; a pure function of (seed, index).
SampleParameters draw_sample(const EnsembleConfig& config, std::size_t index);

/// One record for fixed parameters and dephasing rate: angular sweep, then
/// C-bar and yields at the angle maximizing the figure of merit.
EnsembleRecord evaluate_sample(const SampleParameters& params, double dephasing, const EnsembleConfig& config);

/// Samples run concurrently; output is identical for any thread count.
EnsembleResult run_ensemble(const EnsembleConfig& config,
                            const std::function<void(std::size_t done, std::size_t total)>& progress = {});

/// Product-moment correlation. Throws ContractViolation for fewer than two
/// points or mismatched lengths, UndefinedMeasureError for zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson on average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

/// Uniform bins over [0, 1]; out-of-range values land in the edge bins.
Histogram histogram(std::span<const double> values, std::size_t bins);

struct ExchangeBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::optional<double> correlation;  // empty when the bin is empty or degenerate
  double mean_delta_yield = 0.0;
  bool flagged = false;
};

struct BandCorrelation {
  double dephasing = 0.0;
  std::size_t count = 0;
  std::optional<double> correlation;
};

struct ExchangeAnalysis {
  double dephasing = 0.0;
  std::vector<ExchangeBin> bins;
  double band = 2.0;
  std::vector<BandCorrelation> band_correlations;  // |J| < band, one per K_d
};

struct ExchangeParams {
  double j_lo = -10.0;
  double j_hi = 10.0;
  double bin_width = 4.0;
  double band = 2.0;
};

/// Bins records at the given K_d by J; per bin Pearson r(dY_S, C-bar) and
/// mean dY_S. Also r inside |J| < band for every K_d present.
ExchangeAnalysis exchange_analysis(std::span<const EnsembleRecord> records, double dephasing,
                                   const ExchangeParams& params = {});

struct DephasingStats {
  double dephasing = 0.0;
  std::size_t count = 0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  double mean_delta_yield = 0.0;
  double mean_coherence = 0.0;
  double mean_singlet = 0.0;
  double mean_triplet = 0.0;
  double stddev_singlet = 0.0;
  double stderr_singlet = 0.0;
  Histogram singlet_hist;
  Histogram triplet_hist;
};

struct EnsembleStats {
  std::vector<DephasingStats> per_dephasing;  // ascending K_d
  std::optional<double> mean_pair_correlation;  // r over (<<C-bar>>, <<dY_S>>) pairs
  std::optional<ExchangeAnalysis> exchange;
};

std::vector<double> dephasing_values(std::span<const EnsembleRecord> records);

EnsembleStats compute_stats(std::span<const EnsembleRecord> records, std::size_t bins = 20,
                            double exchange_dephasing = 1.0, const ExchangeParams& exchange = {});

}  // namespace rpcoh
