#include "rpcoh/compass.hpp"

#include "rpcoh/coherence.hpp"
#include "rpcoh/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

namespace rpcoh {

namespace {

constexpr double kHorizonTail = 1e-10;

double trace_product(const Operator& q, const Operator& x) {
  // Tr(Q X) without forming the product.
  return (q.transpose().cwiseProduct(x)).sum().real();
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

double draw(std::mt19937_64& gen, const ParameterRange& r) { return r.lo + (r.hi - r.lo) * uniform01(gen); }

bool same_rate(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) return std::nullopt;
  try {
    return pearson(x, y);
  } catch (const UndefinedMeasureError&) {
    return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Yields

YieldSolver::YieldSolver(std::size_t dim, double k, double dephasing)
    : proj_(StProjectors::for_dimension(dim)), k_(k) {
  if (!(k > 0.0)) throw ConfigError("reaction rate k must be positive");
  const auto d2 = static_cast<Eigen::Index>(dim * dim);
  // k - L with the Hamiltonian part left out: k + K_d (Q_T^T (x) Q_S + Q_S^T (x) Q_T)
  static_part_ = k * Matrix::Identity(d2, d2);
  if (dephasing != 0.0) {
    static_part_ += dephasing * (kron(proj_.triplet.transpose(), proj_.singlet) +
                                 kron(proj_.singlet.transpose(), proj_.triplet));
  }
}

YieldPair YieldSolver::operator()(const Operator& hamiltonian, const DensityMatrix& rho0) const {
  const Eigen::Index d = hamiltonian.rows();
  if (d != proj_.singlet.rows() || static_cast<std::size_t>(d) != rho0.dim()) {
    throw ContractViolation("YieldSolver: dimension mismatch");
  }
  const Operator id = Operator::Identity(d, d);
  const Complex plus_i(0.0, 1.0);
  const Matrix system = static_part_ + plus_i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  const Eigen::PartialPivLU<Matrix> lu(system);
  const Vector x = lu.solve(vectorize(rho0.matrix()));
  if (!x.allFinite()) throw NumericalFailure("resolvent solve produced non-finite values");
  const Operator xm = unvectorize(x, static_cast<std::size_t>(d));
  return {k_ * trace_product(proj_.singlet, xm), k_ * trace_product(proj_.triplet, xm)};
}

YieldPair singlet_yield(const Operator& hamiltonian, const DensityMatrix& rho0, const EvolutionParams& params,
                        YieldMethod method) {
  if (method == YieldMethod::Resolvent) {
    if (!(params.dephasing >= 0.0)) throw ConfigError("dephasing rate K_d must be >= 0");
    return YieldSolver(rho0.dim(), params.k, params.effective_dephasing())(hamiltonian, rho0);
  }

  EvolutionParams p = params;
  p.track_coherence = false;
  p.keep_states = true;
  const Trajectory traj = propagate(hamiltonian, rho0, p);
  const auto proj = StProjectors::for_dimension(rho0.dim());
  const Matrix gen = liouvillian(hamiltonian, p.effective_dephasing(), proj);
  const double k = p.k;
  const double h = traj.times[1] - traj.times[0];

  auto integrate = [&](const Operator& q) {
    double sum = 0.0;
    const std::size_t n = traj.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double f = k * trace_product(q, traj.states[i].matrix());
      sum += (i == 0 || i + 1 == n) ? 0.5 * f : f;
    }
    // f'(t) = k (-k Tr(Q rho) + Tr(Q L[rho])) since rho_t = e^{-kt} R_t.
    auto derivative = [&](const DensityMatrix& rho) {
      const Operator lrho = unvectorize(gen * vectorize(rho.matrix()), rho.dim());
      return k * (-k * trace_product(q, rho.matrix()) + trace_product(q, lrho));
    };
    const double fa = derivative(traj.states.front());
    const double fb = derivative(traj.states.back());
    return h * sum - h * h / 12.0 * (fb - fa);
  };
  return {integrate(proj.singlet), integrate(proj.triplet)};
}

MeanCoherence mean_coherence(const Trajectory& trajectory, double k) {
  if (trajectory.coherence.size() != trajectory.times.size() || trajectory.size() < 2) {
    throw ContractViolation("mean_coherence: trajectory carries no coherence series");
  }
  double sum = 0.0;
  const std::size_t n = trajectory.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double t0 = trajectory.times[i - 1], t1 = trajectory.times[i];
    const double f0 = k * std::exp(-k * t0) * trajectory.coherence[i - 1];
    const double f1 = k * std::exp(-k * t1) * trajectory.coherence[i];
    sum += 0.5 * (t1 - t0) * (f0 + f1);
  }
  MeanCoherence out;
  out.value = std::clamp(sum, 0.0, 1.0);
  out.truncated = std::exp(-k * trajectory.times.back()) > kHorizonTail;
  return out;
}

// ---------------------------------------------------------------------------
// Angular sweep

std::size_t SweepParams::epsilon_steps() const {
  if (n_phi < 8) throw ConfigError("angular grid needs at least 8 points");
  const double step = std::numbers::pi / static_cast<double>(n_phi);
  const double m = epsilon / step;
  const double rounded = std::round(m);
  if (!(epsilon > 0.0) || rounded < 1.0 || std::abs(m - rounded) > 1e-9 * std::max(1.0, m)) {
    throw ConfigError("epsilon must be a positive multiple of the grid step pi/" + std::to_string(n_phi));
  }
  const auto steps = static_cast<std::size_t>(rounded);
  if (2 * steps + 1 > n_phi) throw ConfigError("epsilon too large for the angular grid");
  return steps;
}

SweepResult angular_sweep(const HamiltonianSpec& spec, const EvolutionParams& params, const SweepParams& sweep) {
  const std::size_t m = sweep.epsilon_steps();
  const HamiltonianParts parts = HamiltonianParts::from_spec(spec);
  const DensityMatrix rho0 = initial_state(spec.system);
  const YieldSolver solver(spec.system.dim(), params.k, params.effective_dephasing());

  SweepResult out;
  const std::size_t n = sweep.n_phi;
  out.phi.resize(n);
  out.singlet_yield.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.phi[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    out.singlet_yield[i] = solver(parts.at(out.phi[i]), rho0).singlet;
  }
  out.star_index = m;
  out.delta_yield = -1.0;
  for (std::size_t i = m; i + m < n; ++i) {
    const double diff = std::abs(out.singlet_yield[i + m] - out.singlet_yield[i - m]);
    if (diff > out.delta_yield) {
      out.delta_yield = diff;
      out.star_index = i;
    }
  }
  out.phi_star = out.phi[out.star_index];
  return out;
}

// ---------------------------------------------------------------------------
// Ensemble

void EnsembleConfig::validate() const {
  if (samples < 1) throw ConfigError("ensemble needs at least one sample");
  if (dephasing_rates.empty()) throw ConfigError("ensemble needs at least one dephasing rate");
  for (double kd : dephasing_rates) {
    if (!(kd >= 0.0) || !std::isfinite(kd)) throw ConfigError("dephasing rates must be finite and >= 0");
  }
  for (const auto* r : {&a_xx, &a_yy, &a_zz, &exchange}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi) {
      throw ConfigError("parameter ranges must be finite with lo <= hi");
    }
  }
  if (!(omega >= 0.0)) throw ConfigError("omega must be >= 0");
  if (!(k > 0.0)) throw ConfigError("k must be positive");
  if (observable_stride < 1) throw ConfigError("observable stride must be >= 1");
  sweep.epsilon_steps();
}

SampleParameters draw_sample(const EnsembleConfig& config, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  std::mt19937_64 gen(seq);
  SampleParameters p{};
  p.a_xx = draw(gen, config.a_xx);
  p.a_yy = draw(gen, config.a_yy);
  p.a_zz = draw(gen, config.a_zz);
  p.exchange = draw(gen, config.exchange);
  return p;
}

EnsembleRecord evaluate_sample(const SampleParameters& params, double dephasing, const EnsembleConfig& config) {
  const HamiltonianSpec spec =
      HamiltonianSpec::compass(params.a_xx, params.a_yy, params.a_zz, config.omega, 0.0, params.exchange);
  EvolutionParams evo;
  evo.k = config.k;
  evo.dephasing = dephasing;
  evo.engine = Engine::Dephasing;
  const SweepResult sweep = angular_sweep(spec, evo, config.sweep);

  const Operator h = HamiltonianParts::from_spec(spec).at(sweep.phi_star);
  const DensityMatrix rho0 = initial_state(spec.system);
  const YieldPair yields = YieldSolver(spec.system.dim(), config.k, dephasing)(h, rho0);

  EvolutionParams obs =
      EvolutionParams::for_observables(h, dephasing, Engine::Dephasing, config.k, config.observable_stride);
  obs.keep_states = false;
  const MeanCoherence cbar = mean_coherence(propagate(h, rho0, obs), config.k);

  EnsembleRecord r;
  r.dephasing = dephasing;
  r.a_xx = params.a_xx;
  r.a_yy = params.a_yy;
  r.a_zz = params.a_zz;
  r.exchange = params.exchange;
  r.phi_star = sweep.phi_star;
  r.delta_yield = sweep.delta_yield;
  r.mean_coherence = cbar.value;
  r.singlet_yield = yields.singlet;
  r.triplet_yield = yields.triplet;
  return r;
}

EnsembleResult run_ensemble(const EnsembleConfig& config,
                            const std::function<void(std::size_t, std::size_t)>& progress) {
  config.validate();
  const std::size_t n = config.samples;
  std::vector<std::vector<EnsembleRecord>> per_sample(n);
  std::vector<std::size_t> failures(n, 0);

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const SampleParameters params = draw_sample(config, i);
      for (double kd : config.dephasing_rates) {
        try {
          EnsembleRecord r = evaluate_sample(params, kd, config);
          r.sample = i;
          per_sample[i].push_back(r);
        } catch (const NumericalFailure&) {
          ++failures[i];
        }
      }
      if (progress) {
        const std::lock_guard lock(progress_mutex);
        progress(++done, n);
      }
    }
  };
  // Anything other than a per-sample numerical failure aborts the run; the
  // remaining workers drain the index counter and the error is rethrown.
  auto worker = [&] {
    try {
      work();
    } catch (...) {
      next.store(n);
      const std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (first_error) std::rethrow_exception(first_error);

  EnsembleResult out;
  out.records.reserve(n * config.dephasing_rates.size());
  for (std::size_t i = 0; i < n; ++i) {
    out.records.insert(out.records.end(), per_sample[i].begin(), per_sample[i].end());
    out.failed += failures[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("pearson: length mismatch");
  if (x.size() < 2) throw ContractViolation("pearson: need at least two points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw UndefinedMeasureError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  if (bins < 2) throw ConfigError("histogram needs at least 2 bins");
  Histogram h;
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double pos = (v - h.lo) / (h.hi - h.lo) * static_cast<double>(bins);
    const auto idx = static_cast<std::ptrdiff_t>(std::floor(pos));
    h.counts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(bins) - 1))]++;
  }
  h.mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - h.mean) * (v - h.mean);
  h.stddev = values.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(values.size()));
  return h;
}

std::vector<double> dephasing_values(std::span<const EnsembleRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (std::none_of(out.begin(), out.end(), [&](double v) { return same_rate(v, r.dephasing); })) {
      out.push_back(r.dephasing);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExchangeAnalysis exchange_analysis(std::span<const EnsembleRecord> records, double dephasing,
                                   const ExchangeParams& params) {
  const double span = params.j_hi - params.j_lo;
  const double nb = span / params.bin_width;
  if (!(params.bin_width > 0.0) || !(span > 0.0) || std::abs(nb - std::round(nb)) > 1e-9 * nb) {
    throw ConfigError("exchange range must split into whole bins");
  }
  const auto nbins = static_cast<std::size_t>(std::round(nb));

  std::vector<std::vector<double>> dy(nbins), cb(nbins);
  for (const auto& r : records) {
    if (!same_rate(r.dephasing, dephasing)) continue;
    if (r.exchange < params.j_lo || r.exchange > params.j_hi) continue;
    auto b = static_cast<std::size_t>(std::floor((r.exchange - params.j_lo) / params.bin_width));
    b = std::min(b, nbins - 1);
    dy[b].push_back(r.delta_yield);
    cb[b].push_back(r.mean_coherence);
  }

  ExchangeAnalysis out;
  out.dephasing = dephasing;
  out.band = params.band;
  for (std::size_t b = 0; b < nbins; ++b) {
    ExchangeBin bin;
    bin.lo = params.j_lo + params.bin_width * static_cast<double>(b);
    bin.hi = bin.lo + params.bin_width;
    bin.count = dy[b].size();
    bin.mean_delta_yield = mean_of(dy[b]);
    bin.correlation = try_pearson(dy[b], cb[b]);
    bin.flagged = !bin.correlation.has_value();
    out.bins.push_back(bin);
  }

  for (double kd : dephasing_values(records)) {
    std::vector<double> x, y;
    for (const auto& r : records) {
      if (same_rate(r.dephasing, kd) && std::abs(r.exchange) < params.band) {
        x.push_back(r.delta_yield);
        y.push_back(r.mean_coherence);
      }
    }
    out.band_correlations.push_back({kd, x.size(), try_pearson(x, y)});
  }
  return out;
}

EnsembleStats compute_stats(std::span<const EnsembleRecord> records, std::size_t bins, double exchange_dephasing,
                            const ExchangeParams& exchange) {
  EnsembleStats out;
  std::vector<double> mean_dy, mean_cb;
  for (double kd : dephasing_values(records)) {
    std::vector<double> dy, cb, ys, yt;
    for (const auto& r : records) {
      if (!same_rate(r.dephasing, kd)) continue;
      dy.push_back(r.delta_yield);
      cb.push_back(r.mean_coherence);
      ys.push_back(r.singlet_yield);
      yt.push_back(r.triplet_yield);
    }
    DephasingStats s;
    s.dephasing = kd;
    s.count = dy.size();
    s.pearson = try_pearson(dy, cb);
    if (s.pearson) s.spearman = spearman(dy, cb);
    s.mean_delta_yield = mean_of(dy);
    s.mean_coherence = mean_of(cb);
    s.singlet_hist = histogram(ys, bins);
    s.triplet_hist = histogram(yt, bins);
    s.mean_singlet = s.singlet_hist.mean;
    s.mean_triplet = s.triplet_hist.mean;
    s.stddev_singlet = s.singlet_hist.stddev;
    s.stderr_singlet = s.count > 1 ? s.stddev_singlet / std::sqrt(static_cast<double>(s.count)) : 0.0;
    out.per_dephasing.push_back(s);
    mean_dy.push_back(s.mean_delta_yield);
    mean_cb.push_back(s.mean_coherence);
  }
  out.mean_pair_correlation = try_pearson(mean_cb, mean_dy);

  const auto kds = dephasing_values(records);
  if (std::any_of(kds.begin(), kds.end(), [&](double v) { return same_rate(v, exchange_dephasing); })) {
    out.exchange = exchange_analysis(records, exchange_dephasing, exchange);
  }
  return out;
}

}  // namespace rpcoh
