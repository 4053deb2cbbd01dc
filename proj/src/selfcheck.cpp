#include "rpcoh/selfcheck.hpp"

#include "rpcoh/coherence.hpp"
#include "rpcoh/compass.hpp"
#include "rpcoh/dynamics.hpp"
#include "rpcoh/model.hpp"
#include "rpcoh/random_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rpcoh {

namespace {

constexpr double kPi = std::numbers::pi;

// Trajectory of the nucleus-free pair over four Rabi periods, with a grid
// that hits every quarter period exactly.
Trajectory fictitious_trajectory(double rabi, double dephasing) {
  const Operator h = build_fictitious_pair(0.5 * rabi, -0.5 * rabi);
  EvolutionParams p = EvolutionParams::defaults(h, dephasing);
  p.t_max = 4.0 * kPi / std::abs(rabi);
  const double quarter = 0.5 * kPi / std::abs(rabi);
  p.dt = quarter / std::ceil(quarter / p.dt);
  p.keep_states = false;
  return propagate(h, initial_state(SpinSystem{}), p);
}

double cos2(double x) {
  const double c = std::cos(x);
  return c * c;
}

void track(OracleResult& r, double err) {
  r.max_error = std::max(r.max_error, std::isfinite(err) ? err : INFINITY);
  ++r.cases;
}

}  // namespace

OracleResult check_fictitious_population(double rabi) {
  OracleResult r{"nucleus-free pair p_S vs cos^2(Omega t/2)", 0.0, 1e-8, 0};
  const Trajectory traj = fictitious_trajectory(rabi, 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    track(r, std::abs(traj.singlet_probability[i] - cos2(0.5 * rabi * traj.times[i])));
  }
  return r;
}

OracleResult check_fictitious_coherence(double rabi) {
  OracleResult r{"nucleus-free pair C vs H2[cos^2(Omega t/2)]", 0.0, 1e-6, 0};
  const Trajectory traj = fictitious_trajectory(rabi, 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    track(r, std::abs(traj.coherence[i] - binary_entropy(cos2(0.5 * rabi * traj.times[i]))));
  }
  return r;
}

OracleResult check_fictitious_landmarks(double rabi) {
  OracleResult r{"nucleus-free pair C at quarter periods (0,1,0,1,0)", 0.0, 1e-6, 0};
  const Trajectory traj = fictitious_trajectory(rabi, 0.0);
  const double quarter = 0.5 * kPi / std::abs(rabi);
  for (int q = 0; q <= 4; ++q) {
    const double target_t = quarter * q;
    const auto it = std::min_element(traj.times.begin(), traj.times.end(), [&](double a, double b) {
      return std::abs(a - target_t) < std::abs(b - target_t);
    });
    const auto i = static_cast<std::size_t>(it - traj.times.begin());
    track(r, std::abs(traj.coherence[i] - (q % 2 == 0 ? 0.0 : 1.0)));
  }
  return r;
}

OracleResult check_dephased_pair(double rabi, double dephasing) {
  OracleResult r{"nucleus-free pair with dephasing vs 4-dim Liouvillian", 0.0, 1e-8, 0};
  const Trajectory traj = fictitious_trajectory(rabi, dephasing);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FictitiousValues ex = fictitious_exact(rabi, dephasing, traj.k, traj.times[i]);
    track(r, std::abs(traj.singlet_probability[i] - ex.singlet_probability));
    track(r, std::abs(traj.coherence[i] - ex.coherence));
    track(r, std::abs(traj.trace[i] - ex.trace));
  }
  return r;
}

OracleResult check_closed_forms(double rabi, double dephasing) {
  OracleResult r{"weak-dephasing closed forms vs 4-dim Liouvillian", 0.0, 5e-2, 0};
  const double t_max = 4.0 * kPi / std::abs(rabi);
  constexpr int kPoints = 2000;
  for (int i = 0; i <= kPoints; ++i) {
    const double t = t_max * i / kPoints;
    const FictitiousOracle o = oracle_fictitious(rabi, dephasing, 1.0, t);
    track(r, std::abs(o.approximate.singlet_probability - o.exact.singlet_probability));
    track(r, std::abs(o.approximate.coherence - o.exact.coherence));
    track(r, std::abs(o.approximate.e1 - o.exact.e1));
    track(r, std::abs(o.approximate.e2 - o.exact.e2));
    track(r, std::abs(o.approximate.e1_hat - o.exact.e1_hat));
    track(r, std::abs(o.approximate.e2_hat - o.exact.e2_hat));
  }
  return r;
}

OracleResult check_pure_saturation(std::size_t count, std::uint64_t seed) {
  OracleResult r{"pure states saturate C = H2(p_S)", 0.0, 1e-10, 0};
  Rng rng(seed);
  const SpinSystem sys = SpinSystem::single_proton();
  for (std::size_t i = 0; i < count; ++i) {
    const CoherenceReport rep = st_coherence(DensityMatrix::from_pure(random_pure_state(sys, rng)));
    track(r, std::abs(rep.coherence - rep.bound));
  }
  return r;
}

OracleResult check_relative_entropy(std::size_t dim, std::size_t count, std::uint64_t seed) {
  OracleResult r{"C = S(rho || rho_hat) at d = " + std::to_string(dim), 0.0, 1e-10, 0};
  Rng rng(seed);
  const StProjectors proj = StProjectors::for_dimension(dim);
  for (std::size_t i = 0; i < count; ++i) {
    const DensityMatrix rho = random_density_matrix(dim, rng);
    track(r, std::abs(st_coherence(rho, proj).coherence - relative_entropy(rho, decohere(rho, proj))));
  }
  return r;
}

OracleResult check_eigh(std::size_t dim, std::size_t count, std::uint64_t seed) {
  OracleResult r{"eigh reconstruction at d = " + std::to_string(dim), 0.0, 1e-11 * static_cast<double>(dim), 0};
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Operator a = random_hermitian(dim, rng);
    const Eigensystem es = eigh(a);
    const Operator back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    track(r, max_abs(back - a) / max_abs(a));
  }
  return r;
}

OracleResult check_yield_methods(std::size_t count, std::uint64_t seed) {
  OracleResult r{"resolvent vs quadrature singlet yield (d = 8)", 0.0, 1e-6, 0};
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rates[] = {0.0, 1.0, 5.0, 10.0};
  for (std::size_t i = 0; i < count; ++i) {
    const HamiltonianSpec spec = HamiltonianSpec::compass(10.0 * u(rng), 10.0 * u(rng), 10.0 * u(rng), 1.0,
                                                          kPi * u(rng), -10.0 + 20.0 * u(rng));
    const Operator h = build_hamiltonian(spec);
    const DensityMatrix rho0 = initial_state(spec.system);
    const double kd = rates[i % 4];
    const EvolutionParams p = EvolutionParams::defaults(h, kd);
    const YieldPair exact = singlet_yield(h, rho0, p, YieldMethod::Resolvent);
    const YieldPair quad = singlet_yield(h, rho0, p, YieldMethod::Quadrature);
    track(r, std::abs(exact.singlet - quad.singlet));
  }
  return r;
}

OracleResult check_haberkorn_yield(double rabi) {
  OracleResult r{"nucleus-free Haberkorn yield vs closed form", 0.0, 1e-8, 0};
  const Operator h = build_fictitious_pair(0.5 * rabi, -0.5 * rabi);
  const DensityMatrix rho0 = initial_state(SpinSystem{});
  const double expected = 0.5 * (1.0 + 1.0 / (1.0 + rabi * rabi));
  for (YieldMethod m : {YieldMethod::Resolvent, YieldMethod::Quadrature}) {
    const EvolutionParams p = EvolutionParams::defaults(h, 0.0, Engine::Haberkorn);
    track(r, std::abs(singlet_yield(h, rho0, p, m).singlet - expected));
  }
  return r;
}

std::vector<OracleResult> run_oracle_suites(std::uint64_t seed) {
  std::vector<OracleResult> out;
  out.push_back(check_fictitious_population(1.0));
  out.push_back(check_fictitious_coherence(1.0));
  out.push_back(check_fictitious_landmarks(1.0));
  out.push_back(check_dephased_pair(1.0, 0.2));
  out.push_back(check_closed_forms(1.0, 0.2));
  out.push_back(check_pure_saturation(1000, seed));
  for (std::size_t d : {4u, 8u, 16u}) out.push_back(check_relative_entropy(d, 200, seed + d));
  out.push_back(check_eigh(8, 200, seed + 1));
  out.push_back(check_yield_methods(20, seed + 2));
  out.push_back(check_haberkorn_yield(1.0));
  return out;
}

}  // namespace rpcoh
