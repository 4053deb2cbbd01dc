#pragma once

#include "rpcoh/spinops.hpp"
#include "rpcoh/state.hpp"

#include <optional>
#include <vector>

namespace rpcoh {

/// haberkorn: dR/dt = -i[H,R]; dephasing adds -K_d (Q_S R Q_T + Q_T R Q_S).
/// In both cases rho_t = exp(-k t) R_t (equal singlet and triplet rates).
enum class Engine { Haberkorn, Dephasing };

struct EvolutionParams {
  double k = 1.0;
  double dephasing = 0.0;  // K_d, units of k
  Engine engine = Engine::Dephasing;
  double t_max = 25.0;     // units of 1/k
  double dt = 0.02;        // grid spacing of the returned trajectory
  bool track_coherence = true;
  bool keep_states = true;

  static constexpr double kDefaultHorizon = 25.0;
  static constexpr double kDefaultStepScale = 0.02;

  /// dt = 0.02 / max(|H|_2, K_d, k), t_max = 25/k, with dt shrunk so the grid
  /// lands exactly on t_max.
  static EvolutionParams defaults(const Operator& hamiltonian, double dephasing,
                                  Engine engine = Engine::Dephasing, double k = 1.0);
  /// As defaults() but with a grid `stride` times coarser; used for
  /// entropy-based observables, which dominate the cost.
  static EvolutionParams for_observables(const Operator& hamiltonian, double dephasing,
                                         Engine engine = Engine::Dephasing, double k = 1.0,
                                         int stride = 5);

  double effective_dephasing() const noexcept { return engine == Engine::Haberkorn ? 0.0 : dephasing; }
  std::size_t steps() const;
  /// Throws ConfigError on non-positive horizon or step, or K_d < 0.
  void validate() const;
};

struct Trajectory {
  double k = 1.0;
  std::vector<double> times;
  std::vector<DensityMatrix> states;        // rho_t, empty unless keep_states
  std::vector<double> trace;                // Tr rho_t
  std::vector<double> singlet_probability;  // Tr(rho_t Q_S) / Tr rho_t
  std::vector<double> coherence;            // C of the normalized rho_t, empty unless tracked

  std::size_t size() const noexcept { return times.size(); }
};

/// Column-major vectorization: vec(A X B) = (B^T (x) A) vec(X).
Vector vectorize(const Operator& m);
Operator unvectorize(const Vector& v, std::size_t dim);

/// L[R] = -i[H,R] - K_d (Q_S R Q_T + Q_T R Q_S) as a d^2 x d^2 matrix.
Matrix liouvillian(const Operator& hamiltonian, double dephasing, const StProjectors& proj);

/// Matrix exponential by scaling and squaring with a [13/13] Pade approximant.
Matrix expm(const Matrix& a);

/// exp(L dt). dt = 0 gives the identity.
Matrix propagator_step(const Operator& hamiltonian, double dephasing, double dt);

/// Evolves rho_0 on the uniform grid 0, dt, ..., t_max. Throws
/// NumericalFailure if the state leaves the PSD cone beyond tolerance.
Trajectory propagate(const Operator& hamiltonian, const DensityMatrix& rho0, const EvolutionParams& params);

/// Closed-form and exact values for the nucleus-free pair started in |s>.
struct FictitiousValues {
  double singlet_probability = 0.0;
  double coherence = 0.0;
  double e1 = 0.0, e2 = 0.0;          // eigenvalues of rho_t (nonzero ones, ascending)
  double e1_hat = 0.0, e2_hat = 0.0;  // triplet and singlet populations (spectrum of rho_hat)
  double trace = 0.0;
};

struct FictitiousOracle {
  FictitiousValues approximate;
  FictitiousValues exact;
};

/// Weak-dephasing closed forms. Throws RegimeError unless K_d < 2|Omega|.
FictitiousValues fictitious_approximate(double rabi, double dephasing, double k, double t);
/// Exponential of the 4-dim S-T0 Liouvillian (Taylor series, scaling and
/// squaring). Independent of expm() and of the full-space propagator.
FictitiousValues fictitious_exact(double rabi, double dephasing, double k, double t);
FictitiousOracle oracle_fictitious(double rabi, double dephasing, double k, double t);

}  // namespace rpcoh
