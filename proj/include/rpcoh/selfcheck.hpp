#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rpcoh {

/// Outcome of one comparison between the production code path and an
/// independent reference (closed form, small exact model, or identity).
struct OracleResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;

  bool passed() const noexcept { return max_error < tolerance; }
};

/// Nucleus-free pair H = (Omega/2)(s1z - s2z) from |s>, K_d = 0: numeric
/// p_S and C against cos^2(Omega t / 2) and H2[cos^2(Omega t / 2)] over
/// t in [0, 4 pi / Omega], plus the exact values at the quarter periods.
OracleResult check_fictitious_population(double rabi = 1.0);
OracleResult check_fictitious_coherence(double rabi = 1.0);
OracleResult check_fictitious_landmarks(double rabi = 1.0);

/// Full propagator against the exponential of the 4-dim S-T0 Liouvillian
/// (p_S, C, trace) on the same grid.
OracleResult check_dephased_pair(double rabi, double dephasing);
/// Weak-dephasing closed forms against the exact 4-dim model; the error
/// covers p_S, C and the four eigenvalues.
OracleResult check_closed_forms(double rabi, double dephasing);

/// Random pure states at d = 8: |C - H2(p_S)|.
OracleResult check_pure_saturation(std::size_t count, std::uint64_t seed);
/// Random mixed states at dimension dim: |C - S(rho || rho_hat)|.
OracleResult check_relative_entropy(std::size_t dim, std::size_t count, std::uint64_t seed);
/// eigh reconstruction on random Hermitian matrices, relative to max|A|.
OracleResult check_eigh(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Resolvent against quadrature yields on random 8-dim systems.
OracleResult check_yield_methods(std::size_t count, std::uint64_t seed);
/// Haberkorn yield of the nucleus-free pair against (1 + k^2/(k^2 + Omega^2)) / 2.
OracleResult check_haberkorn_yield(double rabi);

/// Every suite above with the default sizes used by the command line.
std::vector<OracleResult> run_oracle_suites(std::uint64_t seed = 20240521);

}  // namespace rpcoh
