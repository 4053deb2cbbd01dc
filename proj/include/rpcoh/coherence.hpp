#pragma once

#include "rpcoh/spinops.hpp"
#include "rpcoh/state.hpp"

#include <span>
#include <vector>

namespace rpcoh {

/// Eigenvalues below this (after normalization) count as zero in entropies
/// and support tests.
inline constexpr double kEntropyClip = 1e-12;

/// All entropies are in bits.
struct CoherenceReport {
  double coherence = 0.0;          // C = S(rho_hat) - S(rho)
  double singlet_probability = 0.0;
  double triplet_probability = 0.0;
  double entropy = 0.0;            // S(rho)
  double decohered_entropy = 0.0;  // S(rho_hat)
  double bound = 0.0;              // H2(p_S)
};

/// -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

/// -sum l log2 l over a spectrum, with 0 log 0 = 0. Eigenvalues in
/// [-1e-9, 1e-12) are treated as zero; anything more negative is a
/// NumericalFailure.
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Requires unit trace within 1e-10 (NormalizationError otherwise).
double von_neumann_entropy(const DensityMatrix& rho);

/// Q_S rho Q_S + Q_T rho Q_T.
DensityMatrix decohere(const DensityMatrix& rho);
DensityMatrix decohere(const DensityMatrix& rho, const StProjectors& proj);

/// Normalizes rho by its trace first. Throws DegenerateStateError for zero
/// trace.
CoherenceReport st_coherence(const DensityMatrix& rho);
CoherenceReport st_coherence(const DensityMatrix& rho, const StProjectors& proj);

/// S(rho || sigma) in bits; +infinity when supp(rho) is not inside
/// supp(sigma). Both arguments need unit trace.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sum_n K_n rho K_n^dagger. Throws KrausCompletenessError unless
/// sum K^dagger K = 1 within 1e-10.
DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Operator> kraus);

/// {1_electrons (x) k_n}. The nuclear set must itself be complete.
std::vector<Operator> lift_nuclear_kraus(std::span<const Operator> nuclear_kraus, const SpinSystem& sys);

/// Tr(rho_ST rho_TS) / (Tr rho_SS Tr rho_TT). Throws UndefinedMeasureError if
/// either population vanishes.
double legacy_pcoh(const DensityMatrix& rho);

struct L1Coherence {
  double raw_sum = 0.0;     // sum_j sqrt(Tr(rho_ST |T_j><T_j| rho_TS))
  double original = 0.0;    // 4/3 * raw_sum, as historically published
  double corrected = 0.0;   // 2/sqrt(3) * raw_sum, peaks at 1
};
L1Coherence legacy_l1(const DensityMatrix& rho);

}  // namespace rpcoh
