#include "rpcoh/coherence.hpp"

#include "rpcoh/errors.hpp"
#include "rpcoh/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rpcoh {

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr double kKrausTolerance = 1e-10;

void require_unit_trace(const DensityMatrix& rho, const char* who) {
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw NormalizationError(std::string(who) + ": state must have unit trace, got " + std::to_string(tr));
  }
}

void require_complete(std::span<const Operator> kraus, std::size_t dim, const char* who) {
  if (kraus.empty()) throw KrausCompletenessError(std::string(who) + ": empty Kraus set");
  const auto n = static_cast<Eigen::Index>(dim);
  Operator sum = Operator::Zero(n, n);
  for (const auto& k : kraus) {
    if (k.rows() != n || k.cols() != n) throw KrausCompletenessError(std::string(who) + ": dimension mismatch");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - Operator::Identity(n, n)) > kKrausTolerance) {
    throw KrausCompletenessError(std::string(who) + ": sum of K^dagger K is not the identity");
  }
}

}  // namespace

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -DensityMatrix::kPsdTolerance) {
      throw NumericalFailure("negative eigenvalue " + std::to_string(l) + " in density matrix");
    }
    if (l >= kEntropyClip) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  require_unit_trace(rho, "von_neumann_entropy");
  return entropy_of_spectrum(eigvalsh(rho.matrix()));
}

DensityMatrix decohere(const DensityMatrix& rho) { return decohere(rho, StProjectors::for_dimension(rho.dim())); }

DensityMatrix decohere(const DensityMatrix& rho, const StProjectors& proj) {
  const Operator& m = rho.matrix();
  return DensityMatrix::unchecked(proj.singlet * m * proj.singlet + proj.triplet * m * proj.triplet);
}

CoherenceReport st_coherence(const DensityMatrix& rho) {
  return st_coherence(rho, StProjectors::for_dimension(rho.dim()));
}

CoherenceReport st_coherence(const DensityMatrix& rho, const StProjectors& proj) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw DegenerateStateError("st_coherence: state has zero trace");
  const Operator unit = rho.matrix() / tr;
  // rho_hat is block diagonal in the S/T split, so its spectrum is the union
  // of the spectra of the two compressed blocks.
  const Operator singlet_block = proj.singlet_basis.adjoint() * unit * proj.singlet_basis;
  const Operator triplet_block = proj.triplet_basis.adjoint() * unit * proj.triplet_basis;

  CoherenceReport r;
  r.singlet_probability = singlet_block.trace().real();
  r.triplet_probability = 1.0 - r.singlet_probability;
  r.entropy = entropy_of_spectrum(eigvalsh(unit));
  r.decohered_entropy = entropy_of_spectrum(eigvalsh(singlet_block)) + entropy_of_spectrum(eigvalsh(triplet_block));
  r.coherence = r.decohered_entropy - r.entropy;
  r.bound = binary_entropy(std::clamp(r.singlet_probability, 0.0, 1.0));
  return r;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_unit_trace(rho, "relative_entropy");
  require_unit_trace(sigma, "relative_entropy");
  if (rho.dim() != sigma.dim()) throw ContractViolation("relative_entropy: dimension mismatch");

  const double neg_entropy = -entropy_of_spectrum(eigvalsh(rho.matrix()));
  const Eigensystem es = eigh(sigma.matrix());
  double cross = 0.0;  // Tr(rho log2 sigma)
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const double weight = es.vectors.col(j).dot(rho.matrix() * es.vectors.col(j)).real();
    const double mu = es.values(j);
    if (mu < kEntropyClip) {
      if (weight > kEntropyClip) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log2(mu);
  }
  return neg_entropy - cross;
}

DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Operator> kraus) {
  require_complete(kraus, rho.dim(), "apply_kraus");
  Operator out = Operator::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : kraus) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix::unchecked(std::move(out));
}

std::vector<Operator> lift_nuclear_kraus(std::span<const Operator> nuclear_kraus, const SpinSystem& sys) {
  require_complete(nuclear_kraus, sys.nuclear_dim(), "lift_nuclear_kraus");
  const Operator electrons = identity(4);
  std::vector<Operator> lifted;
  lifted.reserve(nuclear_kraus.size());
  for (const auto& k : nuclear_kraus) lifted.push_back(kron(electrons, k));
  return lifted;
}

double legacy_pcoh(const DensityMatrix& rho) {
  const StBlocks b = st_blocks(rho.matrix(), StProjectors::for_dimension(rho.dim()));
  const double pop_s = b.ss.trace().real();
  const double pop_t = b.tt.trace().real();
  const double scale = rho.trace();
  if (pop_s <= kEntropyClip * scale || pop_t <= kEntropyClip * scale) {
    throw UndefinedMeasureError("p_coh is undefined when the singlet or triplet population vanishes");
  }
  return (b.st * b.ts).trace().real() / (pop_s * pop_t);
}

L1Coherence legacy_l1(const DensityMatrix& rho) {
  const DensityMatrix unit = rho.normalized();
  const std::size_t d = unit.dim();
  const StBlocks b = st_blocks(unit.matrix(), StProjectors::for_dimension(d));
  const Operator nuc = identity(d / 4);
  L1Coherence out;
  for (PairState t : {PairState::TripletPlus, PairState::TripletZero, PairState::TripletMinus}) {
    const Vector v = pair_state(t);
    const Operator proj = kron(v * v.adjoint(), nuc);
    out.raw_sum += std::sqrt(std::max(0.0, (b.st * proj * b.ts).trace().real()));
  }
  out.original = 4.0 / 3.0 * out.raw_sum;
  out.corrected = 2.0 / std::sqrt(3.0) * out.raw_sum;
  return out;
}

}  // namespace rpcoh
