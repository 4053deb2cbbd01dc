#include "rpcoh/state.hpp"

#include "rpcoh/errors.hpp"

#include <cmath>

namespace rpcoh {

PureState PureState::from_amplitudes(Vector amplitudes) {
  const double norm2 = amplitudes.squaredNorm();
  if (amplitudes.size() == 0 || !std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-12) {
    throw InvalidStateError("pure state must have unit norm (|psi|^2 = " + std::to_string(norm2) + ")");
  }
  return PureState(std::move(amplitudes));
}

DensityMatrix DensityMatrix::from_operator(Operator m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw InvalidStateError("density matrix must be square");
  if (!is_hermitian(m)) throw InvalidStateError("density matrix must be Hermitian");
  const double tr = m.trace().real();
  if (!(tr > 0.0) || tr > 1.0 + kPsdTolerance) {
    throw InvalidStateError("density matrix trace must lie in (0, 1], got " + std::to_string(tr));
  }
  if (eigvalsh(m)(0) < -kPsdTolerance) throw InvalidStateError("density matrix is not positive semidefinite");
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw DegenerateStateError("cannot normalize a state with zero trace");
  return DensityMatrix(m_ / tr);
}

}  // namespace rpcoh
