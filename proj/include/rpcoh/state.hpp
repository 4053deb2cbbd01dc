#pragma once

#include "rpcoh/spinops.hpp"

namespace rpcoh {

/// Normalized state vector in the canonical slot order.
class PureState {
 public:
  /// Throws InvalidStateError unless sum |c_i|^2 = 1 within 1e-12.
  static PureState from_amplitudes(Vector amplitudes);

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  Operator projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  explicit PureState(Vector v) : amplitudes_(std::move(v)) {}
  Vector amplitudes_;
};

/// Hermitian, positive semidefinite operator with trace in (0, 1]. The trace
/// is tracked rather than forced to one, since the reaction depletes it.
class DensityMatrix {
 public:
  static constexpr double kPsdTolerance = 1e-9;

  /// Validates Hermiticity, positivity and the trace range; throws
  /// InvalidStateError on violation.
  static DensityMatrix from_operator(Operator m);
  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }
  /// No validation. For propagators that maintain the invariants themselves.
  static DensityMatrix unchecked(Operator m) { return DensityMatrix(std::move(m)); }

  const Operator& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double trace() const { return m_.trace().real(); }
  /// Copy scaled to unit trace. Throws DegenerateStateError on zero trace.
  DensityMatrix normalized() const;

 private:
  explicit DensityMatrix(Operator m) : m_(std::move(m)) {}
  Operator m_;
};

}  // namespace rpcoh
