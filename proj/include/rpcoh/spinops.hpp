#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace rpcoh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense complex square matrix. Hamiltonians are in units of the reaction
/// rate k (hbar = 1); everything else is dimensionless.
using Operator = Matrix;

enum class Axis { X, Y, Z };

/// Roster of nuclear spins in a radical pair. Spins are stored as 2I so that
/// half-integers stay exact. Tensor slots are ordered
/// (electron 1, electron 2, nucleus 1, ..., nucleus M).
class SpinSystem {
 public:
  SpinSystem() = default;

  /// Throws InvalidSpinError unless every entry is a positive half-integer.
  static SpinSystem from_spins(std::initializer_list<double> spins);
  static SpinSystem from_spins(const std::vector<double>& spins);

  /// Convenience for the common single spin-1/2 nucleus case.
  static SpinSystem single_proton() { return from_spins({0.5}); }

  std::size_t nuclei() const noexcept { return twice_spins_.size(); }
  int twice_spin(std::size_t m) const { return twice_spins_.at(m); }
  double spin(std::size_t m) const { return 0.5 * twice_spins_.at(m); }
  const std::vector<int>& twice_spins() const noexcept { return twice_spins_; }

  /// Nuclear Hilbert-space dimension, prod(2 I_m + 1).
  std::size_t nuclear_dim() const noexcept;
  /// Total dimension 4 * nuclear_dim().
  std::size_t dim() const noexcept { return 4 * nuclear_dim(); }

  bool operator==(const SpinSystem&) const = default;

 private:
  std::vector<int> twice_spins_;
};

struct SpinMatrices {
  Operator x;
  Operator y;
  Operator z;

  const Operator& operator[](Axis a) const;
};

/// Angular-momentum matrices for spin I, basis ordered m = I, I-1, ..., -I.
/// Throws InvalidSpinError if 2I is not a positive integer.
SpinMatrices spin_matrices(double spin);
SpinMatrices spin_matrices_twice(int twice_spin);

Operator kron(const Operator& a, const Operator& b);
Operator identity(std::size_t dim);

/// Electron spin component (which = 1 or 2) lifted to the full space of sys.
Operator embed_electron(int which, Axis axis, const SpinSystem& sys);
/// Component of nuclear spin m (zero-based) lifted to the full space of sys.
Operator embed_nucleus(std::size_t m, Axis axis, const SpinSystem& sys);

/// s1 . s2 on the full space.
Operator electron_dot(const SpinSystem& sys);

/// Q_S = (1/4 - s1.s2) (x) 1_nuc
Operator singlet_projector(const SpinSystem& sys);
/// Q_T = (3/4 + s1.s2) (x) 1_nuc
Operator triplet_projector(const SpinSystem& sys);

/// Both projectors for a space of dimension 4 * d_nuc. The S/T projectors
/// only depend on the nuclear dimension, not on how it factorizes.
struct StProjectors {
  Operator singlet;
  Operator triplet;
  Matrix singlet_basis;  // d x d_nuc orthonormal columns spanning Q_S
  Matrix triplet_basis;  // d x 3 d_nuc orthonormal columns spanning Q_T

  static StProjectors for_system(const SpinSystem& sys);
  static StProjectors for_dimension(std::size_t dim);
  std::size_t dim() const noexcept { return static_cast<std::size_t>(singlet.rows()); }
};

/// Blocks rho_xy = Q_x rho Q_y.
struct StBlocks {
  Operator ss, tt, st, ts;
};
StBlocks st_blocks(const Operator& rho, const StProjectors& proj);

double max_abs(const Operator& a);
/// 1e-10 * max|a_ij| with a floor so that zero matrices pass.
double hermitian_tolerance(const Operator& a);
bool is_hermitian(const Operator& a);
bool is_hermitian(const Operator& a, double tol);
bool is_projector(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns match values
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Throws ContractViolation if a is not Hermitian within hermitian_tolerance.
Eigensystem eigh(const Operator& a);
/// Eigenvalues only (ascending); same algorithm without accumulating vectors.
RealVector eigvalsh(const Operator& a);

/// Spectral (2-)norm of a Hermitian operator.
double spectral_norm_hermitian(const Operator& a);

}  // namespace rpcoh
