#pragma once

#include "rpcoh/spinops.hpp"
#include "rpcoh/state.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace rpcoh {

/// 3x3 hyperfine coupling, angular frequency in units of k.
using HyperfineTensor = Eigen::Matrix3d;

/// Declarative radical-pair Hamiltonian. Two mutually exclusive modes:
///  - hyperfine mode: H = sum_m s1.A_m.I_m + w cos(phi)(s1x+s2x)
///                        + w sin(phi)(s1y+s2y) - J s1.s2
///  - Larmor mode (no nuclei): H = w1 s1z + w2 s2z
/// The field lies in the x-y plane. Nuclear Zeeman terms are not modelled.
struct HamiltonianSpec {
  SpinSystem system;
  std::map<std::size_t, HyperfineTensor> hyperfine;  // zero-based nucleus -> A (couples electron 1)
  double omega = 0.0;
  double phi = 0.0;
  double exchange = 0.0;  // J
  std::optional<std::pair<double, double>> larmor;

  bool larmor_mode() const noexcept { return larmor.has_value(); }
  /// Throws ConfigError if indices, modes or values are inconsistent.
  void validate() const;

  static HamiltonianSpec fictitious(double omega1, double omega2);
  /// Single spin-1/2 nucleus with diagonal hyperfine tensor, as used by the
  /// compass study.
  static HamiltonianSpec compass(double a_xx, double a_yy, double a_zz, double omega, double phi,
                                 double exchange);
};

/// H(phi) = fixed + omega cos(phi) field_x + omega sin(phi) field_y.
/// Lets angular sweeps avoid rebuilding the hyperfine part per angle.
struct HamiltonianParts {
  Operator fixed;
  Operator field_x;  // s1x + s2x
  Operator field_y;  // s1y + s2y
  double omega = 0.0;

  static HamiltonianParts from_spec(const HamiltonianSpec& spec);
  Operator at(double phi) const;
};

/// Throws ModeError for Larmor-mode specs.
Operator build_hamiltonian(const HamiltonianSpec& spec);
Operator build_fictitious_pair(double omega1, double omega2);
/// Dispatches on the spec's mode.
Operator hamiltonian_for(const HamiltonianSpec& spec);

/// rho_0 = Q_S / Tr Q_S: electronic singlet, nuclei fully mixed.
DensityMatrix initial_state(const SpinSystem& sys);

enum class PairState { Singlet, TripletPlus, TripletZero, TripletMinus };

/// Two-electron basis vector in the product basis (uu, ud, du, dd).
Vector pair_state(PairState s);
/// Nuclear product basis vector; index runs over the nuclear space with
/// m = I first (so for one spin-1/2, 0 = up, 1 = down).
Vector nuclear_basis_state(const SpinSystem& sys, std::size_t index);

struct PureComponent {
  PairState electronic;
  Complex amplitude;
  Vector nuclear;  // dimension d_nuc; {1} when there are no nuclei
};

/// sum_c amplitude_c |electronic_c> (x) |nuclear_c>. Throws InvalidStateError
/// if the result is not normalized within 1e-12.
PureState make_pure_state(const SpinSystem& sys, const std::vector<PureComponent>& components);

}  // namespace rpcoh
