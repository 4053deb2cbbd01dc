#include "rpcoh/model.hpp"

#include "rpcoh/errors.hpp"

#include <cmath>
#include <string>

namespace rpcoh {

void HamiltonianSpec::validate() const {
  if (!std::isfinite(omega) || omega < 0.0) throw ConfigError("field magnitude omega must be finite and >= 0");
  if (!std::isfinite(phi)) throw ConfigError("field angle phi must be finite");
  if (!std::isfinite(exchange)) throw ConfigError("exchange J must be finite");
  for (const auto& [m, a] : hyperfine) {
    if (m >= system.nuclei()) {
      throw ConfigError("hyperfine tensor given for nucleus " + std::to_string(m + 1) + " but the system has " +
                        std::to_string(system.nuclei()) + " nuclei");
    }
    if (!a.allFinite()) throw ConfigError("hyperfine tensor entries must be finite");
  }
  if (larmor) {
    if (system.nuclei() != 0 || !hyperfine.empty()) {
      throw ConfigError("Larmor mode describes a nucleus-free pair; remove nuclei and hyperfine terms");
    }
    if (!std::isfinite(larmor->first) || !std::isfinite(larmor->second)) {
      throw ConfigError("Larmor frequencies must be finite");
    }
  }
}

HamiltonianSpec HamiltonianSpec::fictitious(double omega1, double omega2) {
  HamiltonianSpec spec;
  spec.larmor = std::make_pair(omega1, omega2);
  return spec;
}

HamiltonianSpec HamiltonianSpec::compass(double a_xx, double a_yy, double a_zz, double omega, double phi,
                                         double exchange) {
  HamiltonianSpec spec;
  spec.system = SpinSystem::single_proton();
  spec.hyperfine[0] = Eigen::Vector3d(a_xx, a_yy, a_zz).asDiagonal();
  spec.omega = omega;
  spec.phi = phi;
  spec.exchange = exchange;
  return spec;
}

HamiltonianParts HamiltonianParts::from_spec(const HamiltonianSpec& spec) {
  spec.validate();
  if (spec.larmor_mode()) throw ModeError("Larmor-mode spec has no hyperfine/field decomposition");
  const SpinSystem& sys = spec.system;
  const auto d = static_cast<Eigen::Index>(sys.dim());
  constexpr Axis axes[] = {Axis::X, Axis::Y, Axis::Z};

  HamiltonianParts parts;
  parts.fixed = Operator::Zero(d, d);
  for (const auto& [m, a] : spec.hyperfine) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (a(i, j) == 0.0) continue;
        parts.fixed += a(i, j) * (embed_electron(1, axes[i], sys) * embed_nucleus(m, axes[j], sys));
      }
    }
  }
  if (spec.exchange != 0.0) parts.fixed -= spec.exchange * electron_dot(sys);
  parts.field_x = embed_electron(1, Axis::X, sys) + embed_electron(2, Axis::X, sys);
  parts.field_y = embed_electron(1, Axis::Y, sys) + embed_electron(2, Axis::Y, sys);
  parts.omega = spec.omega;
  return parts;
}

Operator HamiltonianParts::at(double phi) const {
  return fixed + (omega * std::cos(phi)) * field_x + (omega * std::sin(phi)) * field_y;
}

Operator build_hamiltonian(const HamiltonianSpec& spec) {
  if (spec.larmor_mode()) throw ModeError("build_hamiltonian: spec is in Larmor (fictitious pair) mode");
  return HamiltonianParts::from_spec(spec).at(spec.phi);
}

Operator build_fictitious_pair(double omega1, double omega2) {
  const SpinSystem bare;
  return omega1 * embed_electron(1, Axis::Z, bare) + omega2 * embed_electron(2, Axis::Z, bare);
}

Operator hamiltonian_for(const HamiltonianSpec& spec) {
  spec.validate();
  if (spec.larmor_mode()) return build_fictitious_pair(spec.larmor->first, spec.larmor->second);
  return build_hamiltonian(spec);
}

DensityMatrix initial_state(const SpinSystem& sys) {
  const Operator qs = singlet_projector(sys);
  return DensityMatrix::unchecked(qs / qs.trace().real());
}

Vector pair_state(PairState s) {
  const double r = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (s) {
    case PairState::Singlet: v(1) = r; v(2) = -r; break;
    case PairState::TripletPlus: v(0) = 1.0; break;
    case PairState::TripletZero: v(1) = r; v(2) = r; break;
    case PairState::TripletMinus: v(3) = 1.0; break;
  }
  return v;
}

Vector nuclear_basis_state(const SpinSystem& sys, std::size_t index) {
  const std::size_t n = sys.nuclear_dim();
  if (index >= n) throw ContractViolation("nuclear basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

PureState make_pure_state(const SpinSystem& sys, const std::vector<PureComponent>& components) {
  const auto d_nuc = static_cast<Eigen::Index>(sys.nuclear_dim());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(sys.dim()));
  for (const auto& c : components) {
    if (c.nuclear.size() != d_nuc) throw InvalidStateError("nuclear component has the wrong dimension");
    const Vector e = pair_state(c.electronic);
    for (Eigen::Index i = 0; i < 4; ++i) psi.segment(i * d_nuc, d_nuc) += c.amplitude * e(i) * c.nuclear;
  }
  return PureState::from_amplitudes(std::move(psi));
}

}  // namespace rpcoh
