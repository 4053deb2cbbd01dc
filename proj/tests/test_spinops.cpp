#include "rpcoh/errors.hpp"
#include "rpcoh/model.hpp"
#include "rpcoh/random_states.hpp"
#include "rpcoh/spinops.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>

using namespace rpcoh;

namespace {

const Complex kI(0.0, 1.0);

Operator diag(std::initializer_list<double> values) {
  Operator m = Operator::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

std::vector<SpinSystem> small_systems() {
  return {SpinSystem{},
          SpinSystem::from_spins({0.5}),
          SpinSystem::from_spins({1.0}),
          SpinSystem::from_spins({1.5}),
          SpinSystem::from_spins({0.5, 0.5}),
          SpinSystem::from_spins({0.5, 1.0}),
          SpinSystem::from_spins({0.5, 0.5, 0.5})};
}

}  // namespace

TEST_CASE("spin-1/2 matrices are half the Pauli matrices") {
  const SpinMatrices s = spin_matrices(0.5);
  CHECK(max_abs(s.z - diag({0.5, -0.5})) == 0.0);
  CHECK(s.x(0, 1) == Complex(0.5, 0.0));
  CHECK(s.x(1, 0) == Complex(0.5, 0.0));
  CHECK(s.x(0, 0) == Complex(0.0, 0.0));
  CHECK(s.y(0, 1) == Complex(0.0, -0.5));
}

TEST_CASE("spin-1 matrices from the ladder construction") {
  const SpinMatrices s = spin_matrices(1.0);
  CHECK(max_abs(s.z - diag({1.0, 0.0, -1.0})) == 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.x(0, 1) - r) < 1e-15);
  CHECK(std::abs(s.x(1, 2) - r) < 1e-15);
  CHECK(std::abs(s.x(1, 0) - r) < 1e-15);
  CHECK(std::abs(s.x(2, 1) - r) < 1e-15);
  CHECK(std::abs(s.x(0, 2)) == 0.0);
}

TEST_CASE("commutation and Casimir identities") {
  for (double spin : {0.5, 1.0, 1.5, 2.5}) {
    CAPTURE(spin);
    const SpinMatrices s = spin_matrices(spin);
    CHECK(max_abs(commutator(s.x, s.y) - kI * s.z) < 1e-13);
    CHECK(max_abs(commutator(s.y, s.z) - kI * s.x) < 1e-13);
    CHECK(max_abs(commutator(s.z, s.x) - kI * s.y) < 1e-13);
    const Operator casimir = s.x * s.x + s.y * s.y + s.z * s.z;
    CHECK(max_abs(casimir - spin * (spin + 1.0) * identity(s.z.rows())) < 1e-13);
  }
}

TEST_CASE("spin quantum numbers must be positive half-integers") {
  CHECK_THROWS_AS(spin_matrices(0.3), InvalidSpinError);
  CHECK_THROWS_AS(spin_matrices(0.0), InvalidSpinError);
  CHECK_THROWS_AS(spin_matrices(-0.5), InvalidSpinError);
  CHECK_THROWS_AS(SpinSystem::from_spins({0.5, 0.75}), InvalidSpinError);
  CHECK_THROWS_AS(spin_matrices(std::nan("")), InvalidSpinError);
}

TEST_CASE("spin system dimensions") {
  CHECK(SpinSystem{}.dim() == 4);
  CHECK(SpinSystem::single_proton().dim() == 8);
  CHECK(SpinSystem::from_spins({0.5, 1.0}).nuclear_dim() == 6);
  CHECK(SpinSystem::from_spins({0.5, 1.0}).dim() == 24);
}

TEST_CASE("kron examples") {
  CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);
  CHECK(max_abs(kron(diag({1, -1}), identity(2)) - diag({1, 1, -1, -1})) == 0.0);
  const SpinMatrices s = spin_matrices(0.5);
  Vector up_up = Vector::Zero(4);
  up_up(0) = 1.0;
  Vector expected = Vector::Zero(4);
  expected(3) = 0.25;
  CHECK((kron(s.x, s.x) * up_up - expected).norm() < 1e-15);
  CHECK(kron(identity(3), identity(5)).rows() == 15);
}

TEST_CASE("electron embeddings") {
  const SpinSystem bare;
  const SpinMatrices s = spin_matrices(0.5);
  CHECK(max_abs(embed_electron(1, Axis::Z, bare) - kron(s.z, identity(2))) == 0.0);
  CHECK(max_abs(embed_electron(2, Axis::Z, bare) - kron(identity(2), s.z)) == 0.0);
  for (const SpinSystem& sys : small_systems()) {
    CHECK(max_abs(commutator(embed_electron(1, Axis::X, sys), embed_electron(2, Axis::Y, sys))) == 0.0);
    const Operator z = embed_electron(1, Axis::Z, sys);
    CHECK(std::abs((z * z).trace().real() - sys.dim() / 4.0) < 1e-12);
  }
  CHECK_THROWS_AS(embed_electron(3, Axis::X, bare), ContractViolation);
}

TEST_CASE("nuclear embeddings follow the slot order") {
  const SpinSystem sys = SpinSystem::from_spins({0.5, 1.0});
  const SpinMatrices s1 = spin_matrices(1.0);
  const Operator expected = kron(identity(4), kron(identity(2), s1.z));
  CHECK(max_abs(embed_nucleus(1, Axis::Z, sys) - expected) == 0.0);
  CHECK(max_abs(commutator(embed_nucleus(0, Axis::X, sys), embed_nucleus(1, Axis::Y, sys))) == 0.0);
  CHECK(max_abs(commutator(embed_nucleus(0, Axis::X, sys), embed_electron(1, Axis::Y, sys))) == 0.0);
  CHECK_THROWS_AS(embed_nucleus(2, Axis::X, sys), ContractViolation);
}

TEST_CASE("singlet and triplet projector traces") {
  CHECK(std::abs(singlet_projector(SpinSystem{}).trace().real() - 1.0) < 1e-15);
  CHECK(std::abs(triplet_projector(SpinSystem{}).trace().real() - 3.0) < 1e-15);
  const SpinSystem one = SpinSystem::single_proton();
  CHECK(std::abs(singlet_projector(one).trace().real() - 2.0) < 1e-15);
  CHECK(std::abs(triplet_projector(one).trace().real() - 6.0) < 1e-15);
}

TEST_CASE("singlet projector keeps |s> and removes |t0>") {
  const Operator qs = singlet_projector(SpinSystem{});
  const Vector s = pair_state(PairState::Singlet);
  const Vector t0 = pair_state(PairState::TripletZero);
  CHECK((qs * s - s).norm() < 1e-15);
  CHECK((qs * t0).norm() < 1e-15);
}

TEST_CASE("projector algebra on every small system") {
  for (const SpinSystem& sys : small_systems()) {
    CAPTURE(sys.dim());
    const Operator qs = singlet_projector(sys);
    const Operator qt = triplet_projector(sys);
    const Operator id = identity(sys.dim());
    CHECK(max_abs(qs * qs - qs) < 1e-13);
    CHECK(max_abs(qt * qt - qt) < 1e-13);
    CHECK(max_abs(qs * qt) < 1e-13);
    CHECK(max_abs(qt * qs) < 1e-13);
    CHECK(max_abs(qs + qt - id) < 1e-13);
    CHECK(is_projector(qs));
    CHECK(is_projector(qt));
    const StProjectors proj = StProjectors::for_system(sys);
    CHECK(max_abs(proj.singlet - qs) < 1e-13);
    CHECK(max_abs(proj.singlet_basis * proj.singlet_basis.adjoint() - qs) < 1e-13);
    CHECK(max_abs(proj.triplet_basis * proj.triplet_basis.adjoint() - qt) < 1e-13);
    CHECK(max_abs(proj.triplet_basis.adjoint() * proj.triplet_basis - identity(3 * sys.nuclear_dim())) < 1e-13);
  }
}

TEST_CASE("block decomposition reassembles the state") {
  Rng rng(11);
  for (std::size_t d : {4u, 8u, 16u, 32u}) {
    const StProjectors proj = StProjectors::for_dimension(d);
    for (int i = 0; i < 20; ++i) {
      const Operator rho = random_density_matrix(d, rng).matrix();
      const StBlocks b = st_blocks(rho, proj);
      CHECK(max_abs(b.ss + b.tt + b.st + b.ts - rho) < 1e-13);
    }
  }
}

TEST_CASE("eigh examples") {
  const Eigensystem es = eigh(diag({3, 1, 2}));
  CHECK(es.values(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(es.values(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(es.values(2) == doctest::Approx(3.0).epsilon(1e-15));

  const RealVector p = eigvalsh(singlet_projector(SpinSystem{}));
  CHECK(std::abs(p(0)) < 1e-15);
  CHECK(std::abs(p(1)) < 1e-15);
  CHECK(std::abs(p(2)) < 1e-15);
  CHECK(std::abs(p(3) - 1.0) < 1e-15);
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  Rng rng(5);
  for (std::size_t d : {2u, 8u, 16u, 32u}) {
    for (int i = 0; i < 10; ++i) {
      const Operator a = random_hermitian(d, rng, 3.0);
      const Eigensystem es = eigh(a);
      const Operator back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
      CHECK(max_abs(back - a) <= 1e-11 * static_cast<double>(d) * max_abs(a));
      CHECK(max_abs(es.vectors.adjoint() * es.vectors - identity(d)) < 1e-12);
      CHECK(max_abs(a * es.vectors - es.vectors * es.values.cast<Complex>().asDiagonal()) <
            1e-11 * static_cast<double>(d) * max_abs(a));
      for (Eigen::Index k = 1; k < es.values.size(); ++k) CHECK(es.values(k - 1) <= es.values(k));
      CHECK((eigvalsh(a) - es.values).cwiseAbs().maxCoeff() < 1e-12 * max_abs(a) * static_cast<double>(d));
    }
  }
}

TEST_CASE("eigenvalues agree with a reference Hermitian solver") {
  Rng rng(11);
  for (std::size_t d : {4u, 8u, 16u}) {
    for (int i = 0; i < 20; ++i) {
      const Operator a = random_hermitian(d, rng, 2.0);
      const Eigen::SelfAdjointEigenSolver<Operator> reference(a, Eigen::EigenvaluesOnly);
      CHECK((eigvalsh(a) - reference.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * static_cast<double>(d));
    }
  }
}

TEST_CASE("eigh handles degenerate and zero matrices") {
  const RealVector z = eigvalsh(Operator::Zero(4, 4));
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);
  const Eigensystem es = eigh(2.5 * identity(6));
  CHECK((es.values.array() - 2.5).abs().maxCoeff() < 1e-15);
}

TEST_CASE("projector spectra are exactly zero or one") {
  for (const SpinSystem& sys : small_systems()) {
    for (const Operator& q : {singlet_projector(sys), triplet_projector(sys)}) {
      for (double v : eigvalsh(q)) CHECK(std::min(std::abs(v), std::abs(v - 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Operator a = identity(3);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(a), ContractViolation);
  CHECK_THROWS_AS(eigvalsh(Operator::Zero(2, 3)), ContractViolation);
  CHECK_FALSE(is_hermitian(a));
}

TEST_CASE("spectral norm of a Hermitian operator") {
  CHECK(spectral_norm_hermitian(diag({-4, 1, 2})) == doctest::Approx(4.0));
  CHECK(spectral_norm_hermitian(Operator::Zero(0, 0)) == 0.0);
}
