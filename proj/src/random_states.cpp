#include "rpcoh/random_states.hpp"

#include "rpcoh/errors.hpp"

#include <cmath>

namespace rpcoh {

namespace {

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gaussian(rng);
  return g;
}

}  // namespace

Vector random_unit_vector(std::size_t dim, Rng& rng) {
  Vector v = gaussian_matrix(dim, 1, rng).col(0);
  return v / v.norm();
}

Operator random_hermitian(std::size_t dim, Rng& rng, double scale) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  return (0.5 * scale) * (g + g.adjoint());
}

DensityMatrix random_density_matrix(std::size_t dim, Rng& rng, std::size_t rank) {
  if (rank == 0 || rank > dim) rank = dim;
  const Matrix g = gaussian_matrix(dim, rank, rng);
  Operator rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix::unchecked(std::move(rho));
}

PureState random_pure_state(const SpinSystem& sys, Rng& rng) {
  Vector weights(4);
  for (Eigen::Index i = 0; i < 4; ++i) weights(i) = gaussian(rng);
  weights /= weights.norm();
  std::vector<PureComponent> parts;
  constexpr PairState order[] = {PairState::Singlet, PairState::TripletPlus, PairState::TripletZero,
                                 PairState::TripletMinus};
  for (int i = 0; i < 4; ++i) parts.push_back({order[i], weights(i), random_unit_vector(sys.nuclear_dim(), rng)});
  return make_pure_state(sys, parts);
}

PureState random_pure_state(const SpinSystem& sys, Rng& rng, double singlet_weight) {
  if (!(singlet_weight >= 0.0 && singlet_weight <= 1.0)) throw ContractViolation("singlet weight must lie in [0, 1]");
  Vector triplet(3);
  for (Eigen::Index i = 0; i < 3; ++i) triplet(i) = gaussian(rng);
  triplet *= std::sqrt(1.0 - singlet_weight) / triplet.norm();
  const Complex alpha = std::polar(std::sqrt(singlet_weight), std::arg(gaussian(rng)));
  std::vector<PureComponent> parts{{PairState::Singlet, alpha, random_unit_vector(sys.nuclear_dim(), rng)}};
  constexpr PairState order[] = {PairState::TripletPlus, PairState::TripletZero, PairState::TripletMinus};
  for (int i = 0; i < 3; ++i) parts.push_back({order[i], triplet(i), random_unit_vector(sys.nuclear_dim(), rng)});
  return make_pure_state(sys, parts);
}

std::vector<Operator> random_kraus_set(std::size_t dim, std::size_t count, Rng& rng) {
  if (count == 0) throw ContractViolation("Kraus set needs at least one operator");
  // Orthonormal columns of a (count*dim) x dim Gaussian matrix.
  const Matrix g = gaussian_matrix(count * dim, dim, rng);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const auto n = static_cast<Eigen::Index>(dim);
  const Matrix isometry = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(count) * n, n);
  std::vector<Operator> out;
  for (std::size_t c = 0; c < count; ++c) out.push_back(isometry.middleRows(static_cast<Eigen::Index>(c) * n, n));
  return out;
}

SpinSystem spin_half_system(std::size_t dim) {
  if (dim < 4 || dim % 4 != 0) throw ContractViolation("dimension must be 4 * 2^M");
  std::size_t nuc = dim / 4;
  std::vector<double> spins;
  while (nuc > 1) {
    if (nuc % 2 != 0) throw ContractViolation("dimension must be 4 * 2^M");
    spins.push_back(0.5);
    nuc /= 2;
  }
  return SpinSystem::from_spins(spins);
}

}  // namespace rpcoh
