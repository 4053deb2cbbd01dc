#pragma once

#include "rpcoh/model.hpp"
#include "rpcoh/spinops.hpp"
#include "rpcoh/state.hpp"

#include <random>

namespace rpcoh {

/// Random fixtures for self-checks and property tests. All draws come from
/// the caller's generator, so a fixed seed gives a fixed sequence.
using Rng = std::mt19937_64;

/// Complex Gaussian vector normalized to one.
Vector random_unit_vector(std::size_t dim, Rng& rng);
/// Hermitian matrix with i.i.d. complex Gaussian entries, scaled by `scale`.
Operator random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0);
/// G G^dagger / Tr with G of size dim x rank (rank = 0 means full rank).
DensityMatrix random_density_matrix(std::size_t dim, Rng& rng, std::size_t rank = 0);
/// Random electronic amplitudes, each paired with its own random nuclear state.
PureState random_pure_state(const SpinSystem& sys, Rng& rng);
/// As above with |alpha_s|^2 pinned to singlet_weight.
PureState random_pure_state(const SpinSystem& sys, Rng& rng, double singlet_weight);
/// Complete nuclear Kraus set of `count` operators: blocks of a random
/// isometry from C^n to C^(count n).
std::vector<Operator> random_kraus_set(std::size_t dim, std::size_t count, Rng& rng);
/// Spin system with nuclear dimension d / 4, made of spin-1/2 nuclei.
SpinSystem spin_half_system(std::size_t dim);

}  // namespace rpcoh
