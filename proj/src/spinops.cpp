#include "rpcoh/spinops.hpp"

#include "rpcoh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rpcoh {

namespace {

constexpr double kJacobiRelativeThreshold = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

int twice_spin_checked(double spin) {
  const double twice = 2.0 * spin;
  const double rounded = std::round(twice);
  if (!std::isfinite(spin) || rounded < 1.0 || std::abs(twice - rounded) > 1e-12) {
    throw InvalidSpinError("spin quantum number must be a positive half-integer, got " +
                           std::to_string(spin));
  }
  return static_cast<int>(rounded);
}

// Dimension of the slots before and after slot `slot` in (e1, e2, nuc...).
std::pair<std::size_t, std::size_t> slot_split(std::size_t slot, const SpinSystem& sys) {
  std::vector<std::size_t> dims{2, 2};
  for (int t : sys.twice_spins()) dims.push_back(static_cast<std::size_t>(t) + 1);
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < slot; ++i) left *= dims[i];
  for (std::size_t i = slot + 1; i < dims.size(); ++i) right *= dims[i];
  return {left, right};
}

Operator embed_slot(std::size_t slot, const Operator& op, const SpinSystem& sys) {
  const auto [left, right] = slot_split(slot, sys);
  return kron(identity(left), kron(op, identity(right)));
}

// Cyclic Jacobi sweeps on a working copy. Returns the diagonalized matrix; if
// `vectors` is non-null the accumulated rotations are written into it.
Matrix jacobi_diagonalize(Matrix a, Matrix* vectors) {
  const Eigen::Index n = a.rows();
  if (vectors) vectors->setIdentity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double scale = a.norm();
  if (scale == 0.0) return a;
  const double threshold = kJacobiRelativeThreshold * scale;
  // Entries this small cannot matter for convergence; rotating them only
  // breeds subnormals.
  const double negligible = 1e-3 * threshold / static_cast<double>(n);

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) < threshold) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double r = std::abs(b);
        if (r <= negligible) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const Complex phase = std::conj(b) / r;  // e^{-i alpha}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // tan(theta) as the smaller root of t^2 + 2 tau t - 1 = 0, |theta| <= pi/4
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]]; the phase is folded
        // into column/row q first so the rotation itself stays real.
        for (Eigen::Index i = 0; i < n; ++i) a(i, q) *= phase;
        for (Eigen::Index j = 0; j < n; ++j) a(q, j) *= std::conj(phase);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (vectors) {
          Matrix& v = *vectors;
          for (Eigen::Index i = 0; i < n; ++i) {
            const Complex vip = v(i, p), viq = v(i, q) * phase;
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }
  return a;
}

void require_hermitian(const Operator& a) {
  if (a.rows() != a.cols()) throw ContractViolation("eigh: matrix is not square");
  if (!is_hermitian(a)) throw ContractViolation("eigh: matrix is not Hermitian");
}

}  // namespace

SpinSystem SpinSystem::from_spins(std::initializer_list<double> spins) {
  return from_spins(std::vector<double>(spins));
}

SpinSystem SpinSystem::from_spins(const std::vector<double>& spins) {
  SpinSystem sys;
  sys.twice_spins_.reserve(spins.size());
  for (double s : spins) sys.twice_spins_.push_back(twice_spin_checked(s));
  return sys;
}

std::size_t SpinSystem::nuclear_dim() const noexcept {
  return std::accumulate(twice_spins_.begin(), twice_spins_.end(), std::size_t{1},
                         [](std::size_t acc, int t) { return acc * (static_cast<std::size_t>(t) + 1); });
}

const Operator& SpinMatrices::operator[](Axis a) const {
  switch (a) {
    case Axis::X: return x;
    case Axis::Y: return y;
    case Axis::Z: break;
  }
  return z;
}

SpinMatrices spin_matrices(double spin) { return spin_matrices_twice(twice_spin_checked(spin)); }

SpinMatrices spin_matrices_twice(int twice_spin) {
  if (twice_spin < 1) throw InvalidSpinError("spin quantum number must be a positive half-integer");
  const int n = twice_spin + 1;
  const double spin = 0.5 * twice_spin;
  Operator raise = Operator::Zero(n, n);
  Operator sz = Operator::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = spin - i;
    sz(i, i) = m;
    if (i > 0) raise(i - 1, i) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
  }
  const Operator lower = raise.adjoint();
  const Complex half_i(0.0, 0.5);
  return SpinMatrices{0.5 * (raise + lower), -half_i * (raise - lower), sz};
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator::Identity(n, n);
}

Operator embed_electron(int which, Axis axis, const SpinSystem& sys) {
  if (which != 1 && which != 2) throw ContractViolation("electron slot must be 1 or 2");
  return embed_slot(static_cast<std::size_t>(which - 1), spin_matrices_twice(1)[axis], sys);
}

Operator embed_nucleus(std::size_t m, Axis axis, const SpinSystem& sys) {
  if (m >= sys.nuclei()) throw ContractViolation("nucleus index out of range");
  return embed_slot(m + 2, spin_matrices_twice(sys.twice_spin(m))[axis], sys);
}

Operator electron_dot(const SpinSystem& sys) {
  Operator out = Operator::Zero(sys.dim(), sys.dim());
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) out += embed_electron(1, a, sys) * embed_electron(2, a, sys);
  return out;
}

Operator singlet_projector(const SpinSystem& sys) {
  return 0.25 * identity(sys.dim()) - electron_dot(sys);
}

Operator triplet_projector(const SpinSystem& sys) {
  return 0.75 * identity(sys.dim()) + electron_dot(sys);
}

StProjectors StProjectors::for_system(const SpinSystem& sys) { return for_dimension(sys.dim()); }

StProjectors StProjectors::for_dimension(std::size_t dim) {
  if (dim < 4 || dim % 4 != 0) throw ContractViolation("radical-pair dimension must be a multiple of 4");
  // Electron-pair projectors tensored with a nuclear identity of size dim/4.
  const SpinSystem bare;
  const Operator nuc = identity(dim / 4);
  StProjectors out;
  out.singlet = kron(singlet_projector(bare), nuc);
  out.triplet = kron(triplet_projector(bare), nuc);

  // Product basis (uu, ud, du, dd): |s>, then |t+1>, |t0>, |t-1>.
  const double r = 1.0 / std::sqrt(2.0);
  Matrix pair = Matrix::Zero(4, 4);
  pair(1, 0) = r;
  pair(2, 0) = -r;
  pair(0, 1) = 1.0;
  pair(1, 2) = r;
  pair(2, 2) = r;
  pair(3, 3) = 1.0;
  out.singlet_basis = kron(pair.leftCols(1), nuc);
  out.triplet_basis = kron(pair.rightCols(3), nuc);
  return out;
}

StBlocks st_blocks(const Operator& rho, const StProjectors& proj) {
  const Operator& qs = proj.singlet;
  const Operator& qt = proj.triplet;
  return {qs * rho * qs, qt * rho * qt, qs * rho * qt, qt * rho * qs};
}

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermitian_tolerance(const Operator& a) { return 1e-10 * std::max(max_abs(a), 1e-300); }

bool is_hermitian(const Operator& a) { return is_hermitian(a, hermitian_tolerance(a)); }

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

bool is_projector(const Operator& a) {
  if (!is_hermitian(a)) return false;
  return max_abs(a * a - a) <= hermitian_tolerance(a);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Eigensystem eigh(const Operator& a) {
  require_hermitian(a);
  Matrix vectors;
  const Matrix diag = jacobi_diagonalize(a, &vectors);
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return diag(i, i).real() < diag(j, j).real(); });
  Eigensystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = diag(order[k], order[k]).real();
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

RealVector eigvalsh(const Operator& a) {
  require_hermitian(a);
  const Matrix diag = jacobi_diagonalize(a, nullptr);
  RealVector values = diag.diagonal().real();
  std::sort(values.data(), values.data() + values.size());
  return values;
}

double spectral_norm_hermitian(const Operator& a) {
  if (a.size() == 0) return 0.0;
  return eigvalsh(a).cwiseAbs().maxCoeff();
}

}  // namespace rpcoh
