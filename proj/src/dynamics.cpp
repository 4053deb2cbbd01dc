#include "rpcoh/dynamics.hpp"

#include "rpcoh/coherence.hpp"
#include "rpcoh/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace rpcoh {

namespace {

// Pade [13/13] coefficients and the 1-norm bound below which no scaling is
// needed (Higham 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kPade13Theta = 5.371920351148152;

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

EvolutionParams EvolutionParams::defaults(const Operator& hamiltonian, double dephasing, Engine engine, double k) {
  EvolutionParams p;
  p.k = k;
  p.dephasing = dephasing;
  p.engine = engine;
  p.t_max = kDefaultHorizon / k;
  const double fastest = std::max({spectral_norm_hermitian(hamiltonian), std::abs(dephasing), k});
  const double dt = kDefaultStepScale / fastest;
  const double n = std::ceil(p.t_max / dt - 1e-9);
  p.dt = p.t_max / n;
  return p;
}

EvolutionParams EvolutionParams::for_observables(const Operator& hamiltonian, double dephasing, Engine engine,
                                                 double k, int stride) {
  if (stride < 1) throw ConfigError("observable stride must be >= 1");
  EvolutionParams p = defaults(hamiltonian, dephasing, engine, k);
  const double n = std::max(1.0, std::round(p.t_max / (p.dt * stride)));
  p.dt = p.t_max / n;
  return p;
}

std::size_t EvolutionParams::steps() const {
  return static_cast<std::size_t>(std::llround(std::ceil(t_max / dt - 1e-9)));
}

void EvolutionParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("reaction rate k must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (dt > t_max) throw ConfigError("dt must not exceed t_max");
  if (!(dephasing >= 0.0) || !std::isfinite(dephasing)) throw ConfigError("dephasing rate K_d must be >= 0");
  if (engine == Engine::Haberkorn && dephasing != 0.0) {
    throw ConfigError("the haberkorn engine has no S-T dephasing; set K_d = 0 or use the dephasing engine");
  }
  if (steps() > 50'000'000) throw ConfigError("t_max / dt is unreasonably large");
}

Vector vectorize(const Operator& m) { return m.reshaped(); }

Operator unvectorize(const Vector& v, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return v.reshaped(n, n);
}

Matrix liouvillian(const Operator& hamiltonian, double dephasing, const StProjectors& proj) {
  const Eigen::Index d = hamiltonian.rows();
  const Operator id = Operator::Identity(d, d);
  const Complex minus_i(0.0, -1.0);
  Matrix l = minus_i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  if (dephasing != 0.0) {
    l -= dephasing * (kron(proj.triplet.transpose(), proj.singlet) + kron(proj.singlet.transpose(), proj.triplet));
  }
  return l;
}

Matrix expm(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const double norm = one_norm(a);
  if (norm == 0.0) return id;

  int squarings = 0;
  if (norm > kPade13Theta) squarings = static_cast<int>(std::ceil(std::log2(norm / kPade13Theta)));
  const Matrix x = a / std::ldexp(1.0, squarings);

  const auto& b = kPade13;
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id;
  const Matrix u = x * u_inner;
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Matrix propagator_step(const Operator& hamiltonian, double dephasing, double dt) {
  if (!(dt >= 0.0)) throw ConfigError("propagator step must be >= 0");
  const auto proj = StProjectors::for_dimension(static_cast<std::size_t>(hamiltonian.rows()));
  return expm(liouvillian(hamiltonian, dephasing, proj) * dt);
}

Trajectory propagate(const Operator& hamiltonian, const DensityMatrix& rho0, const EvolutionParams& params) {
  params.validate();
  if (!is_hermitian(hamiltonian)) throw ContractViolation("propagate: Hamiltonian is not Hermitian");
  if (static_cast<std::size_t>(hamiltonian.rows()) != rho0.dim()) {
    throw ContractViolation("propagate: Hamiltonian and state dimensions differ");
  }

  const std::size_t dim = rho0.dim();
  const auto proj = StProjectors::for_dimension(dim);
  const std::size_t steps = params.steps();
  const double dt = params.t_max / static_cast<double>(steps);
  const Matrix step = expm(liouvillian(hamiltonian, params.effective_dephasing(), proj) * dt);

  Trajectory traj;
  traj.k = params.k;
  traj.times.reserve(steps + 1);
  traj.trace.reserve(steps + 1);
  traj.singlet_probability.reserve(steps + 1);
  if (params.track_coherence) traj.coherence.reserve(steps + 1);
  if (params.keep_states) traj.states.reserve(steps + 1);

  Vector r = vectorize(rho0.matrix());
  Vector next(r.size());
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = dt * static_cast<double>(i);
    const Operator big_r = unvectorize(r, dim);
    const double tr_r = big_r.trace().real();
    if (!(tr_r > 0.0)) throw NumericalFailure("propagate: trace of R vanished");
    const double decay = std::exp(-params.k * t);

    traj.times.push_back(t);
    traj.trace.push_back(decay * tr_r);
    traj.singlet_probability.push_back((big_r * proj.singlet).trace().real() / tr_r);
    if (params.track_coherence) {
      // C is scale invariant, so the normalized R stands in for rho_t.
      traj.coherence.push_back(st_coherence(DensityMatrix::unchecked(big_r / tr_r), proj).coherence);
    }
    if (params.keep_states) traj.states.push_back(DensityMatrix::unchecked(decay * big_r));

    if (i < steps) {
      next.noalias() = step * r;
      r.swap(next);
    }
  }
  return traj;
}

FictitiousValues fictitious_approximate(double rabi, double dephasing, double k, double t) {
  if (!(dephasing < 2.0 * std::abs(rabi))) {
    throw RegimeError("closed forms need K_d < 2|Omega| (underdamped S-T0 oscillation)");
  }
  const double envelope = std::exp(-0.5 * dephasing * t);
  const double c = std::cos(rabi * t);
  FictitiousValues v;
  v.singlet_probability = 0.5 * (1.0 + envelope * c);
  v.e1 = 0.5 * (1.0 - envelope);
  v.e2 = 0.5 * (1.0 + envelope);
  v.e1_hat = 0.5 * (1.0 - envelope * c);
  v.e2_hat = 0.5 * (1.0 + envelope * c);
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  v.coherence = -xlogx(v.e1_hat) - xlogx(v.e2_hat) + xlogx(v.e1) + xlogx(v.e2);
  v.trace = std::exp(-k * t);
  return v;
}

FictitiousValues fictitious_exact(double rabi, double dephasing, double k, double t) {
  using Mat4 = Eigen::Matrix4cd;
  using Mat2 = Eigen::Matrix2cd;
  // Basis (s, t0); <s|H|t0> = Omega / 2.
  Mat2 h;
  h << 0.0, 0.5 * rabi, 0.5 * rabi, 0.0;
  const Mat2 id2 = Mat2::Identity();
  Mat4 gen;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      gen.block<2, 2>(2 * a, 2 * b) = Complex(0.0, -1.0) * (id2(a, b) * h - h.transpose()(a, b) * id2);
  // vec index = row + 2 * col; (1) = rho_ts, (2) = rho_st.
  gen(1, 1) -= dephasing;
  gen(2, 2) -= dephasing;

  Mat4 x = gen * t;
  int squarings = 0;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  while (std::ldexp(norm, -squarings) > 0.25) ++squarings;
  x /= std::ldexp(1.0, squarings);
  Mat4 term = Mat4::Identity();
  Mat4 sum = Mat4::Identity();
  for (int n = 1; n <= 30; ++n) {
    term = term * x / static_cast<double>(n);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;

  const Eigen::Vector4cd rho = sum.col(0);  // propagate |s><s|
  const double p_s = rho(0).real();
  const double p_t = rho(3).real();
  const double coh2 = std::norm(rho(2));
  const double split = std::sqrt((p_s - p_t) * (p_s - p_t) + 4.0 * coh2);
  const double total = p_s + p_t;

  FictitiousValues v;
  v.singlet_probability = p_s / total;
  v.e1 = 0.5 * (total - split) / total;
  v.e2 = 0.5 * (total + split) / total;
  v.e1_hat = p_t / total;
  v.e2_hat = p_s / total;
  v.coherence = binary_entropy(v.singlet_probability) - binary_entropy(std::clamp(v.e2, 0.0, 1.0));
  v.trace = std::exp(-k * t);
  return v;
}

FictitiousOracle oracle_fictitious(double rabi, double dephasing, double k, double t) {
  return {fictitious_approximate(rabi, dephasing, k, t), fictitious_exact(rabi, dephasing, k, t)};
}

}  // namespace rpcoh
