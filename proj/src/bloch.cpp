#include "bellcert/bloch.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>
#include <stdexcept>

namespace bellcert {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::Matrix2d RealQubitOperator::matrix() const {
  Eigen::Matrix2d m;
  m << 0.5 * (t + r.x3), 0.5 * r.x1, 0.5 * r.x1, 0.5 * (t - r.x3);
  return m;
}

RealQubitOperator RealQubitOperator::from_matrix(const Eigen::Matrix2d& m,
                                                 double sym_tol) {
  if (std::abs(m(0, 1) - m(1, 0)) > sym_tol) {
    throw std::invalid_argument("RealQubitOperator::from_matrix: not symmetric");
  }
  RealQubitOperator op;
  op.t = m(0, 0) + m(1, 1);
  op.r.x1 = m(0, 1) + m(1, 0);
  op.r.x3 = m(0, 0) - m(1, 1);
  return op;
}

double QubitPovm::validity_residual() const {
  double sum_t = 0.0;
  Vec2 sum_r{0.0, 0.0};
  double worst = 0.0;
  for (const auto& e : elements) {
    sum_t += e.t;
    sum_r = sum_r + e.r;
    worst = std::max(worst, -e.psd_margin());
  }
  worst = std::max(worst, std::abs(sum_t - 2.0));
  worst = std::max(worst, sum_r.norm());
  return worst;
}

QubitPovm QubitPovm::embedded(int target_arity) const {
  QubitPovm out = *this;
  while (out.arity() < target_arity) out.elements.push_back(RealQubitOperator::zero());
  return out;
}

QubitPovm QubitPovm::permuted(const std::vector<int>& perm) const {
  QubitPovm out;
  out.elements.reserve(perm.size());
  for (int idx : perm) out.elements.push_back(elements[idx]);
  return out;
}

double PseudoState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

double TwoQubitState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

bool TwoQubitState::is_valid(double tol) const {
  if (std::abs(trace() - 1.0) > tol) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  return min_eigenvalue() >= -tol;
}

Eigen::Matrix4d kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

std::array<QubitPovm, 3> trine_povm(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("trine_povm: eta must lie in [0,1]");
  }
  std::array<QubitPovm, 3> out;
  for (int x = 0; x < 3; ++x) {
    Vec2 axis = Vec2::unit(2.0 * x * kPi / 3.0);
    RealQubitOperator plus{1.0, axis * eta};
    RealQubitOperator minus{1.0, axis * (-eta)};
    out[x].elements = {plus, minus};
  }
  return out;
}

std::array<QubitPovm, 2> pauli_pair(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("pauli_pair: v must lie in [0,1]");
  }
  QubitPovm mx, mz;
  mx.elements = {RealQubitOperator{1.0, {v, 0.0}}, RealQubitOperator{1.0, {-v, 0.0}}};
  mz.elements = {RealQubitOperator{1.0, {0.0, v}}, RealQubitOperator{1.0, {0.0, -v}}};
  return {mx, mz};
}

Eigen::Matrix2d planar_rotation(double phi) {
  Eigen::Matrix2d o;
  o << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return o;
}

Eigen::Vector4d schmidt_vector(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  // (O(phi) (x) I)(c|00> + s|11>) in basis order 00,01,10,11
  return {c * cp, -s * sp, c * sp, s * cp};
}

TwoQubitState schmidt_state(double theta, double phi) {
  Eigen::Vector4d psi = schmidt_vector(theta, phi);
  TwoQubitState rho;
  rho.m = psi * psi.transpose();
  return rho;
}

std::vector<QubitPovm> bob_finite_set() {
  std::vector<QubitPovm> out;
  out.reserve(13);
  for (int y = 0; y < 9; ++y) {
    Vec2 axis = Vec2::unit(y * kPi / 9.0);
    QubitPovm m;
    m.elements = {RealQubitOperator{1.0, axis}, RealQubitOperator{1.0, -axis}};
    out.push_back(m.embedded(3));
  }
  for (int y = 9; y <= 12; ++y) {
    QubitPovm m;
    for (int b = 0; b < 3; ++b) {
      Vec2 axis = Vec2::unit(y * kPi / 2.0 + b * 2.0 * kPi / 3.0);
      m.elements.push_back(RealQubitOperator{2.0 / 3.0, axis * (2.0 / 3.0)});
    }
    out.push_back(m);
  }
  return out;
}

RealQubitOperator zeta(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("zeta: alpha must lie in [0,1]");
  }
  // alpha |0><0| + (1-alpha) I/2 = (I + alpha Z)/2
  return {1.0, {0.0, alpha}};
}

QubitPovm depolarize(const QubitPovm& povm, double eta_b,
                     const RealQubitOperator& zeta_b) {
  if (!(eta_b >= 0.0 && eta_b <= 1.0)) {
    throw std::invalid_argument("depolarize: eta_b must lie in [0,1]");
  }
  if (std::abs(zeta_b.trace() - 1.0) > 1e-9 || !zeta_b.is_psd(1e-9)) {
    throw std::invalid_argument("depolarize: zeta_b must be a valid state");
  }
  QubitPovm out;
  out.elements.reserve(povm.elements.size());
  for (const auto& e : povm.elements) {
    double q = e.inner(zeta_b);  // tr(M_b zeta)
    out.elements.push_back(e * eta_b + RealQubitOperator{2.0 * (1.0 - eta_b) * q, {0.0, 0.0}});
  }
  return out;
}

RealQubitOperator partial_trace(const Eigen::Matrix4d& state, Party party) {
  Eigen::Matrix2d red = Eigen::Matrix2d::Zero();
  if (party == Party::B) {
    // keep Alice: red(i,j) = sum_k state(ik, jk)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) red(i, j) += state(2 * i + k, 2 * j + k);
  } else {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) red(i, j) += state(2 * k + i, 2 * k + j);
  }
  return RealQubitOperator::from_matrix(0.5 * (red + red.transpose()));
}

}  // namespace bellcert
