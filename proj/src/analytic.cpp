#include "bellcert/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellcert::analytic {

namespace {

// eigenvalues of a symmetric 3x3 matrix by Cardano's formula
std::array<double, 3> sym3_eigenvalues(const Eigen::Matrix3d& a) {
  double q = a.trace() / 3.0;
  Eigen::Matrix3d b = a - q * Eigen::Matrix3d::Identity();
  double p2 = (b * b).trace() / 6.0;
  double p = std::sqrt(std::max(p2, 0.0));
  if (p < 1e-15) return {q, q, q};
  double det = (b / p).determinant() / 2.0;
  det = std::clamp(det, -1.0, 1.0);
  double phi = std::acos(det) / 3.0;
  double e0 = q + 2.0 * p * std::cos(phi);
  double e2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  double e1 = 3.0 * q - e0 - e2;
  return {e0, e1, e2};
}

}  // namespace

Eigen::Matrix3d correlation_matrix(const TwoQubitState& state) {
  // sigma_2 = Y = i*K with K = [[0,-1],[1,0]]; for real symmetric rho the
  // mixed X/Z-with-Y entries vanish and T_22 = -tr(rho K x K)
  Eigen::Matrix2d k;
  k << 0, -1, 1, 0;
  std::array<Eigen::Matrix2d, 3> real_part = {kPauliX, Eigen::Matrix2d::Zero(), kPauliZ};
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1) {
        t(i, j) = -kron2(k, k).cwiseProduct(state.m).sum();
      } else if (i == 1 || j == 1) {
        t(i, j) = 0.0;
      } else {
        t(i, j) = kron2(real_part[i], real_part[j]).cwiseProduct(state.m).sum();
      }
    }
  }
  return t;
}

ChshReport horodecki_chsh(const TwoQubitState& state) {
  Eigen::Matrix3d t = correlation_matrix(state);
  auto ev = sym3_eigenvalues(t.transpose() * t);
  std::array<double, 3> s;
  for (int i = 0; i < 3; ++i) s[i] = std::sqrt(std::max(ev[i], 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  ChshReport rep;
  rep.s1 = s[0];
  rep.s2 = s[1];
  rep.value = 2.0 * std::sqrt(s[0] * s[0] + s[1] * s[1]);
  return rep;
}

double v_star(double theta) {
  double s = std::sin(2.0 * theta);
  return 1.0 / std::sqrt(1.0 + s * s);
}

double theta_star(double eta_star) {
  double e2 = eta2();
  if (!(eta_star > 0.0 && eta_star <= e2)) {
    throw std::invalid_argument("theta_star: eta_star must lie in (0, sqrt(3)-1]");
  }
  double arg = (e2 / eta_star) * (e2 / eta_star) - 1.0;
  if (arg > 1.0 + 1e-12) {
    throw std::invalid_argument("theta_star: eta_star too small, no solution in [0, pi/4]");
  }
  return 0.5 * std::asin(std::sqrt(std::min(arg, 1.0)));
}

double small_theta_bound(double theta) {
  return v_star(theta) * eta2();
}

}  // namespace bellcert::analytic
