#include "bellcert/glue.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellcert::glue {

std::array<double, 4> diag_bounds(double theta, double theta_i, double eta_i) {
  if (theta <= 0.0 || theta_i <= 0.0 || theta > M_PI / 4 + 1e-12 ||
      theta_i > M_PI / 4 + 1e-12) {
    throw std::invalid_argument("diag_bounds: angles must lie in (0, pi/4]");
  }
  double tc = std::tan(theta) / std::tan(theta_i);  // tan(theta) cot(theta_i)
  double ct = 1.0 / tc;                             // cot(theta) tan(theta_i)
  return {
      1.0 / (tc * (1.0 + eta_i) - eta_i),
      1.0 / (ct * (1.0 - eta_i) + eta_i),
      1.0 / (tc * (1.0 - eta_i) + eta_i),
      1.0 / (ct * (1.0 + eta_i) - eta_i),
  };
}

double eta_theta_step(double theta, double theta_i, double eta_i) {
  if (!(theta > 0.0 && theta <= theta_i && theta_i <= M_PI / 4 + 1e-12)) {
    throw std::invalid_argument("eta_theta_step: need 0 < theta <= theta_i <= pi/4");
  }
  double ct = std::tan(theta_i) / std::tan(theta);
  double den = ct * (1.0 + eta_i) - eta_i;
  if (!(den > 0.0)) {
    throw std::runtime_error("eta_theta_step: nonpositive denominator");
  }
  return eta_i / den;
}

double v_phi_step(double dphi) {
  double c = std::cos(2.0 * dphi);
  double den = 8.0 * c - 7.0;
  if (!(den > 0.0)) {
    throw std::invalid_argument("v_phi_step: |dphi| too large (needs 8cos(2dphi) > 7)");
  }
  return (1.0 - 2.0 * std::sqrt(2.0) * std::sqrt(1.0 - c)) / den;
}

double eta_phi_step(double dphi, double eta_i) {
  return v_phi_step(dphi) * eta_i;
}

namespace {
Eigen::Matrix4d partial_transpose_b(const Eigen::Matrix4d& m) {
  Eigen::Matrix4d out = m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out(2 * i + 0, 2 * j + 1) = m(2 * i + 1, 2 * j + 0);
      out(2 * i + 1, 2 * j + 0) = m(2 * i + 0, 2 * j + 1);
    }
  return out;
}
}  // namespace

WitnessReport separability_witness(double theta_i, double dphi, double v) {
  WitnessReport rep;
  if (v >= 1.0) {
    if (dphi != 0.0) {
      throw std::invalid_argument("separability_witness: v = 1 only valid at dphi = 0");
    }
    rep.trivial = true;
    return rep;
  }

  Eigen::Matrix4d drho =
      schmidt_state(theta_i, dphi).m - schmidt_state(theta_i, 0.0).m;
  RealQubitOperator rho_b = partial_trace(schmidt_state(theta_i, dphi).m, Party::A);
  Eigen::Matrix4d sig = (v / (1.0 - v)) * drho +
                        kron2(0.5 * Eigen::Matrix2d::Identity(), rho_b.matrix());
  rep.sigma.m = sig;
  rep.trace = sig.trace();
  rep.pt_residual = (partial_transpose_b(sig) - sig).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (sig + sig.transpose()));
  for (int i = 0; i < 4; ++i) rep.eigenvalues[i] = es.eigenvalues()[i];

  double root = std::sqrt(5.0 + 4.0 * std::cos(4.0 * theta_i));
  rep.expected = {0.0, 0.25, (3.0 - root) / 8.0, (3.0 + root) / 8.0};
  std::sort(rep.expected.begin(), rep.expected.end());
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    worst = std::max(worst, std::abs(rep.eigenvalues[i] - rep.expected[i]));
  rep.eigenvalue_residual = worst;
  return rep;
}

double eta_grid_min(const std::vector<double>& grid_values, double dphi_step) {
  if (grid_values.empty()) {
    throw std::invalid_argument("eta_grid_min: empty grid");
  }
  double v = v_phi_step(dphi_step);
  return v * *std::min_element(grid_values.begin(), grid_values.end());
}

double eta_global(double theta, double theta_i, double eta_of_theta_i) {
  return eta_theta_step(theta, theta_i, eta_of_theta_i);
}

double solve_theta_for_target(double theta_i, double eta_i, double target) {
  if (!(eta_i > target)) {
    throw std::invalid_argument("solve_theta_for_target: eta_i must exceed target");
  }
  // invert eta_global: tan(theta) = tan(theta_i) target (1+eta_i) / (eta_i (1+target))
  double t = std::tan(theta_i) * target * (1.0 + eta_i) / (eta_i * (1.0 + target));
  return std::atan(t);
}

}  // namespace bellcert::glue
