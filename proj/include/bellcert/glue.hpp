#pragma once

#include "bellcert/bloch.hpp"

#include <array>

namespace bellcert::glue {

// Upper bounds on the state-passing visibility v from the positivity of the
// four diagonal entries of the residual in the noise-folded decomposition.
// For theta <= theta_i the fourth bound is the binding one, for
// theta >= theta_i the first.
std::array<double, 4> diag_bounds(double theta, double theta_i, double eta_i);

// eta_i / (cot(theta) tan(theta_i) (1+eta_i) - eta_i); propagates a certified
// visibility at theta_i down to theta < theta_i.
double eta_theta_step(double theta, double theta_i, double eta_i);

// v(dphi) = (1 - 2 sqrt2 sqrt(1-cos 2dphi)) / (8 cos 2dphi - 7)
double v_phi_step(double dphi);

double eta_phi_step(double dphi, double eta_i);

struct WitnessReport {
  TwoQubitState sigma;
  double trace = 0.0;
  double pt_residual = 0.0;            // |PT(sigma) - sigma|_max
  std::array<double, 4> eigenvalues{};  // ascending
  std::array<double, 4> expected{};     // {0, 1/4, (3 +- sqrt(5+4cos4theta))/8} ascending
  double eigenvalue_residual = 0.0;
  bool trivial = false;  // dphi = 0 path
};

// sigma = v/(1-v) (rho(theta_i,dphi) - rho(theta_i,0)) + I/2 x tr_A rho; a
// PPT (hence separable) two-qubit state when v = v_phi_step(dphi).
WitnessReport separability_witness(double theta_i, double dphi, double v);

// v(dphi_step) * min_j eta_j: visibility valid for every phi when the grid
// values cover steps of dphi_step
double eta_grid_min(const std::vector<double>& grid_values, double dphi_step);

// Eq.-(26)-style global step; algebraically the same map as eta_theta_step.
double eta_global(double theta, double theta_i, double eta_of_theta_i);

// the theta < theta_i at which eta_global reaches `target`
double solve_theta_for_target(double theta_i, double eta_i, double target);

}  // namespace bellcert::glue
