#pragma once

#include "bellcert/bloch.hpp"

namespace bellcert::analytic {

inline constexpr double kEtaStar = 0.67;

// pairwise / triplewise trine compatibility thresholds
inline double eta2() { return std::sqrt(3.0) - 1.0; }
inline constexpr double kEta3 = 2.0 / 3.0;

struct ChshReport {
  double value = 0.0;  // maximal quantum CHSH value 2*sqrt(s1^2+s2^2)
  double s1 = 0.0, s2 = 0.0;  // two largest singular values of T
};

// Correlation matrix T_ij = tr(rho sigma_i x sigma_j) and the Horodecki
// maximal CHSH value. Real states only; the Y(x)Y entry is handled through
// the real antisymmetric representation.
ChshReport horodecki_chsh(const TwoQubitState& state);
Eigen::Matrix3d correlation_matrix(const TwoQubitState& state);

// v*(theta) = 1/sqrt(1+sin^2 2theta): the Pauli visibility below which no
// CHSH violation is possible on the Schmidt state.
double v_star(double theta);

// theta* solving eta_star = eta2 / sqrt(1+sin^2 2theta)
double theta_star(double eta_star);

// certified-local trine visibility v*(theta) * eta2
double small_theta_bound(double theta);

}  // namespace bellcert::analytic
