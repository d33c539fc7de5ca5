#pragma once

#include "bellcert/behavior.hpp"
#include "bellcert/lp.hpp"

#include <optional>
#include <vector>

namespace bellcert::lhvlp {

// published depolarizing shrink factors of the finite Bob set for the two
// zeta choices; re-derived by simpoly::shrink_factor and cross-checked in the
// acceptance suite
inline constexpr double kShrinkAlpha0 = 0.9268;
inline constexpr double kShrinkAlpha56 = 0.8900;
inline constexpr double kAlphaHigh = 5.0 / 6.0;

// Alice's dichotomic measurement family, affine in the visibility:
// effect(0|x; eta) = base0[x] + eta*dir0[x], effect(1|x) the complement.
struct AliceFamily {
  std::vector<RealQubitOperator> base0;
  std::vector<RealQubitOperator> dir0;

  int settings() const { return static_cast<int>(base0.size()); }
  QubitPovm povm_at(int x, double eta) const;
  std::vector<QubitPovm> povms_at(double eta) const;
};

AliceFamily trine_family();
AliceFamily pauli_family();

// Weights over Alice-deterministic strategies with Bob response tables:
// p(ab|xy) = sum_l [strategy_l(x) = a] * w_l(b|y)
struct LocalModel {
  int alice_settings = 0;
  std::vector<std::vector<int>> strategies;  // strategies[l][x] = a
  Eigen::VectorXd q;                         // weight per strategy
  std::vector<Eigen::MatrixXd> w;            // w[l](y, b), rows summing to q[l]

  Behavior reconstruct(const Scenario& sc) const;
  double residual_vs(const Behavior& target) const;
  double weight_residual() const;  // |sum q - 1| and row-sum consistency
};

// chi = (1/eta_b) rho(theta,phi) + ((eta_b-1)/eta_b) rho_A (x) zeta_b
PseudoState chi(double theta, double phi, double eta_b,
                const RealQubitOperator& zeta_b);

struct MaxEtaOptions {
  bool full_enumeration = false;  // enumerate both parties (oracle path)
  double gap_tol = 3e-11;         // absolute duality-gap target on eta
  double feas_tol = 1e-9;
};

struct MaxEtaResult {
  double eta = 0.0;
  LocalModel model;
  double model_residual = 0.0;
  int lp_iterations = 0;
};

// max eta in [0,1] s.t. the behavior of the family at eta on chi admits a
// local decomposition over the finite Bob set; one LP, affine in eta.
MaxEtaResult max_eta_lp(const PseudoState& chi_state, const AliceFamily& alice,
                        const std::vector<QubitPovm>& bob,
                        const MaxEtaOptions& opts = {});

struct EtaBarResult {
  double eta = 0.0;
  double winner_alpha = 0.0;
  double eta_alpha0 = 0.0;
  double eta_alpha56 = 0.0;
};

// max over alpha in {0, 5/6} of the chi -> LP pipeline with the pinned
// shrink factors
EtaBarResult eta_bar(double theta, double phi);
double max_eta_alpha(double theta, double phi, double alpha,
                     const MaxEtaOptions& opts = {});

struct LocalCheckResult {
  bool local = false;
  LocalModel model;                // when local
  BellFunctional functional;       // violated inequality otherwise
  double achieved = 0.0;           // functional value on the input behavior
  double bound = 0.0;              // enumerated local bound of the functional
};

// Feasibility LP over fully deterministic product strategies, with a
// separating Bell functional extracted from the dual on infeasibility.
LocalCheckResult local_check(const Behavior& p);

}  // namespace bellcert::lhvlp
