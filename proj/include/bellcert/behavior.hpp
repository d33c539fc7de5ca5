#pragma once

#include "bellcert/bloch.hpp"

#include <vector>

namespace bellcert {

// Measurement scenario: settings per party and outcome count per setting.
struct Scenario {
  std::vector<int> alice_outcomes;  // one entry per Alice setting
  std::vector<int> bob_outcomes;    // one entry per Bob setting

  int na() const { return static_cast<int>(alice_outcomes.size()); }
  int nb() const { return static_cast<int>(bob_outcomes.size()); }
  bool operator==(const Scenario&) const = default;
};

// Conditional table p(ab|xy) over a declared scenario.
struct Behavior {
  Scenario scenario;
  // stored as table[x][y](a, b)
  std::vector<std::vector<Eigen::MatrixXd>> table;

  static Behavior zeros(const Scenario& sc);

  double& at(int x, int y, int a, int b) { return table[x][y](a, b); }
  double at(int x, int y, int a, int b) const { return table[x][y](a, b); }

  // max over (x,y) of |sum_ab p(ab|xy) - 1|
  double normalization_residual() const;
  bool is_proper(double tol = kValidityTol) const;  // all entries >= -tol
  double min_entry() const;
  // max deviation of either party's marginal across the other's settings
  double no_signalling_residual() const;

  double alice_marginal(int x, int a) const;  // averaged over y? no: uses y=0
  double bob_marginal(int y, int b) const;    // uses x=0
};

// p(ab|xy) = tr((A_{a|x} (x) B_{b|y}) state)
Behavior behavior(const PseudoState& state,
                  const std::vector<QubitPovm>& alice,
                  const std::vector<QubitPovm>& bob);
inline Behavior behavior(const TwoQubitState& state,
                         const std::vector<QubitPovm>& alice,
                         const std::vector<QubitPovm>& bob) {
  return behavior(state.pseudo(), alice, bob);
}

// Bell functional: one coefficient per (a,b,x,y) entry of a scenario.
struct BellFunctional {
  Scenario scenario;
  std::vector<std::vector<Eigen::MatrixXd>> coeff;  // coeff[x][y](a,b)
  double local_bound = 0.0;
  bool local_bound_known = false;

  static BellFunctional zeros(const Scenario& sc);
  double& at(int x, int y, int a, int b) { return coeff[x][y](a, b); }
  double at(int x, int y, int a, int b) const { return coeff[x][y](a, b); }
  double evaluate(const Behavior& p) const;
};

}  // namespace bellcert
