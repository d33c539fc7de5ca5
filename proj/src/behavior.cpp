#include "bellcert/behavior.hpp"

#include <stdexcept>

namespace bellcert {

Behavior Behavior::zeros(const Scenario& sc) {
  Behavior out;
  out.scenario = sc;
  out.table.resize(sc.na());
  for (int x = 0; x < sc.na(); ++x) {
    for (int y = 0; y < sc.nb(); ++y) {
      out.table[x].push_back(
          Eigen::MatrixXd::Zero(sc.alice_outcomes[x], sc.bob_outcomes[y]));
    }
  }
  return out;
}

double Behavior::normalization_residual() const {
  double worst = 0.0;
  for (const auto& row : table)
    for (const auto& m : row) worst = std::max(worst, std::abs(m.sum() - 1.0));
  return worst;
}

bool Behavior::is_proper(double tol) const { return min_entry() >= -tol; }

double Behavior::min_entry() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : table)
    for (const auto& m : row) lo = std::min(lo, m.minCoeff());
  return lo;
}

double Behavior::no_signalling_residual() const {
  double worst = 0.0;
  // Alice marginal must not depend on y
  for (int x = 0; x < scenario.na(); ++x) {
    for (int a = 0; a < scenario.alice_outcomes[x]; ++a) {
      double ref = table[x][0].row(a).sum();
      for (int y = 1; y < scenario.nb(); ++y)
        worst = std::max(worst, std::abs(table[x][y].row(a).sum() - ref));
    }
  }
  for (int y = 0; y < scenario.nb(); ++y) {
    for (int b = 0; b < scenario.bob_outcomes[y]; ++b) {
      double ref = table[0][y].col(b).sum();
      for (int x = 1; x < scenario.na(); ++x)
        worst = std::max(worst, std::abs(table[x][y].col(b).sum() - ref));
    }
  }
  return worst;
}

double Behavior::alice_marginal(int x, int a) const {
  return table[x][0].row(a).sum();
}

double Behavior::bob_marginal(int y, int b) const {
  return table[0][y].col(b).sum();
}

Behavior behavior(const PseudoState& state, const std::vector<QubitPovm>& alice,
                  const std::vector<QubitPovm>& bob) {
  Scenario sc;
  for (const auto& m : alice) sc.alice_outcomes.push_back(m.arity());
  for (const auto& m : bob) sc.bob_outcomes.push_back(m.arity());
  Behavior out = Behavior::zeros(sc);
  for (int x = 0; x < sc.na(); ++x) {
    for (int y = 0; y < sc.nb(); ++y) {
      for (int a = 0; a < sc.alice_outcomes[x]; ++a) {
        Eigen::Matrix2d ma = alice[x].effect(a).matrix();
        for (int b = 0; b < sc.bob_outcomes[y]; ++b) {
          Eigen::Matrix2d mb = bob[y].effect(b).matrix();
          out.at(x, y, a, b) = kron2(ma, mb).cwiseProduct(state.m).sum();
        }
      }
    }
  }
  return out;
}

BellFunctional BellFunctional::zeros(const Scenario& sc) {
  BellFunctional out;
  out.scenario = sc;
  out.coeff.resize(sc.na());
  for (int x = 0; x < sc.na(); ++x)
    for (int y = 0; y < sc.nb(); ++y)
      out.coeff[x].push_back(
          Eigen::MatrixXd::Zero(sc.alice_outcomes[x], sc.bob_outcomes[y]));
  return out;
}

double BellFunctional::evaluate(const Behavior& p) const {
  if (!(p.scenario == scenario)) {
    throw std::invalid_argument("BellFunctional::evaluate: scenario mismatch");
  }
  double v = 0.0;
  for (int x = 0; x < scenario.na(); ++x)
    for (int y = 0; y < scenario.nb(); ++y)
      v += coeff[x][y].cwiseProduct(p.table[x][y]).sum();
  return v;
}

}  // namespace bellcert
