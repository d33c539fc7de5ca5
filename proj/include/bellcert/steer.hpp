#pragma once

#include "bellcert/behavior.hpp"

#include <complex>
#include <vector>

namespace bellcert::steer {

// Subnormalized conditional states sigma_{b|y} steered on Alice by Bob's
// measurements.
struct Assemblage {
  std::vector<int> outcomes;                          // per Bob setting
  std::vector<std::vector<RealQubitOperator>> sigma;  // sigma[y][b]

  int settings() const { return static_cast<int>(sigma.size()); }
  RealQubitOperator reduced(int y = 0) const;  // sum_b sigma_{b|y}
  double no_signalling_residual() const;
  double min_psd_margin() const;
  double total_trace() const { return reduced().trace(); }
};

Assemblage assemblage(const TwoQubitState& state,
                      const std::vector<QubitPovm>& bob);

// (sigma + sigma*)/2 per member; identity on real input
Assemblage realify(const Assemblage& asm_in);
// complex-matrix intake variant
Assemblage realify(const std::vector<std::vector<Eigen::Matrix2cd>>& sigma_c);

struct SteeringFunctional {
  std::vector<std::vector<RealQubitOperator>> f;  // F_{b|y}
  double beta(const Assemblage& a) const;
};

// F_{b|y} = sum_{a,x} c_{ab|xy} M_{a|x}
SteeringFunctional steering_functional(const BellFunctional& c,
                                       const std::vector<QubitPovm>& alice);

struct GhjwResult {
  TwoQubitState state;
  std::vector<QubitPovm> bob;
  double phi = 0.0;                 // recovered rotation angle
  std::array<double, 2> lambda{};   // Schmidt weights, descending
};

// GHJW reconstruction of a state and Bob measurements realizing the
// assemblage; requires full-rank sum_b sigma_{b|y}.
GhjwResult ghjw_reconstruct(const Assemblage& a);

}  // namespace bellcert::steer
