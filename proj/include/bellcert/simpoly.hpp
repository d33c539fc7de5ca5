#pragma once

#include "bellcert/bloch.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bellcert::simpoly {

using Coords6 = Eigen::Matrix<double, 6, 1>;

// (t0, r0x, r0z, t1, r1x, r1z) of the first two effects; closure fixes the third.
Coords6 coords_of(const QubitPovm& povm);
QubitPovm povm_from_coords(const Coords6& c);

struct PovmVertex {
  Coords6 coords;
  int base_id = -1;  // 0..12 into bob_finite_set(), -1 for degenerate
  int perm_id = 0;   // 0..5 outcome permutation, or the identity slot if degenerate
  QubitPovm povm() const { return povm_from_coords(coords); }
};

// 3 degenerate measurements + 6 outcome permutations of the 13 base ones = 81
std::vector<PovmVertex> vertex_set();

// Convex decomposition of the noisy trine into the two sharp Pauli
// measurements plus coin flips; feasible iff eta <= sqrt(3)-1.
struct SimulationStrategy {
  struct Setting {
    double p_meas[2];        // probability of measuring X / Z
    double response[2][2];   // response[m][a']: P(output 0 | meas m, outcome a')
  };
  std::array<Setting, 3> settings;
  double residual = 0.0;  // worst reconstruction error over settings/outcomes
};

struct DecomposeResult {
  bool feasible = false;
  double overshoot = 0.0;  // max_x (sum of square weights) - 1, >0 when infeasible
  std::optional<SimulationStrategy> strategy;
};

DecomposeResult decompose_trine(double eta);

struct MembershipResult {
  bool inside = false;
  Eigen::VectorXd weights;  // over vertices when inside
  double residual = 0.0;
  // separating functional when outside: sep_f . v <= sep_c for all vertices,
  // sep_f . target = sep_c + sep_gap with sep_gap > 0
  Coords6 sep_f = Coords6::Zero();
  double sep_c = 0.0;
  double sep_gap = 0.0;
};

MembershipResult membership(const QubitPovm& povm,
                            const std::vector<PovmVertex>& vertices);

// max eta with depolarize(povm, eta, zeta) in conv(vertices); single LP.
double shrink_eta_for(const QubitPovm& povm, const RealQubitOperator& zeta_b,
                      const std::vector<PovmVertex>& vertices);

struct GridOptions {
  double ternary_step_deg = 3.0;
  double binary_step_deg = 0.75;
  bool refine = true;
  int refine_iters = 160;
};

struct ShrinkReport {
  double eta_b = 1.0;
  QubitPovm worst;        // measurement attaining the minimum
  double worst_binary = 1.0;
  double worst_ternary = 1.0;
  long grid_evaluations = 0;
};

// min over extremal real 3-outcome POVMs of shrink_eta_for (grid + local
// derivative-free refinement)
ShrinkReport shrink_factor(const RealQubitOperator& zeta_b,
                           const std::vector<PovmVertex>& vertices,
                           const GridOptions& opts = {});

struct Facet {
  Coords6 normal;      // |normal| = 1
  double offset = 0.0;  // normal . v <= offset for all vertices
  int tight_count = 0;
};

struct FacetOptions {
  double zero_tol = 1e-9;
  bool perturb = false;  // deterministic symbolic-style perturbation fallback
};

// Complete facet enumeration of conv(vertices) by the double-description
// method on the polar cone.
std::vector<Facet> facets(const std::vector<PovmVertex>& vertices,
                          const FacetOptions& opts = {});

// facet-wise threshold: for each facet, the largest eta at which the
// depolarized continuous POVM set stays below it; min over facets
double shrink_factor_facets(const RealQubitOperator& zeta_b,
                            const std::vector<Facet>& facets,
                            double eta_tol = 1e-9);

void write_vertices_csv(const std::string& path,
                        const std::vector<PovmVertex>& vertices);
void write_facets_csv(const std::string& path, const std::vector<Facet>& facets);

}  // namespace bellcert::simpoly
