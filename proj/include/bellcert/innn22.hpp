#pragma once

#include "bellcert/behavior.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bellcert::innn22 {

// Collins-Gisin table of an N-setting two-outcome functional:
// value = sum_xy joint(x,y) p(00|xy) + sum_x alice(x) p_A(0|x)
//       + sum_y bob(y) p_B(0|y)
struct CgFunctional {
  int n = 0;
  Eigen::MatrixXd joint;
  Eigen::VectorXd alice, bob;
};

// joint +1 for x+y <= N+1, -1 on x+y = N+2, 0 beyond; alice (-1,0,...);
// bob -(N-y). Local bound 0 for every N (validated by enumeration).
CgFunctional cg_innn22(int n);

// exact maximum over deterministic strategy pairs
double local_bound(const CgFunctional& f);

double evaluate(const CgFunctional& f, const Behavior& p);

// p(ab|xy) = tr(rho M^eta_{a|x} (x) M_{b|y}) with lossy Alice effects
// M^eta_{0|x} = eta*base_a[x], M^eta_{1|x} = I - eta*base_a[x]
Behavior lossy_behavior(const Eigen::MatrixXd& rho,
                        const std::vector<Eigen::MatrixXd>& base_a,
                        const std::vector<Eigen::MatrixXd>& bob, double eta);

struct SeesawOptions {
  int restarts = 50;
  int max_iters = 400;
  double tol = 1e-11;
  std::uint64_t seed = 20240901;
  int dim = 0;  // 0 -> N
};

struct SeesawResult {
  bool found = false;  // strictly positive margin located
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double recheck_residual = 0.0;  // |value - independent re-evaluation|
  int n = 0;
  double eta = 0.0;
  int dim = 0;
  int best_restart = -1;
  std::uint64_t seed = 0;
  Eigen::VectorXd psi;                  // state vector, dim*dim
  std::vector<Eigen::MatrixXd> alice;   // base projectors M-bar_{0|x}
  std::vector<Eigen::MatrixXd> bob;     // projectors M_{0|y}
};

// Alternating optimization of the I_NN22 value over the state, Alice's base
// projectors (scaled to lossy form by eta), and Bob's projectors.
SeesawResult seesaw(int n, double eta, const SeesawOptions& opts = {});

struct CompatReport {
  struct Entry {
    std::vector<int> subset;
    double marginal_residual = 0.0;
    double min_eigenvalue = 0.0;
    double sum_residual = 0.0;
    bool ok = false;
  };
  int n = 0;
  double eta = 0.0;
  std::vector<Entry> entries;
  bool all_ok = false;
};

// For every (N-1)-subset of the lossy set at eta = 1/(N-1), builds the sparse
// parent and verifies marginals, positivity, and completeness.
CompatReport compat_certificate(const std::vector<Eigen::MatrixXd>& base_a,
                                int n_settings);

void write_witness(const std::string& path, const SeesawResult& w);

}  // namespace bellcert::innn22
