#pragma once

#include <Eigen/Dense>

#include <vector>

namespace bellcert::socp {

// min c'x  s.t.  a x = b,  x in K
// K = R_+^nlin  x  Q_{d1} x Q_{d2} x ...   (second-order cones, d >= 2)
struct Problem {
  int nlin = 0;
  std::vector<int> soc_dims;
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  int nvars() const { return static_cast<int>(c.size()); }
};

enum class Status { Optimal, MaxIterations, Numerical };

struct Options {
  double tol_feas = 1e-10;
  double tol_gap = 1e-11;
  int max_iters = 120;
};

struct Result {
  Status status = Status::Numerical;
  Eigen::VectorXd x, y, s;
  double pobj = 0.0;
  double dobj = 0.0;
  double gap = 0.0;      // x's at exit
  double rp = 0.0;       // |b - Ax|_inf
  double rd = 0.0;       // |c - A'y - s|_inf
  int iters = 0;

  bool ok() const { return status == Status::Optimal; }
};

// Primal-dual interior point with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector. The problem must be strictly feasible (every use in
// this codebase is by construction).
Result solve(const Problem& p, const Options& opts = {});

}  // namespace bellcert::socp
