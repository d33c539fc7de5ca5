#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace bellcert::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, Numerical };

const char* status_name(Status s);

// min c'x  s.t.  eq_a x = eq_b,  le_a x <= le_b,  lower <= x <= upper
struct Problem {
  Eigen::VectorXd c;
  Eigen::MatrixXd eq_a;
  Eigen::VectorXd eq_b;
  Eigen::MatrixXd le_a;
  Eigen::VectorXd le_b;
  Eigen::VectorXd lower, upper;

  explicit Problem(int nvars = 0) { resize(nvars); }
  void resize(int nvars);
  int nvars() const { return static_cast<int>(c.size()); }
  void set_bounds(int j, double lo, double hi);
  // rows are appended; builders keep column count fixed
  void add_eq_row(const Eigen::RowVectorXd& row, double rhs);
  void add_le_row(const Eigen::RowVectorXd& row, double rhs);
};

// Basis snapshot for warm starts (covers structural + slack columns).
struct Basis {
  std::vector<int> basic;
  std::vector<unsigned char> stat;  // per column: 0 lower, 1 upper, 2 basic, 3 free-at-zero
  bool empty() const { return basic.empty(); }
};

struct Options {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 0;  // 0 -> automatic
  const Basis* warm = nullptr;
};

struct Solution {
  Status status = Status::Numerical;
  Eigen::VectorXd x;        // structural variables
  double objective = 0.0;
  Eigen::VectorXd dual_eq;  // equality-row multipliers
  Eigen::VectorXd dual_le;  // <=-row multipliers
  // when Infeasible: y with y'b - sup_{bounds} y'Ax = farkas_gap > 0
  Eigen::VectorXd farkas_eq, farkas_le;
  double farkas_gap = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  Basis basis;  // reusable for warm starts of nearby problems

  bool ok() const { return status == Status::Optimal; }
};

Solution solve(const Problem& p, const Options& opts = {});

}  // namespace bellcert::lp
