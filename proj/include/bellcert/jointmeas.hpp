#pragma once

#include "bellcert/bloch.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace bellcert::jointmeas {

// 2^n-outcome parent measurement; outcome labels are n-bit strings, bit x of
// the index holding the outcome assigned to child measurement x.
struct ParentPovm {
  int n = 0;
  std::vector<RealQubitOperator> elements;  // size 2^n

  RealQubitOperator marginal(int x, int outcome) const;
  // max over {element PSD violations, |sum - identity|, child marginals}
  double validity_residual(const std::vector<QubitPovm>& children) const;
  double min_psd_margin() const;
  double sum_residual() const;
};

enum class JmStatus { Feasible, Infeasible, Unknown };

struct JmResult {
  JmStatus status = JmStatus::Unknown;
  // best achievable PSD margin (from an explicit candidate) and the solver's
  // upper bound on it; Infeasible is only reported when the bound is negative
  double margin_lower = 0.0;
  double margin_upper = 0.0;
  std::optional<ParentPovm> parent;  // set when Feasible

  bool feasible() const { return status == JmStatus::Feasible; }
};

// Joint-measurability of dichotomic qubit POVMs, posed as the cone program
//   max mu  s.t.  marginals match, t_a - mu >= |r_a| for every parent element
// and solved by outer linearization with exact separation.
JmResult jm_feasible(const std::vector<QubitPovm>& povms, double tol = 1e-9);

struct ThresholdResult {
  double lo = 0.0;  // feasible here
  double hi = 0.0;  // infeasible here
  double mid() const { return 0.5 * (lo + hi); }
};

// Bisection of the critical visibility of a monotone family.
ThresholdResult jm_threshold(
    const std::function<std::vector<QubitPovm>(double)>& family, double tol = 1e-5);

struct HollowReport {
  double eta = 0.0;
  std::array<bool, 3> pair_jm{};  // pairs (0,1),(0,2),(1,2)
  bool triple_jm = false;
  bool is_hollow = false;
};

HollowReport hollow_triangle_check(double eta);

// {eta*M_{0|x}, I - eta*M_{0|x}} for every base effect
struct LossyPovmSet {
  std::vector<RealQubitOperator> base;
  double eta = 1.0;
  std::vector<QubitPovm> povms() const;
};

LossyPovmSet lossy_set(const std::vector<RealQubitOperator>& base, double eta);

// Parent with all elements zero except the n single-zero strings, worth
// (1/n) M_{0|x}, and the all-ones string, worth (1/n) sum_x (I - M_{0|x}).
// Its marginals give the lossy set at eta = 1/n exactly.
ParentPovm parent_lossy(const std::vector<RealQubitOperator>& base);

// Same construction over any operator type supporting +, scalar*, and a
// supplied identity (used for dimension-N certificates).
template <class Op>
std::vector<Op> lossy_parent_elements(const std::vector<Op>& base_m0,
                                      const Op& identity) {
  const int n = static_cast<int>(base_m0.size());
  const double w = 1.0 / n;
  Op zero = 0.0 * identity;
  std::vector<Op> elems(static_cast<size_t>(1) << n, zero);
  Op ones = zero;
  for (int x = 0; x < n; ++x) {
    size_t idx = ((static_cast<size_t>(1) << n) - 1) & ~(static_cast<size_t>(1) << x);
    elems[idx] = w * base_m0[x];
    ones = ones + w * (identity + (-1.0) * base_m0[x]);
  }
  elems[(static_cast<size_t>(1) << n) - 1] = ones;
  return elems;
}

}  // namespace bellcert::jointmeas
