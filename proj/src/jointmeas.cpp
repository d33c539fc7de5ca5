#include "bellcert/jointmeas.hpp"

#include "bellcert/socp.hpp"

#include <cmath>
#include <stdexcept>

namespace bellcert::jointmeas {

RealQubitOperator ParentPovm::marginal(int x, int outcome) const {
  RealQubitOperator sum = RealQubitOperator::zero();
  for (size_t a = 0; a < elements.size(); ++a) {
    if (((a >> x) & 1u) == static_cast<unsigned>(outcome)) sum = sum + elements[a];
  }
  return sum;
}

double ParentPovm::min_psd_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : elements) m = std::min(m, e.psd_margin());
  return m;
}

double ParentPovm::sum_residual() const {
  RealQubitOperator sum = RealQubitOperator::zero();
  for (const auto& e : elements) sum = sum + e;
  RealQubitOperator d = sum - RealQubitOperator::identity();
  return std::max(std::abs(d.t), d.r.norm());
}

double ParentPovm::validity_residual(const std::vector<QubitPovm>& children) const {
  double worst = std::max(0.0, -min_psd_margin());
  worst = std::max(worst, sum_residual());
  for (int x = 0; x < static_cast<int>(children.size()); ++x) {
    for (int a = 0; a < children[x].arity(); ++a) {
      RealQubitOperator d = marginal(x, a) - children[x].effect(a);
      worst = std::max(worst, std::max(std::abs(d.t), d.r.norm()));
    }
  }
  return worst;
}

JmResult jm_feasible(const std::vector<QubitPovm>& povms, double tol) {
  const int n = static_cast<int>(povms.size());
  if (n < 1 || n > 6) {
    throw std::invalid_argument("jm_feasible: need 1..6 POVMs");
  }
  for (const auto& m : povms) {
    if (m.arity() != 2)
      throw std::invalid_argument("jm_feasible: dichotomic POVMs only");
    if (!m.is_valid(1e-8))
      throw std::invalid_argument("jm_feasible: invalid POVM input");
  }

  const int npar = 1 << n;

  // margin program max mu s.t. (t_a - mu, r_a) in Q3 and marginals hold,
  // with z_a = (t_a - mu, r_a) and mu eliminated via completeness:
  //   mu = (2 - sum_a z_a0) / 2^n,  objective min sum_a z_a0
  socp::Problem p;
  p.soc_dims.assign(npar, 3);
  p.c = Eigen::VectorXd::Zero(3 * npar);
  for (int a = 0; a < npar; ++a) p.c[3 * a] = 1.0;
  const int m = 3 * n + 2;
  p.a.setZero(m, 3 * npar);
  p.b.setZero(m);
  for (int x = 0; x < n; ++x) {
    const RealQubitOperator& eff = povms[x].effect(0);
    for (int a = 0; a < npar; ++a) {
      bool in = ((a >> x) & 1) == 0;
      p.a(3 * x + 0, 3 * a + 0) = (in ? 1.0 : 0.0) - 0.5;
      if (in) {
        p.a(3 * x + 1, 3 * a + 1) = 1.0;
        p.a(3 * x + 2, 3 * a + 2) = 1.0;
      }
    }
    p.b[3 * x + 0] = eff.t - 1.0;
    p.b[3 * x + 1] = eff.r.x1;
    p.b[3 * x + 2] = eff.r.x3;
  }
  for (int a = 0; a < npar; ++a) {
    p.a(3 * n + 0, 3 * a + 1) = 1.0;
    p.a(3 * n + 1, 3 * a + 2) = 1.0;
  }

  socp::Result res = socp::solve(p);
  if (!res.ok()) {
    throw std::runtime_error("jm_feasible: cone solver failure");
  }

  JmResult out;
  out.margin_upper = (2.0 - res.dobj) / npar + res.rd + res.rp;
  double mu_x = (2.0 - res.pobj) / npar;
  double achieved = std::numeric_limits<double>::infinity();
  ParentPovm parent;
  parent.n = n;
  parent.elements.resize(npar);
  for (int a = 0; a < npar; ++a) {
    RealQubitOperator e{res.x[3 * a] + mu_x, {res.x[3 * a + 1], res.x[3 * a + 2]}};
    parent.elements[a] = e;
    achieved = std::min(achieved, e.psd_margin());
  }
  out.margin_lower = achieved;

  if (out.margin_upper < -tol) {
    out.status = JmStatus::Infeasible;
  } else if (out.margin_lower >= -tol) {
    out.status = JmStatus::Feasible;
    out.parent = std::move(parent);
  } else {
    out.status = JmStatus::Unknown;
  }
  return out;
}

ThresholdResult jm_threshold(
    const std::function<std::vector<QubitPovm>(double)>& family, double tol) {
  double lo = 0.0, hi = 1.0;
  JmResult at_lo = jm_feasible(family(lo));
  if (!at_lo.feasible()) {
    throw std::invalid_argument("jm_threshold: infeasible at lower endpoint");
  }
  JmResult at_hi = jm_feasible(family(hi));
  if (at_hi.feasible()) {
    // compatible across the whole range
    return {1.0, 1.0};
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    JmResult r = jm_feasible(family(mid));
    // near the crossing the exact margins decide; Unknown cannot persist at
    // bracket widths above the solver gap (~1e-10)
    if (r.status == JmStatus::Feasible) {
      lo = mid;
    } else if (r.status == JmStatus::Infeasible) {
      hi = mid;
    } else {
      lo = std::max(lo, mid - 1e-9);
      hi = std::min(hi, mid + 1e-9);
      break;
    }
  }
  return {lo, hi};
}

HollowReport hollow_triangle_check(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("hollow_triangle_check: eta must lie in [0,1]");
  }
  auto trine = trine_povm(eta);
  HollowReport rep;
  rep.eta = eta;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  bool all_pairs = true;
  for (int i = 0; i < 3; ++i) {
    JmResult r = jm_feasible({trine[pairs[i][0]], trine[pairs[i][1]]});
    rep.pair_jm[i] = r.feasible();
    all_pairs = all_pairs && rep.pair_jm[i];
  }
  rep.triple_jm = jm_feasible({trine[0], trine[1], trine[2]}).feasible();
  rep.is_hollow = all_pairs && !rep.triple_jm;
  return rep;
}

std::vector<QubitPovm> LossyPovmSet::povms() const {
  std::vector<QubitPovm> out;
  out.reserve(base.size());
  for (const auto& m0 : base) {
    QubitPovm m;
    m.elements = {m0 * eta, RealQubitOperator::identity() - m0 * eta};
    out.push_back(m);
  }
  return out;
}

LossyPovmSet lossy_set(const std::vector<RealQubitOperator>& base, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("lossy_set: eta must lie in [0,1]");
  }
  for (const auto& m0 : base) {
    if (!m0.is_psd(1e-9) || !(RealQubitOperator::identity() - m0).is_psd(1e-9)) {
      throw std::invalid_argument("lossy_set: base effect outside [0, I]");
    }
  }
  return LossyPovmSet{base, eta};
}

ParentPovm parent_lossy(const std::vector<RealQubitOperator>& base) {
  ParentPovm out;
  out.n = static_cast<int>(base.size());
  out.elements = lossy_parent_elements(base, RealQubitOperator::identity());
  return out;
}

}  // namespace bellcert::jointmeas
