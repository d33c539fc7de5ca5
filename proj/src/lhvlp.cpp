#include "bellcert/lhvlp.hpp"

#include "bellcert/analytic.hpp"
#include "bellcert/socp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellcert::lhvlp {

QubitPovm AliceFamily::povm_at(int x, double eta) const {
  RealQubitOperator e0 = base0[x] + dir0[x] * eta;
  QubitPovm m;
  m.elements = {e0, RealQubitOperator::identity() - e0};
  return m;
}

std::vector<QubitPovm> AliceFamily::povms_at(double eta) const {
  std::vector<QubitPovm> out;
  for (int x = 0; x < settings(); ++x) out.push_back(povm_at(x, eta));
  return out;
}

AliceFamily trine_family() {
  AliceFamily fam;
  for (int x = 0; x < 3; ++x) {
    Vec2 axis = Vec2::unit(2.0 * x * std::numbers::pi / 3.0);
    fam.base0.push_back(RealQubitOperator{1.0, {0.0, 0.0}});  // I/2
    fam.dir0.push_back(RealQubitOperator{0.0, axis});         // axis.sigma/2
  }
  return fam;
}

AliceFamily pauli_family() {
  AliceFamily fam;
  fam.base0.assign(2, RealQubitOperator{1.0, {0.0, 0.0}});
  fam.dir0 = {RealQubitOperator{0.0, {1.0, 0.0}}, RealQubitOperator{0.0, {0.0, 1.0}}};
  return fam;
}

Behavior LocalModel::reconstruct(const Scenario& sc) const {
  Behavior out = Behavior::zeros(sc);
  for (size_t l = 0; l < strategies.size(); ++l) {
    for (int x = 0; x < sc.na(); ++x) {
      int a = strategies[l][x];
      for (int y = 0; y < sc.nb(); ++y)
        for (int b = 0; b < sc.bob_outcomes[y]; ++b)
          out.at(x, y, a, b) += w[l](y, b);
    }
  }
  return out;
}

double LocalModel::residual_vs(const Behavior& target) const {
  Behavior rec = reconstruct(target.scenario);
  double worst = 0.0;
  for (int x = 0; x < target.scenario.na(); ++x)
    for (int y = 0; y < target.scenario.nb(); ++y)
      worst = std::max(
          worst,
          (rec.table[x][y] - target.table[x][y]).cwiseAbs().maxCoeff());
  return worst;
}

double LocalModel::weight_residual() const {
  double worst = std::abs(q.sum() - 1.0);
  for (size_t l = 0; l < strategies.size(); ++l) {
    for (int y = 0; y < w[l].rows(); ++y)
      worst = std::max(worst, std::abs(w[l].row(y).sum() - q[l]));
    worst = std::max(worst, std::max(0.0, -w[l].minCoeff()));
  }
  return worst;
}

PseudoState chi(double theta, double phi, double eta_b,
                const RealQubitOperator& zeta_b) {
  if (!(eta_b > 0.0 && eta_b <= 1.0)) {
    throw std::invalid_argument("chi: eta_b must lie in (0,1]");
  }
  TwoQubitState rho = schmidt_state(theta, phi);
  RealQubitOperator rho_a = partial_trace(rho.m, Party::B);
  PseudoState out;
  out.m = (1.0 / eta_b) * rho.m +
          ((eta_b - 1.0) / eta_b) * kron2(rho_a.matrix(), zeta_b.matrix());
  return out;
}

namespace {

double trace_with(const PseudoState& chi_state, const Eigen::Matrix2d& a,
                  const Eigen::Matrix2d& b) {
  return kron2(a, b).cwiseProduct(chi_state.m).sum();
}

std::vector<std::vector<int>> alice_strategies(int nx) {
  int count = 1 << nx;
  std::vector<std::vector<int>> out(count, std::vector<int>(nx, 0));
  for (int l = 0; l < count; ++l)
    for (int x = 0; x < nx; ++x) out[l][x] = (l >> x) & 1;
  return out;
}

// The reduced LP is large and heavily degenerate (104 zero-rhs consistency
// rows), which thrashes a primal simplex; the interior-point solver handles
// it without warm starts and with predictable iteration counts.
MaxEtaResult solve_reduced(const PseudoState& chi_state, const AliceFamily& alice,
                           const std::vector<QubitPovm>& bob,
                           const MaxEtaOptions& opts) {
  const int nx = alice.settings();
  const int ny = static_cast<int>(bob.size());
  auto strategies = alice_strategies(nx);
  const int nl = static_cast<int>(strategies.size());

  // identically-zero effects (embedded binaries) would pin their response
  // mass to zero and destroy strict feasibility; exclude them from the LP
  std::vector<std::vector<int>> live(ny);
  std::vector<int> arity(ny), w_off(ny + 1, 0);
  for (int y = 0; y < ny; ++y) {
    for (int b = 0; b < bob[y].arity(); ++b) {
      const auto& e = bob[y].effect(b);
      if (std::abs(e.t) > 1e-14 || e.r.norm() > 1e-14) live[y].push_back(b);
    }
    arity[y] = static_cast<int>(live[y].size());
    w_off[y + 1] = w_off[y] + arity[y];
  }
  const int per_l = w_off[ny];
  const int q0 = nl * per_l;
  const int eta_ix = q0 + nl;
  const int slack_ix = eta_ix + 1;
  const int nv = slack_ix + 1;
  auto wix = [&](int l, int y, int b) { return l * per_l + w_off[y] + b; };

  const int m_e1 = nx * w_off[ny];
  const int m_rows = m_e1 + w_off[ny] + nl * ny + 1;

  socp::Problem p;
  p.nlin = nv;
  p.c = Eigen::VectorXd::Zero(nv);
  p.c[eta_ix] = -1.0;  // maximize eta
  p.a.setZero(m_rows, nv);
  p.b.setZero(m_rows);

  int row = 0;
  // (E1) per (x,y,b): sum_{l: l(x)=0} w - K eta = c0
  for (int x = 0; x < nx; ++x) {
    Eigen::Matrix2d base_m = alice.base0[x].matrix();
    Eigen::Matrix2d dir_m = alice.dir0[x].matrix();
    for (int y = 0; y < ny; ++y) {
      for (int b = 0; b < arity[y]; ++b) {
        Eigen::Matrix2d mb = bob[y].effect(live[y][b]).matrix();
        for (int l = 0; l < nl; ++l)
          if (strategies[l][x] == 0) p.a(row, wix(l, y, b)) = 1.0;
        p.a(row, eta_ix) = -trace_with(chi_state, dir_m, mb);
        p.b[row] = trace_with(chi_state, base_m, mb);
        ++row;
      }
    }
  }
  // (E2) per (y,b): sum_l w = tr((I x M) chi)
  for (int y = 0; y < ny; ++y) {
    for (int b = 0; b < arity[y]; ++b) {
      Eigen::Matrix2d mb = bob[y].effect(live[y][b]).matrix();
      for (int l = 0; l < nl; ++l) p.a(row, wix(l, y, b)) = 1.0;
      p.b[row] = trace_with(chi_state, Eigen::Matrix2d::Identity(), mb);
      ++row;
    }
  }
  // (E3) per (l,y): sum_b w - q_l = 0
  for (int l = 0; l < nl; ++l) {
    for (int y = 0; y < ny; ++y) {
      for (int b = 0; b < arity[y]; ++b) p.a(row, wix(l, y, b)) = 1.0;
      p.a(row, q0 + l) = -1.0;
      ++row;
    }
  }
  // eta cap
  p.a(row, eta_ix) = 1.0;
  p.a(row, slack_ix) = 1.0;
  p.b[row] = 1.0;

  socp::Options sopts;
  sopts.tol_gap = opts.gap_tol;
  socp::Result sol = socp::solve(p, sopts);
  if (!sol.ok() || sol.rp > opts.feas_tol) {
    throw std::runtime_error("max_eta_lp: interior-point solve failed (rp=" +
                             std::to_string(sol.rp) + ")");
  }

  MaxEtaResult res;
  res.eta = sol.x[eta_ix];
  res.lp_iterations = sol.iters;
  res.model.alice_settings = nx;
  res.model.strategies = strategies;
  res.model.q = sol.x.segment(q0, nl);
  res.model.w.resize(nl);
  int max_arity = 0;
  for (int y = 0; y < ny; ++y) max_arity = std::max(max_arity, bob[y].arity());
  for (int l = 0; l < nl; ++l) {
    res.model.w[l] = Eigen::MatrixXd::Zero(ny, max_arity);
    for (int y = 0; y < ny; ++y)
      for (int b = 0; b < arity[y]; ++b)
        res.model.w[l](y, live[y][b]) = sol.x[wix(l, y, b)];
  }
  Behavior target = behavior(chi_state, alice.povms_at(res.eta), bob);
  res.model_residual = std::max(res.model.residual_vs(target),
                                res.model.weight_residual());
  return res;
}

MaxEtaResult solve_full(const PseudoState& chi_state, const AliceFamily& alice,
                        const std::vector<QubitPovm>& bob,
                        const MaxEtaOptions& opts) {
  const int nx = alice.settings();
  const int ny = static_cast<int>(bob.size());
  auto astrat = alice_strategies(nx);
  const int nla = static_cast<int>(astrat.size());

  // Bob deterministic strategies: products over settings of outcome choices
  std::vector<int> arity(ny);
  long nlb = 1;
  for (int y = 0; y < ny; ++y) {
    arity[y] = bob[y].arity();
    nlb *= arity[y];
  }
  if (nla * nlb > 200000) {
    throw std::invalid_argument("max_eta_lp: full enumeration too large");
  }
  auto bob_outcome = [&](long lb, int y) {
    for (int yy = 0; yy < y; ++yy) lb /= arity[yy];
    return static_cast<int>(lb % arity[y]);
  };

  const int nv = static_cast<int>(nla * nlb) + 1;
  const int eta_ix = nv - 1;
  lp::Problem p(nv);
  for (int j = 0; j < nv; ++j) p.set_bounds(j, 0.0, 1.0);
  p.c[eta_ix] = -1.0;

  for (int x = 0; x < nx; ++x) {
    Eigen::Matrix2d base_m = alice.base0[x].matrix();
    Eigen::Matrix2d dir_m = alice.dir0[x].matrix();
    for (int a = 0; a < 2; ++a) {
      Eigen::Matrix2d am = a == 0 ? base_m : Eigen::Matrix2d::Identity() - base_m;
      double asign = a == 0 ? 1.0 : -1.0;
      for (int y = 0; y < ny; ++y) {
        for (int b = 0; b < arity[y]; ++b) {
          Eigen::Matrix2d mb = bob[y].effect(b).matrix();
          double c0 = trace_with(chi_state, am, mb);
          double k = asign * trace_with(chi_state, dir_m, mb);
          Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv);
          for (int la = 0; la < nla; ++la) {
            if (astrat[la][x] != a) continue;
            for (long lb = 0; lb < nlb; ++lb)
              if (bob_outcome(lb, y) == b) row[la * nlb + lb] = 1.0;
          }
          row[eta_ix] = -k;
          p.add_eq_row(row, c0);
        }
      }
    }
  }
  p.add_eq_row(
      (Eigen::RowVectorXd(nv) << Eigen::RowVectorXd::Ones(nv - 1), 0.0).finished(),
      1.0);

  lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) {
    throw std::runtime_error("max_eta_lp(full): LP failure (status " +
                             std::string(lp::status_name(sol.status)) + ")");
  }

  MaxEtaResult res;
  res.eta = sol.x[eta_ix];
  res.lp_iterations = sol.iterations;
  // condense to the Alice-deterministic representation
  res.model.alice_settings = nx;
  res.model.strategies = astrat;
  res.model.q = Eigen::VectorXd::Zero(nla);
  int max_arity = *std::max_element(arity.begin(), arity.end());
  res.model.w.assign(nla, Eigen::MatrixXd::Zero(ny, max_arity));
  for (int la = 0; la < nla; ++la) {
    for (long lb = 0; lb < nlb; ++lb) {
      double mass = sol.x[la * nlb + lb];
      if (mass == 0.0) continue;
      res.model.q[la] += mass;
      for (int y = 0; y < ny; ++y) res.model.w[la](y, bob_outcome(lb, y)) += mass;
    }
  }
  Behavior target = behavior(chi_state, alice.povms_at(res.eta), bob);
  res.model_residual = std::max(res.model.residual_vs(target),
                                res.model.weight_residual());
  return res;
}

}  // namespace

MaxEtaResult max_eta_lp(const PseudoState& chi_state, const AliceFamily& alice,
                        const std::vector<QubitPovm>& bob,
                        const MaxEtaOptions& opts) {
  if (std::abs(chi_state.trace() - 1.0) > 1e-9 ||
      chi_state.symmetry_residual() > 1e-9) {
    throw std::invalid_argument("max_eta_lp: chi must be symmetric with unit trace");
  }
  return opts.full_enumeration ? solve_full(chi_state, alice, bob, opts)
                               : solve_reduced(chi_state, alice, bob, opts);
}

double max_eta_alpha(double theta, double phi, double alpha,
                     const MaxEtaOptions& opts) {
  double eta_b;
  if (alpha == 0.0) {
    eta_b = kShrinkAlpha0;
  } else if (std::abs(alpha - kAlphaHigh) < 1e-12) {
    eta_b = kShrinkAlpha56;
  } else {
    throw std::invalid_argument(
        "max_eta_alpha: only alpha in {0, 5/6} carries a pinned shrink factor");
  }
  PseudoState c = chi(theta, phi, eta_b, zeta(alpha));
  return max_eta_lp(c, trine_family(), bob_finite_set(), opts).eta;
}

EtaBarResult eta_bar(double theta, double phi) {
  EtaBarResult res;
  res.eta_alpha0 = max_eta_alpha(theta, phi, 0.0);
  res.eta_alpha56 = max_eta_alpha(theta, phi, kAlphaHigh);
  if (res.eta_alpha0 >= res.eta_alpha56) {
    res.eta = res.eta_alpha0;
    res.winner_alpha = 0.0;
  } else {
    res.eta = res.eta_alpha56;
    res.winner_alpha = kAlphaHigh;
  }
  return res;
}

LocalCheckResult local_check(const Behavior& p) {
  if (!p.is_proper(1e-9)) {
    throw std::invalid_argument("local_check: behavior has negative entries");
  }
  const Scenario& sc = p.scenario;
  long nla = 1, nlb = 1;
  for (int x = 0; x < sc.na(); ++x) nla *= sc.alice_outcomes[x];
  for (int y = 0; y < sc.nb(); ++y) nlb *= sc.bob_outcomes[y];
  if (nla * nlb > 200000) {
    throw std::invalid_argument("local_check: scenario too large to enumerate");
  }
  auto a_of = [&](long la, int x) {
    for (int xx = 0; xx < x; ++xx) la /= sc.alice_outcomes[xx];
    return static_cast<int>(la % sc.alice_outcomes[x]);
  };
  auto b_of = [&](long lb, int y) {
    for (int yy = 0; yy < y; ++yy) lb /= sc.bob_outcomes[yy];
    return static_cast<int>(lb % sc.bob_outcomes[y]);
  };

  // rows: one per behavior entry, then normalization
  std::vector<std::array<int, 4>> entries;
  for (int x = 0; x < sc.na(); ++x)
    for (int y = 0; y < sc.nb(); ++y)
      for (int a = 0; a < sc.alice_outcomes[x]; ++a)
        for (int b = 0; b < sc.bob_outcomes[y]; ++b)
          entries.push_back({x, y, a, b});

  const int nv = static_cast<int>(nla * nlb);
  lp::Problem prob(nv);
  for (int j = 0; j < nv; ++j) prob.set_bounds(j, 0.0, 1.0);
  for (const auto& e : entries) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv);
    for (long la = 0; la < nla; ++la) {
      if (a_of(la, e[0]) != e[2]) continue;
      for (long lb = 0; lb < nlb; ++lb)
        if (b_of(lb, e[1]) == e[3]) row[la * nlb + lb] = 1.0;
    }
    prob.add_eq_row(row, p.at(e[0], e[1], e[2], e[3]));
  }
  prob.add_eq_row(Eigen::RowVectorXd::Ones(nv), 1.0);

  lp::Solution sol = lp::solve(prob);
  LocalCheckResult res;
  if (sol.status == lp::Status::Optimal) {
    res.local = true;
    // condense to Alice-deterministic form
    std::vector<std::vector<int>> strategies(nla, std::vector<int>(sc.na()));
    for (long la = 0; la < nla; ++la)
      for (int x = 0; x < sc.na(); ++x) strategies[la][x] = a_of(la, x);
    int max_arity = *std::max_element(sc.bob_outcomes.begin(), sc.bob_outcomes.end());
    res.model.alice_settings = sc.na();
    res.model.strategies = strategies;
    res.model.q = Eigen::VectorXd::Zero(nla);
    res.model.w.assign(nla, Eigen::MatrixXd::Zero(sc.nb(), max_arity));
    for (long la = 0; la < nla; ++la)
      for (long lb = 0; lb < nlb; ++lb) {
        double mass = sol.x[la * nlb + lb];
        if (mass == 0.0) continue;
        res.model.q[la] += mass;
        for (int y = 0; y < sc.nb(); ++y) res.model.w[la](y, b_of(lb, y)) += mass;
      }
    return res;
  }
  if (sol.status != lp::Status::Infeasible) {
    throw std::runtime_error("local_check: LP failure (status " +
                             std::string(lp::status_name(sol.status)) + ")");
  }

  // Farkas dual -> violated Bell functional
  res.local = false;
  res.functional = BellFunctional::zeros(sc);
  Eigen::VectorXd y = sol.farkas_eq;
  double scale = y.cwiseAbs().maxCoeff();
  if (scale > 0) y /= scale;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    res.functional.at(e[0], e[1], e[2], e[3]) = y[i];
  }
  // enumerate the local bound of the extracted functional
  double bound = -std::numeric_limits<double>::infinity();
  for (long la = 0; la < nla; ++la) {
    for (long lb = 0; lb < nlb; ++lb) {
      double v = 0.0;
      for (int x = 0; x < sc.na(); ++x)
        for (int yy = 0; yy < sc.nb(); ++yy)
          v += res.functional.at(x, yy, a_of(la, x), b_of(lb, yy));
      bound = std::max(bound, v);
    }
  }
  res.functional.local_bound = bound;
  res.functional.local_bound_known = true;
  res.bound = bound;
  res.achieved = res.functional.evaluate(p);
  return res;
}

}  // namespace bellcert::lhvlp
