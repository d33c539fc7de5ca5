#include "bellcert/simpoly.hpp"

#include "bellcert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace bellcert::simpoly {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
}  // namespace

Coords6 coords_of(const QubitPovm& povm) {
  if (povm.arity() < 2) {
    throw std::invalid_argument("coords_of: need at least two effects");
  }
  Coords6 c;
  c << povm.effect(0).t, povm.effect(0).r.x1, povm.effect(0).r.x3,
      povm.effect(1).t, povm.effect(1).r.x1, povm.effect(1).r.x3;
  return c;
}

QubitPovm povm_from_coords(const Coords6& c) {
  RealQubitOperator e0{c[0], {c[1], c[2]}};
  RealQubitOperator e1{c[3], {c[4], c[5]}};
  RealQubitOperator e2 = RealQubitOperator::identity() - e0 - e1;
  QubitPovm m;
  m.elements = {e0, e1, e2};
  return m;
}

std::vector<PovmVertex> vertex_set() {
  static const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<PovmVertex> out;
  out.reserve(81);
  for (int b = 0; b < 3; ++b) {
    QubitPovm m;
    m.elements = {RealQubitOperator::zero(), RealQubitOperator::zero(),
                  RealQubitOperator::zero()};
    m.elements[b] = RealQubitOperator::identity();
    out.push_back(PovmVertex{coords_of(m), -1, b});
  }
  auto base = bob_finite_set();
  for (int id = 0; id < static_cast<int>(base.size()); ++id) {
    for (int p = 0; p < 6; ++p) {
      QubitPovm m = base[id].permuted({kPerms[p][0], kPerms[p][1], kPerms[p][2]});
      out.push_back(PovmVertex{coords_of(m), id, p});
    }
  }
  return out;
}

DecomposeResult decompose_trine(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("decompose_trine: eta must lie in [0,1]");
  }
  DecomposeResult res;
  SimulationStrategy strat;
  double worst_over = 0.0;
  auto trine = trine_povm(eta);
  for (int x = 0; x < 3; ++x) {
    Vec2 u = trine[x].effect(0).r;
    double s = std::abs(u.x1) + std::abs(u.x3);
    worst_over = std::max(worst_over, s - 1.0);
    if (s > 1.0 + 1e-12) continue;

    double c[4] = {std::max(u.x1, 0.0), std::max(-u.x1, 0.0),
                   std::max(u.x3, 0.0), std::max(-u.x3, 0.0)};
    double noise = 1.0 - s;
    auto& st = strat.settings[x];
    st.p_meas[0] = c[0] + c[1] + 0.5 * noise;
    st.p_meas[1] = c[2] + c[3] + 0.5 * noise;
    for (int m = 0; m < 2; ++m) {
      for (int ap = 0; ap < 2; ++ap) {
        double coef = c[2 * m + ap] + 0.25 * noise;
        st.response[m][ap] = st.p_meas[m] > 0 ? coef / st.p_meas[m] : 0.5;
      }
    }
    // reconstruct and record the residual
    auto paulis = pauli_pair(1.0);
    RealQubitOperator rec = RealQubitOperator::zero();
    for (int m = 0; m < 2; ++m)
      for (int ap = 0; ap < 2; ++ap)
        rec = rec + (st.p_meas[m] * st.response[m][ap]) * paulis[m].effect(ap);
    RealQubitOperator diff = rec - trine[x].effect(0);
    strat.residual = std::max(strat.residual,
                              std::max(std::abs(diff.t), diff.r.norm()));
  }
  res.overshoot = std::max(worst_over, 0.0);
  res.feasible = worst_over <= 1e-12;
  if (res.feasible) res.strategy = strat;
  return res;
}

MembershipResult membership(const QubitPovm& povm,
                            const std::vector<PovmVertex>& vertices) {
  QubitPovm target = povm.arity() == 2 ? povm.embedded(3) : povm;
  if (target.arity() != 3) {
    throw std::invalid_argument("membership: POVM arity must be 2 or 3");
  }
  Coords6 tc = coords_of(target);
  const int nv = static_cast<int>(vertices.size());

  lp::Problem p(nv);
  for (int j = 0; j < nv; ++j) p.set_bounds(j, 0.0, lp::kInf);
  for (int k = 0; k < 6; ++k) {
    Eigen::RowVectorXd row(nv);
    for (int j = 0; j < nv; ++j) row[j] = vertices[j].coords[k];
    p.add_eq_row(row, tc[k]);
  }
  p.add_eq_row(Eigen::RowVectorXd::Ones(nv), 1.0);

  lp::Solution sol = lp::solve(p);
  MembershipResult res;
  if (sol.status == lp::Status::Optimal) {
    res.inside = true;
    res.weights = sol.x;
    Eigen::VectorXd recon = Eigen::VectorXd::Zero(6);
    for (int j = 0; j < nv; ++j) recon += sol.x[j] * vertices[j].coords;
    res.residual = std::max((recon - tc).cwiseAbs().maxCoeff(),
                            std::abs(sol.x.sum() - 1.0));
    return res;
  }
  if (sol.status != lp::Status::Infeasible) {
    throw std::runtime_error("membership: LP failure (status " +
                             std::string(lp::status_name(sol.status)) + ")");
  }
  res.inside = false;
  // farkas_eq = y over the 7 rows: y.(coords,1) <= 0 on vertices, > 0 at target
  Eigen::VectorXd y = sol.farkas_eq;
  for (int k = 0; k < 6; ++k) res.sep_f[k] = y[k];
  res.sep_c = -y[6];
  // rescale for a clean certificate and re-derive the bound independently
  double nrm = res.sep_f.norm();
  if (nrm > 1e-14) {
    res.sep_f /= nrm;
    double cmax = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices)
      cmax = std::max(cmax, res.sep_f.dot(v.coords));
    res.sep_c = cmax;
    res.sep_gap = res.sep_f.dot(tc) - cmax;
  }
  return res;
}

namespace {

struct DepolCoords {
  Coords6 base;  // eta = 0 image
  Coords6 dir;   // d/d eta
};

DepolCoords depol_coords(const QubitPovm& povm, const RealQubitOperator& zeta_b) {
  QubitPovm m = povm.arity() == 2 ? povm.embedded(3) : povm;
  double q0 = m.effect(0).inner(zeta_b);
  double q1 = m.effect(1).inner(zeta_b);
  DepolCoords dc;
  dc.base << 2.0 * q0, 0, 0, 2.0 * q1, 0, 0;
  Coords6 full = coords_of(m);
  dc.dir = full - dc.base;
  return dc;
}

}  // namespace

double shrink_eta_for(const QubitPovm& povm, const RealQubitOperator& zeta_b,
                      const std::vector<PovmVertex>& vertices) {
  const int nv = static_cast<int>(vertices.size());
  DepolCoords dc = depol_coords(povm, zeta_b);

  lp::Problem p(nv + 1);
  for (int j = 0; j < nv; ++j) p.set_bounds(j, 0.0, lp::kInf);
  p.set_bounds(nv, 0.0, 1.0);
  p.c[nv] = -1.0;  // maximize eta
  for (int k = 0; k < 6; ++k) {
    Eigen::RowVectorXd row(nv + 1);
    for (int j = 0; j < nv; ++j) row[j] = vertices[j].coords[k];
    row[nv] = -dc.dir[k];
    p.add_eq_row(row, dc.base[k]);
  }
  {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Ones(nv + 1);
    row[nv] = 0.0;
    p.add_eq_row(row, 1.0);
  }
  lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) {
    throw std::runtime_error("shrink_eta_for: LP failure (status " +
                             std::string(lp::status_name(sol.status)) + ")");
  }
  return sol.x[nv];
}

namespace {

// rank-1 ternary extremal POVM from three Bloch angles; empty when the
// directions fail to span positively
std::optional<QubitPovm> ternary_extremal(double a1, double a2, double a3) {
  Eigen::Matrix3d m;
  m << 1, 1, 1, std::cos(a1), std::cos(a2), std::cos(a3), std::sin(a1),
      std::sin(a2), std::sin(a3);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::Vector3d t = lu.solve(Eigen::Vector3d(2.0, 0.0, 0.0));
  if (t.minCoeff() < 1e-7) return std::nullopt;
  QubitPovm povm;
  double ang[3] = {a1, a2, a3};
  for (int b = 0; b < 3; ++b) {
    povm.elements.push_back(
        RealQubitOperator{t[b], Vec2::unit(ang[b]) * t[b]});
  }
  return povm;
}

QubitPovm binary_extremal(double angle) {
  QubitPovm m;
  Vec2 u = Vec2::unit(angle);
  m.elements = {RealQubitOperator{1.0, u}, RealQubitOperator{1.0, -u}};
  return m.embedded(3);
}

// tiny deterministic Nelder-Mead
double nelder_mead(std::function<double(const Eigen::VectorXd&)> f,
                   Eigen::VectorXd& x, double step, int iters) {
  const int n = static_cast<int>(x.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x);
  std::vector<double> val(n + 1);
  for (int i = 1; i <= n; ++i) pts[i][i - 1] += step;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  for (int it = 0; it < iters; ++it) {
    std::vector<int> ord(n + 1);
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
    std::vector<Eigen::VectorXd> np(n + 1);
    std::vector<double> nv(n + 1);
    for (int i = 0; i <= n; ++i) {
      np[i] = pts[ord[i]];
      nv[i] = val[ord[i]];
    }
    pts = np;
    val = nv;
    if (std::abs(val[n] - val[0]) < 1e-12 &&
        (pts[n] - pts[0]).cwiseAbs().maxCoeff() < 1e-10)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + (centroid - pts[n]);
    double fr = f(xr);
    if (fr < val[0]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[n]);
      double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (pts[n] - centroid);
      double fc = f(xc);
      if (fc < val[n]) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  x = pts[best];
  return val[best];
}

}  // namespace

ShrinkReport shrink_factor(const RealQubitOperator& zeta_b,
                           const std::vector<PovmVertex>& vertices,
                           const GridOptions& opts) {
  ShrinkReport rep;
  long evals = 0;

  // binary extremals: 1-parameter family
  auto binary_obj = [&](double ang) {
    ++evals;
    return shrink_eta_for(binary_extremal(ang), zeta_b, vertices);
  };
  double best_bin = 1.0, best_bin_ang = 0.0;
  for (double a = 0.0; a < 180.0; a += opts.binary_step_deg) {
    double v = binary_obj(a * kDeg);
    if (v < best_bin) {
      best_bin = v;
      best_bin_ang = a * kDeg;
    }
  }
  if (opts.refine) {
    double lo = best_bin_ang - opts.binary_step_deg * kDeg;
    double hi = best_bin_ang + opts.binary_step_deg * kDeg;
    for (int it = 0; it < 60; ++it) {
      double m1 = lo + (hi - lo) * 0.381966;
      double m2 = hi - (hi - lo) * 0.381966;
      if (binary_obj(m1) < binary_obj(m2))
        hi = m2;
      else
        lo = m1;
    }
    double v = binary_obj(0.5 * (lo + hi));
    if (v < best_bin) {
      best_bin = v;
      best_bin_ang = 0.5 * (lo + hi);
    }
  }
  rep.worst_binary = best_bin;

  // ternary extremals: base angle + two gaps, all gaps < pi
  auto ternary_obj = [&](const Eigen::VectorXd& prm) {
    double a1 = prm[0], d2 = prm[1], d3 = prm[2];
    if (d2 < 1e-3 || d3 < 1e-3 || d2 > kPi - 1e-3 || d3 > kPi - 1e-3 ||
        d2 + d3 < kPi + 1e-3)
      return 2.0;  // outside the extremal domain
    auto povm = ternary_extremal(a1, a1 + d2, a1 + d2 + d3);
    if (!povm) return 2.0;
    ++evals;
    return shrink_eta_for(*povm, zeta_b, vertices);
  };

  double best_ter = 1.0;
  Eigen::VectorXd best_prm(3);
  best_prm << 0, 2 * kPi / 3, 2 * kPi / 3;
  const double step = opts.ternary_step_deg * kDeg;
  for (double a1 = 0.0; a1 < kPi / 2 - 1e-9; a1 += step) {
    for (double d2 = step; d2 < kPi - 1e-9; d2 += step) {
      for (double d3 = std::max(step, kPi - d2 + step); d3 < kPi - 1e-9;
           d3 += step) {
        Eigen::VectorXd prm(3);
        prm << a1, d2, d3;
        double v = ternary_obj(prm);
        if (v < best_ter) {
          best_ter = v;
          best_prm = prm;
        }
      }
    }
  }
  if (opts.refine) {
    Eigen::VectorXd x = best_prm;
    double v = nelder_mead(ternary_obj, x, 0.6 * step, opts.refine_iters);
    if (v < best_ter) {
      best_ter = v;
      best_prm = x;
    }
  }
  rep.worst_ternary = best_ter;
  rep.grid_evaluations = evals;

  if (best_bin < best_ter) {
    rep.eta_b = best_bin;
    rep.worst = binary_extremal(best_bin_ang);
  } else {
    rep.eta_b = best_ter;
    auto povm = ternary_extremal(best_prm[0], best_prm[0] + best_prm[1],
                                 best_prm[0] + best_prm[1] + best_prm[2]);
    rep.worst = povm ? *povm : QubitPovm{};
  }
  return rep;
}

void write_vertices_csv(const std::string& path,
                        const std::vector<PovmVertex>& vertices) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "base,perm,t0,r0x,r0z,t1,r1x,r1z\n";
  char buf[256];
  for (const auto& v : vertices) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  v.base_id, v.perm_id, v.coords[0], v.coords[1], v.coords[2],
                  v.coords[3], v.coords[4], v.coords[5]);
    out << buf;
  }
}

void write_facets_csv(const std::string& path, const std::vector<Facet>& facets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "f_t0,f_r0x,f_r0z,f_t1,f_r1x,f_r1z,offset\n";
  char buf[256];
  for (const auto& f : facets) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  f.normal[0], f.normal[1], f.normal[2], f.normal[3],
                  f.normal[4], f.normal[5], f.offset);
    out << buf;
  }
}

}  // namespace bellcert::simpoly
