#include "bellcert/simpoly.hpp"

#include "bellcert/socp.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <stdexcept>

namespace bellcert::simpoly {

namespace {

constexpr int kDim = 7;  // homogenized coordinates (coords, 1)
using TightSet = std::bitset<128>;

struct Ray {
  Eigen::Matrix<double, 7, 1> v;
  TightSet tight;
};

// Double description of D = { z : h_i . z >= 0 } starting from full lineality.
// The extreme rays of D are the facets of conv(vertices) homogenized.
std::vector<Ray> extreme_rays(const std::vector<Eigen::Matrix<double, 7, 1>>& h,
                              double zero_tol) {
  std::vector<Eigen::Matrix<double, 7, 1>> lines;
  for (int i = 0; i < kDim; ++i) {
    Eigen::Matrix<double, 7, 1> e = Eigen::Matrix<double, 7, 1>::Zero();
    e[i] = 1.0;
    lines.push_back(e);
  }
  std::vector<Ray> rays;

  const int m = static_cast<int>(h.size());
  for (int i = 0; i < m; ++i) {
    const auto& hi = h[i];

    // fold one lineality direction into a ray if any line sees h
    int pick = -1;
    double best = zero_tol;
    for (int k = 0; k < static_cast<int>(lines.size()); ++k) {
      double s = std::abs(hi.dot(lines[k]));
      if (s > best) {
        best = s;
        pick = k;
      }
    }
    if (pick >= 0) {
      Eigen::Matrix<double, 7, 1> nu = lines[pick];
      if (hi.dot(nu) < 0) nu = -nu;
      double hnu = hi.dot(nu);
      lines.erase(lines.begin() + pick);
      for (auto& l : lines) l -= (hi.dot(l) / hnu) * nu;
      for (auto& r : rays) {
        r.v -= (hi.dot(r.v) / hnu) * nu;
        r.v.normalize();
        r.tight.set(i);
      }
      Ray nr;
      nr.v = nu.normalized();
      // nu is tight on every previously processed constraint, not on i
      for (int j = 0; j < i; ++j) nr.tight.set(j);
      rays.push_back(nr);
      continue;
    }

    std::vector<int> pos, neg, zer;
    std::vector<double> sv(rays.size());
    for (int k = 0; k < static_cast<int>(rays.size()); ++k) {
      double s = hi.dot(rays[k].v);
      sv[k] = s;
      if (s > zero_tol)
        pos.push_back(k);
      else if (s < -zero_tol)
        neg.push_back(k);
      else
        zer.push_back(k);
    }
    if (neg.empty()) {
      for (int k : zer) rays[k].tight.set(i);
      continue;
    }

    int lin_dim = static_cast<int>(lines.size());
    int need = kDim - lin_dim - 2;  // tight-set size for adjacency
    std::vector<Ray> next;
    next.reserve(pos.size() + zer.size() + pos.size() * neg.size() / 4 + 8);
    for (int k : pos) next.push_back(rays[k]);
    for (int k : zer) {
      next.push_back(rays[k]);
      next.back().tight.set(i);
    }
    for (int p : pos) {
      for (int n : neg) {
        TightSet common = rays[p].tight & rays[n].tight;
        if (static_cast<int>(common.count()) < need) continue;
        bool adjacent = true;
        for (int k = 0; k < static_cast<int>(rays.size()); ++k) {
          if (k == p || k == n) continue;
          if ((common & ~rays[k].tight).none()) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v = sv[p] * rays[n].v - sv[n] * rays[p].v;
        double norm = nr.v.norm();
        if (norm < 1e-14) continue;
        nr.v /= norm;
        nr.tight = common;
        nr.tight.set(i);
        next.push_back(nr);
      }
    }
    rays = std::move(next);
  }

  if (!lines.empty()) {
    throw std::runtime_error(
        "facets: vertex set does not span the 6-dimensional space");
  }
  return rays;
}

}  // namespace

std::vector<Facet> facets(const std::vector<PovmVertex>& vertices,
                          const FacetOptions& opts) {
  const int n = static_cast<int>(vertices.size());
  if (n > 120) throw std::invalid_argument("facets: too many vertices");

  std::vector<Eigen::Matrix<double, 7, 1>> h(n);
  for (int i = 0; i < n; ++i) {
    h[i].head<6>() = vertices[i].coords;
    h[i][6] = 1.0;
    if (opts.perturb) {
      // deterministic tiny offset shift; splits degenerate facets
      h[i][6] += 1e-9 * std::sin(1000.0 * (i + 1));
    }
  }

  std::vector<Ray> rays = extreme_rays(h, opts.zero_tol);

  std::vector<Facet> out;
  out.reserve(rays.size());
  for (const auto& r : rays) {
    Coords6 w = r.v.head<6>();
    double s = r.v[6];
    double nrm = w.norm();
    if (nrm < 1e-10) continue;  // the trivial inequality 0 <= 1, if it sneaks in
    Facet f;
    f.normal = -w / nrm;
    f.offset = s / nrm;
    // validate and count tight vertices against the unperturbed polytope
    int tight = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
      double val = f.normal.dot(v.coords) - f.offset;
      worst = std::max(worst, val);
      if (std::abs(val) <= 1e-7) ++tight;
    }
    if (worst > 1e-7) {
      throw std::runtime_error("facets: enumerated inequality cuts a vertex");
    }
    f.tight_count = tight;
    out.push_back(f);
  }

  // drop duplicates (antiparallel pairs cannot occur for a bounded polytope)
  std::sort(out.begin(), out.end(), [](const Facet& a, const Facet& b) {
    for (int k = 0; k < 6; ++k) {
      if (a.normal[k] != b.normal[k]) return a.normal[k] < b.normal[k];
    }
    return a.offset < b.offset;
  });
  std::vector<Facet> dedup;
  for (const auto& f : out) {
    if (!dedup.empty()) {
      const Facet& g = dedup.back();
      if ((g.normal - f.normal).cwiseAbs().maxCoeff() < 1e-8 &&
          std::abs(g.offset - f.offset) < 1e-8)
        continue;
    }
    dedup.push_back(f);
  }
  return dedup;
}

namespace {

// max over real 3-outcome POVMs of sum_b tr(H_b M_b), via the dual
//   min tr(Y)  s.t.  Y >= H_b  (2x2 real symmetric Y)
// In Bloch coordinates Y = (tY, w): min tY s.t. (tY - t_b, w - r_b) in Q3.
// Conic variables z_b = (tY - t_b, w - r_b) linked by equality rows.
std::pair<double, double> povm_linear_max(const std::array<RealQubitOperator, 3>& hb) {
  socp::Problem p;
  p.soc_dims = {3, 3, 3};
  p.c = Eigen::VectorXd::Zero(9);
  p.c[0] = 1.0;  // z_00 = tY - t_0
  p.a.setZero(6, 9);
  p.b.setZero(6);
  for (int b = 1; b < 3; ++b) {
    for (int k = 0; k < 3; ++k) {
      p.a(3 * (b - 1) + k, 3 * b + k) = 1.0;
      p.a(3 * (b - 1) + k, k) = -1.0;
    }
    p.b[3 * (b - 1) + 0] = hb[0].t - hb[b].t;
    p.b[3 * (b - 1) + 1] = hb[0].r.x1 - hb[b].r.x1;
    p.b[3 * (b - 1) + 2] = hb[0].r.x3 - hb[b].r.x3;
  }
  socp::Result res = socp::solve(p);
  if (!res.ok()) {
    throw std::runtime_error("povm_linear_max: cone solver failure");
  }
  // feasible rounding for the upper end of the bracket
  Vec2 w{res.x[1] + hb[0].r.x1, res.x[2] + hb[0].r.x3};
  double t_feas = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < 3; ++b)
    t_feas = std::max(t_feas, hb[b].t + (w - hb[b].r).norm());
  return {res.dobj + hb[0].t, t_feas};
}

}  // namespace

double shrink_factor_facets(const RealQubitOperator& zeta_b,
                            const std::vector<Facet>& facet_list,
                            double eta_tol) {
  double eta_min = 1.0;
  for (const auto& f : facet_list) {
    // H_b(eta) = eta F_b + (1-eta) tr(F_b) zeta ; F_2 = 0
    RealQubitOperator f0{2.0 * f.normal[0], {2.0 * f.normal[1], 2.0 * f.normal[2]}};
    RealQubitOperator f1{2.0 * f.normal[3], {2.0 * f.normal[4], 2.0 * f.normal[5]}};
    std::array<RealQubitOperator, 3> fb = {f0, f1, RealQubitOperator::zero()};

    auto value_at = [&](double eta) {
      std::array<RealQubitOperator, 3> hb;
      for (int b = 0; b < 3; ++b)
        hb[b] = fb[b] * eta + zeta_b * ((1.0 - eta) * fb[b].t);
      return povm_linear_max(hb);
    };

    // cheap skip: facet not binding at the current minimum
    auto [lo0, hi0] = value_at(eta_min);
    if (hi0 <= f.offset + 1e-9) continue;

    double lo = 0.0, hi = eta_min;
    while (hi - lo > eta_tol) {
      double mid = 0.5 * (lo + hi);
      auto [vlo, vhi] = value_at(mid);
      double v = 0.5 * (vlo + vhi);
      if (v <= f.offset)
        lo = mid;
      else
        hi = mid;
    }
    eta_min = std::min(eta_min, 0.5 * (lo + hi));
  }
  return eta_min;
}

}  // namespace bellcert::simpoly
