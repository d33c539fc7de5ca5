#include "bellcert/socp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace bellcert::socp {

namespace {

constexpr double kBigStep = 1e30;

struct Blocks {
  int nlin = 0;
  std::vector<int> offs;  // SOC block offsets
  std::vector<int> dims;
};

double soc_det(const Eigen::VectorXd& u, int o, int d) {
  return u[o] * u[o] - u.segment(o + 1, d - 1).squaredNorm();
}

// largest t with u + t*du staying in the cone (capped)
double soc_step(const Eigen::VectorXd& u, const Eigen::VectorXd& du, int o, int d) {
  double a = du[o] * du[o] - du.segment(o + 1, d - 1).squaredNorm();
  double b = 2.0 * (u[o] * du[o] - u.segment(o + 1, d - 1).dot(du.segment(o + 1, d - 1)));
  double c = soc_det(u, o, d);
  double t_f = kBigStep;
  if (std::abs(a) < 1e-14) {
    if (b < -1e-14) t_f = -c / b;
  } else {
    double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      double r1 = (-b - sq) / (2.0 * a);
      double r2 = (-b + sq) / (2.0 * a);
      if (r1 > r2) std::swap(r1, r2);
      if (r1 > 0.0)
        t_f = r1;
      else if (r2 > 0.0 && a < 0.0)
        t_f = r2;
      else if (r2 > 0.0 && c + 1e-300 > 0 && b < 0.0)
        t_f = r2;
    }
  }
  double t_h = du[o] < 0.0 ? -u[o] / du[o] : kBigStep;
  return std::max(0.0, std::min(t_f, t_h));
}

double max_step(const Blocks& bl, const Eigen::VectorXd& u,
                const Eigen::VectorXd& du) {
  double t = kBigStep;
  for (int i = 0; i < bl.nlin; ++i)
    if (du[i] < 0.0) t = std::min(t, -u[i] / du[i]);
  for (size_t k = 0; k < bl.offs.size(); ++k)
    t = std::min(t, soc_step(u, du, bl.offs[k], bl.dims[k]));
  return t;
}

// Jordan product u o v blockwise
Eigen::VectorXd jordan(const Blocks& bl, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size());
  for (int i = 0; i < bl.nlin; ++i) out[i] = u[i] * v[i];
  for (size_t k = 0; k < bl.offs.size(); ++k) {
    int o = bl.offs[k], d = bl.dims[k];
    out[o] = u.segment(o, d).dot(v.segment(o, d));
    out.segment(o + 1, d - 1) =
        u[o] * v.segment(o + 1, d - 1) + v[o] * u.segment(o + 1, d - 1);
  }
  return out;
}

// solve u o w = v
Eigen::VectorXd jordan_div(const Blocks& bl, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size());
  for (int i = 0; i < bl.nlin; ++i) out[i] = v[i] / u[i];
  for (size_t k = 0; k < bl.offs.size(); ++k) {
    int o = bl.offs[k], d = bl.dims[k];
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(d, d) * u[o];
    l.col(0) = u.segment(o, d);
    l.row(0) = u.segment(o, d).transpose();
    out.segment(o, d) = l.partialPivLu().solve(v.segment(o, d));
  }
  return out;
}

struct Scaling {
  Eigen::VectorXd wlin;               // sqrt(x_i/s_i)
  std::vector<Eigen::MatrixXd> wsoc;  // per-cone NT scaling matrix W
  Eigen::VectorXd lambda;             // W^{-1} x = W s
};

Scaling nt_scaling(const Blocks& bl, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& s) {
  Scaling sc;
  sc.wlin.resize(bl.nlin);
  sc.lambda.resize(x.size());
  for (int i = 0; i < bl.nlin; ++i) {
    sc.wlin[i] = std::sqrt(x[i] / s[i]);
    sc.lambda[i] = std::sqrt(x[i] * s[i]);
  }
  for (size_t k = 0; k < bl.offs.size(); ++k) {
    int o = bl.offs[k], d = bl.dims[k];
    double dx = soc_det(x, o, d), ds = soc_det(s, o, d);
    Eigen::VectorXd xb = x.segment(o, d) / std::sqrt(dx);
    Eigen::VectorXd sb = s.segment(o, d) / std::sqrt(ds);
    double gamma = std::sqrt(0.5 * (1.0 + xb.dot(sb)));
    Eigen::VectorXd wb(d);
    wb[0] = (xb[0] + sb[0]) / (2.0 * gamma);
    wb.tail(d - 1) = (xb.tail(d - 1) - sb.tail(d - 1)) / (2.0 * gamma);
    // scaling point has unit determinant; W = eta * P(sqrt(wb)) with the
    // Jordan square root q = (wb + e)/sqrt(2(wb0 + 1))
    Eigen::VectorXd q = wb;
    q[0] += 1.0;
    q /= std::sqrt(2.0 * (wb[0] + 1.0));
    double eta = std::pow(dx / ds, 0.25);
    Eigen::MatrixXd j = -Eigen::MatrixXd::Identity(d, d);
    j(0, 0) = 1.0;
    Eigen::MatrixXd w = eta * (2.0 * q * q.transpose() - j);
    sc.wsoc.push_back(w);
    sc.lambda.segment(o, d) = w * s.segment(o, d);
  }
  return sc;
}

Eigen::VectorXd apply_w(const Blocks& bl, const Scaling& sc,
                        const Eigen::VectorXd& v, bool inverse) {
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < bl.nlin; ++i)
    out[i] = inverse ? v[i] / sc.wlin[i] : v[i] * sc.wlin[i];
  for (size_t k = 0; k < bl.offs.size(); ++k) {
    int o = bl.offs[k], d = bl.dims[k];
    if (inverse) {
      out.segment(o, d) = sc.wsoc[k].partialPivLu().solve(v.segment(o, d));
    } else {
      out.segment(o, d) = sc.wsoc[k] * v.segment(o, d);
    }
  }
  return out;
}

Eigen::VectorXd identity_element(const Blocks& bl, int n) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < bl.nlin; ++i) e[i] = 1.0;
  for (size_t k = 0; k < bl.offs.size(); ++k) e[bl.offs[k]] = 1.0;
  return e;
}

}  // namespace

Result solve(const Problem& p, const Options& opts) {
  const int n = p.nvars();
  Blocks bl;
  bl.nlin = p.nlin;
  {
    int off = p.nlin;
    for (int d : p.soc_dims) {
      if (d < 2) throw std::invalid_argument("socp: SOC dims must be >= 2");
      bl.offs.push_back(off);
      bl.dims.push_back(d);
      off += d;
    }
    if (off != n) throw std::invalid_argument("socp: cone dims mismatch nvars");
  }
  if (p.a.cols() != n || p.a.rows() != p.b.size()) {
    throw std::invalid_argument("socp: bad constraint dimensions");
  }

  // drop dependent rows (keeping a consistent system)
  Eigen::MatrixXd a = p.a;
  Eigen::VectorXd b = p.b;
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(p.a.transpose());
    qr.setThreshold(1e-12);
    int rank = static_cast<int>(qr.rank());
    if (rank < a.rows()) {
      std::vector<int> keep(qr.colsPermutation().indices().data(),
                            qr.colsPermutation().indices().data() + rank);
      Eigen::MatrixXd a2(rank, n);
      Eigen::VectorXd b2(rank);
      for (int i = 0; i < rank; ++i) {
        a2.row(i) = p.a.row(keep[i]);
        b2[i] = p.b[keep[i]];
      }
      a = a2;
      b = b2;
    }
  }
  const int m = static_cast<int>(a.rows());

  const double nu = bl.nlin + 2.0 * static_cast<double>(bl.offs.size());
  Eigen::VectorXd e = identity_element(bl, n);

  Result res;
  Eigen::VectorXd x = e, s = e, y = Eigen::VectorXd::Zero(m);

  const double bnorm = 1.0 + b.cwiseAbs().maxCoeff();
  const double cnorm = 1.0 + (p.c.size() ? p.c.cwiseAbs().maxCoeff() : 0.0);

  for (int it = 1; it <= opts.max_iters; ++it) {
    Eigen::VectorXd rp = b - a * x;
    Eigen::VectorXd rd = p.c - a.transpose() * y - s;
    double gap = x.dot(s);
    double mu = gap / nu;

    res.x = x;
    res.y = y;
    res.s = s;
    res.pobj = p.c.dot(x);
    res.dobj = b.dot(y);
    res.gap = gap;
    res.rp = rp.cwiseAbs().maxCoeff();
    res.rd = rd.cwiseAbs().maxCoeff();
    res.iters = it - 1;

    if (res.rp <= opts.tol_feas * bnorm && res.rd <= opts.tol_feas * cnorm &&
        (gap <= opts.tol_gap * nu ||
         gap <= 1e-9 * (1.0 + std::abs(res.pobj)))) {
      res.status = Status::Optimal;
      return res;
    }

    Scaling sc = nt_scaling(bl, x, s);

    // H = W^2 block-diagonal; form AHA' directly
    Eigen::MatrixXd aw(m, n);  // A * W
    for (int i = 0; i < bl.nlin; ++i) aw.col(i) = a.col(i) * sc.wlin[i];
    for (size_t k = 0; k < bl.offs.size(); ++k) {
      int o = bl.offs[k], d = bl.dims[k];
      aw.middleCols(o, d) = a.middleCols(o, d) * sc.wsoc[k];
    }
    Eigen::MatrixXd ahat = aw * aw.transpose();
    Eigen::LDLT<Eigen::MatrixXd> kkt(ahat);
    if (kkt.info() != Eigen::Success) {
      ahat.diagonal().array() += 1e-12 * (1.0 + ahat.diagonal().maxCoeff());
      kkt.compute(ahat);
      if (kkt.info() != Eigen::Success) {
        res.status = Status::Numerical;
        return res;
      }
    }

    auto solve_dir = [&](const Eigen::VectorXd& d_scaled, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dy, Eigen::VectorXd& ds) {
      // lambda o (W^{-1}dx + W ds) = d_scaled;  A'dy + ds = rd;  A dx = rp
      Eigen::VectorXd t = apply_w(bl, sc, jordan_div(bl, sc.lambda, d_scaled), false);
      Eigen::VectorXd hrd = apply_w(bl, sc, apply_w(bl, sc, rd, false), false);
      // H rd = W(W rd)
      dy = kkt.solve(rp - a * t + a * hrd);
      ds = rd - a.transpose() * dy;
      Eigen::VectorXd hds = apply_w(bl, sc, apply_w(bl, sc, ds, false), false);
      dx = t - hds;
    };

    // affine (predictor) direction
    Eigen::VectorXd daff = -jordan(bl, sc.lambda, sc.lambda);
    Eigen::VectorXd dxa(n), dya(m), dsa(n);
    solve_dir(daff, dxa, dya, dsa);
    double ap = max_step(bl, x, dxa);
    double ad = max_step(bl, s, dsa);
    double alpha_aff = std::min({1.0, ap, ad});
    double gap_aff = (x + alpha_aff * dxa).dot(s + alpha_aff * dsa);
    double sigma = std::pow(std::clamp(gap_aff / gap, 0.0, 1.0), 3.0);

    // combined direction with Mehrotra correction
    Eigen::VectorXd wx = apply_w(bl, sc, dxa, true);   // W^{-1} dx_aff
    Eigen::VectorXd wsd = apply_w(bl, sc, dsa, false);  // W ds_aff
    Eigen::VectorXd d = daff + sigma * mu * e - jordan(bl, wx, wsd);
    Eigen::VectorXd dx(n), dy(m), ds(n);
    solve_dir(d, dx, dy, ds);

    double step = 0.99 * std::min({max_step(bl, x, dx), max_step(bl, s, ds)});
    step = std::min(step, 1.0);
    if (!(step > 1e-13)) {
      res.status = Status::Numerical;
      return res;
    }
    x += step * dx;
    s += step * ds;
    y += step * dy;
  }
  res.status = Status::MaxIterations;
  return res;
}

}  // namespace bellcert::socp
