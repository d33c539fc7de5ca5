#include "bellcert/innn22.hpp"

#include "bellcert/jointmeas.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace bellcert::innn22 {

CgFunctional cg_innn22(int n) {
  if (n < 2) throw std::invalid_argument("cg_innn22: need N >= 2");
  CgFunctional f;
  f.n = n;
  f.joint.setZero(n, n);
  for (int x = 1; x <= n; ++x) {
    for (int y = 1; y <= n; ++y) {
      int s = x + y;
      if (s <= n + 1)
        f.joint(x - 1, y - 1) = 1.0;
      else if (s == n + 2)
        f.joint(x - 1, y - 1) = -1.0;
    }
  }
  f.alice = Eigen::VectorXd::Zero(n);
  f.alice[0] = -1.0;
  f.bob.resize(n);
  for (int y = 1; y <= n; ++y) f.bob[y - 1] = -(n - y);
  return f;
}

double local_bound(const CgFunctional& f) {
  if (f.n > 20) throw std::invalid_argument("local_bound: N too large");
  const int n = f.n;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t a = 0; a < (1u << n); ++a) {
    // Alice part fixed; maximize Bob bits independently
    double base = 0.0;
    for (int x = 0; x < n; ++x)
      if ((a >> x) & 1) base += f.alice[x];
    double v = base;
    for (int y = 0; y < n; ++y) {
      double gain = f.bob[y];
      for (int x = 0; x < n; ++x)
        if ((a >> x) & 1) gain += f.joint(x, y);
      v += std::max(gain, 0.0);
    }
    best = std::max(best, v);
  }
  return best;
}

double evaluate(const CgFunctional& f, const Behavior& p) {
  double v = 0.0;
  for (int x = 0; x < f.n; ++x) {
    for (int y = 0; y < f.n; ++y) v += f.joint(x, y) * p.at(x, y, 0, 0);
  }
  for (int x = 0; x < f.n; ++x) v += f.alice[x] * p.alice_marginal(x, 0);
  for (int y = 0; y < f.n; ++y) v += f.bob[y] * p.bob_marginal(y, 0);
  return v;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd positive_part_projector(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(g.rows(), g.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 0.0)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  }
  return p;
}

// tr_B(rho (I x S)) and tr_A(rho (S x I)) for dim x dim parties
Eigen::MatrixXd trace_out_b(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& s,
                            int dim) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
          out(i, j) += rho(i * dim + k, j * dim + l) * s(l, k);
  return out;
}

Eigen::MatrixXd trace_out_a(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& s,
                            int dim) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          out(k, l) += rho(i * dim + k, j * dim + l) * s(j, i);
  return out;
}

double functional_value(const CgFunctional& f, const Eigen::MatrixXd& rho,
                        const std::vector<Eigen::MatrixXd>& alice,
                        const std::vector<Eigen::MatrixXd>& bob, double eta,
                        int dim) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  double v = 0.0;
  for (int x = 0; x < f.n; ++x) {
    for (int y = 0; y < f.n; ++y) {
      if (f.joint(x, y) == 0.0) continue;
      v += f.joint(x, y) * eta * kron(alice[x], bob[y]).cwiseProduct(rho).sum();
    }
    if (f.alice[x] != 0.0)
      v += f.alice[x] * eta * kron(alice[x], id).cwiseProduct(rho).sum();
  }
  for (int y = 0; y < f.n; ++y) {
    if (f.bob[y] != 0.0)
      v += f.bob[y] * kron(id, bob[y]).cwiseProduct(rho).sum();
  }
  return v;
}

}  // namespace

Behavior lossy_behavior(const Eigen::MatrixXd& rho,
                        const std::vector<Eigen::MatrixXd>& base_a,
                        const std::vector<Eigen::MatrixXd>& bob, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("lossy_behavior: eta must lie in [0,1]");
  }
  const int dim = static_cast<int>(base_a[0].rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& m : base_a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    if (es.eigenvalues().minCoeff() < -1e-9 ||
        es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
      throw std::invalid_argument("lossy_behavior: base effect outside [0, I]");
  }
  Scenario sc;
  sc.alice_outcomes.assign(base_a.size(), 2);
  sc.bob_outcomes.assign(bob.size(), 2);
  Behavior out = Behavior::zeros(sc);
  for (size_t x = 0; x < base_a.size(); ++x) {
    Eigen::MatrixXd a0 = eta * base_a[x];
    Eigen::MatrixXd a1 = id - a0;
    for (size_t y = 0; y < bob.size(); ++y) {
      const Eigen::MatrixXd& b0 = bob[y];
      Eigen::MatrixXd b1 = id - b0;
      out.at(x, y, 0, 0) = kron(a0, b0).cwiseProduct(rho).sum();
      out.at(x, y, 0, 1) = kron(a0, b1).cwiseProduct(rho).sum();
      out.at(x, y, 1, 0) = kron(a1, b0).cwiseProduct(rho).sum();
      out.at(x, y, 1, 1) = kron(a1, b1).cwiseProduct(rho).sum();
    }
  }
  return out;
}

SeesawResult seesaw(int n, double eta, const SeesawOptions& opts) {
  if (n < 3) throw std::invalid_argument("seesaw: need N >= 3");
  const int dim = opts.dim > 0 ? opts.dim : n;
  const CgFunctional f = cg_innn22(n);
  const double bound = local_bound(f);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);

  SeesawResult best;
  best.n = n;
  best.eta = eta;
  best.dim = dim;
  best.bound = bound;
  best.seed = opts.seed;
  best.value = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_projector = [&](int rank) {
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    for (int r = 0; r < rank; ++r) p += q.col(r) * q.col(r).transpose();
    return p;
  };

  for (int restart = 0; restart < opts.restarts; ++restart) {
    std::vector<Eigen::MatrixXd> alice(n), bob(n);
    std::uniform_int_distribution<int> rank_dist(1, dim - 1);
    for (int x = 0; x < n; ++x) alice[x] = random_projector(rank_dist(rng));
    for (int y = 0; y < n; ++y) bob[y] = random_projector(rank_dist(rng));

    // maximally entangled start for the state; the eigenvector step replaces
    // it immediately
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim * dim);
    for (int i = 0; i < dim; ++i) psi[i * dim + i] = 1.0 / std::sqrt(dim);
    Eigen::MatrixXd rho = psi * psi.transpose();

    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
      // state step: top eigenvector of the Bell operator
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim * dim, dim * dim);
      for (int x = 0; x < n; ++x) {
        Eigen::MatrixXd sx = f.alice[x] * id;
        for (int y = 0; y < n; ++y)
          if (f.joint(x, y) != 0.0) sx += f.joint(x, y) * bob[y];
        w += eta * kron(alice[x], sx);
      }
      for (int y = 0; y < n; ++y)
        if (f.bob[y] != 0.0) w += f.bob[y] * kron(id, bob[y]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()));
      psi = es.eigenvectors().col(dim * dim - 1);
      rho = psi * psi.transpose();

      // Alice step
      for (int x = 0; x < n; ++x) {
        Eigen::MatrixXd sx = f.alice[x] * id;
        for (int y = 0; y < n; ++y)
          if (f.joint(x, y) != 0.0) sx += f.joint(x, y) * bob[y];
        alice[x] = positive_part_projector(trace_out_b(rho, sx, dim));
      }
      // Bob step
      for (int y = 0; y < n; ++y) {
        Eigen::MatrixXd ty = f.bob[y] * id;
        for (int x = 0; x < n; ++x)
          if (f.joint(x, y) != 0.0) ty += f.joint(x, y) * eta * alice[x];
        bob[y] = positive_part_projector(trace_out_a(rho, ty, dim));
      }

      double val = functional_value(f, rho, alice, bob, eta, dim);
      if (val < prev - 1e-9) {
        throw std::runtime_error("seesaw: objective decreased");
      }
      if (val - prev < opts.tol) {
        prev = val;
        break;
      }
      prev = val;
    }

    if (prev > best.value) {
      best.value = prev;
      best.best_restart = restart;
      best.psi = psi;
      best.alice = alice;
      best.bob = bob;
    }
  }

  best.margin = best.value - bound;
  // independent re-evaluation through the behavior path
  Behavior beh = lossy_behavior(best.psi * best.psi.transpose(), best.alice,
                                best.bob, eta);
  best.recheck_residual = std::abs(evaluate(f, beh) - best.value);
  best.found = best.margin > 1e-7;
  return best;
}

CompatReport compat_certificate(const std::vector<Eigen::MatrixXd>& base_a,
                                int n_settings) {
  const int n = n_settings;
  if (static_cast<int>(base_a.size()) != n || n < 2) {
    throw std::invalid_argument("compat_certificate: need the N base effects");
  }
  const int dim = static_cast<int>(base_a[0].rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const double eta = 1.0 / (n - 1);

  CompatReport rep;
  rep.n = n;
  rep.eta = eta;
  rep.all_ok = true;

  for (int skip = 0; skip < n; ++skip) {
    CompatReport::Entry e;
    std::vector<Eigen::MatrixXd> subset;
    for (int x = 0; x < n; ++x) {
      if (x == skip) continue;
      e.subset.push_back(x);
      subset.push_back(base_a[x]);
    }
    const int k = n - 1;
    auto parent = jointmeas::lossy_parent_elements(subset, id);

    // positivity and completeness
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& m : parent) {
      sum += m;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    e.min_eigenvalue = min_eig;
    e.sum_residual = (sum - id).cwiseAbs().maxCoeff();

    // marginals against the lossy effects at eta = 1/k
    double worst = 0.0;
    for (int xi = 0; xi < k; ++xi) {
      Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(dim, dim);
      for (size_t a = 0; a < parent.size(); ++a)
        if (((a >> xi) & 1u) == 0) m0 += parent[a];
      worst = std::max(worst,
                       (m0 - (1.0 / k) * subset[xi]).cwiseAbs().maxCoeff());
      Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(dim, dim);
      for (size_t a = 0; a < parent.size(); ++a)
        if (((a >> xi) & 1u) == 1) m1 += parent[a];
      worst = std::max(
          worst, (m1 - (id - (1.0 / k) * subset[xi])).cwiseAbs().maxCoeff());
    }
    e.marginal_residual = worst;
    e.ok = e.marginal_residual <= 1e-12 && e.min_eigenvalue >= -1e-12 &&
           e.sum_residual <= 1e-12;
    rep.all_ok = rep.all_ok && e.ok;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

void write_witness(const std::string& path, const SeesawResult& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[128];
  out << "# I_NN22 seesaw witness\n";
  out << "# layout: scalar lines `key,value`; matrix blocks start with\n";
  out << "# `matrix,<name>,<rows>,<cols>` followed by one CSV row per matrix row\n";
  out << "n," << w.n << "\n";
  out << "dim," << w.dim << "\n";
  std::snprintf(buf, sizeof(buf), "eta,%.12g\n", w.eta);
  out << buf;
  std::snprintf(buf, sizeof(buf), "value,%.12g\n", w.value);
  out << buf;
  std::snprintf(buf, sizeof(buf), "local_bound,%.12g\n", w.bound);
  out << buf;
  std::snprintf(buf, sizeof(buf), "margin,%.12g\n", w.margin);
  out << buf;
  out << "seed," << w.seed << "\n";
  out << "best_restart," << w.best_restart << "\n";
  out << "matrix,psi," << w.psi.size() << ",1\n";
  for (int i = 0; i < w.psi.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g\n", w.psi[i]);
    out << buf;
  }
  auto dump = [&](const std::string& name, const Eigen::MatrixXd& m) {
    out << "matrix," << name << "," << m.rows() << "," << m.cols() << "\n";
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g%s", m(i, j),
                      j + 1 == m.cols() ? "\n" : ",");
        out << buf;
      }
    }
  };
  for (size_t x = 0; x < w.alice.size(); ++x)
    dump("alice_base_" + std::to_string(x), w.alice[x]);
  for (size_t y = 0; y < w.bob.size(); ++y)
    dump("bob_" + std::to_string(y), w.bob[y]);
}

}  // namespace bellcert::innn22
