#include "bellcert/lp.hpp"
#include "bellcert/socp.hpp"

#include <doctest.h>

#include <random>

using namespace bellcert;

TEST_CASE("lp: simple bounded maximization") {
  // max x + 2y s.t. x + y <= 4, x <= 3, 0 <= x,y <= 3  -> (1,3), obj 7
  lp::Problem p(2);
  p.set_bounds(0, 0, 3);
  p.set_bounds(1, 0, 3);
  p.c << -1, -2;
  p.add_le_row((Eigen::RowVectorXd(2) << 1, 1).finished(), 4.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.objective == doctest::Approx(-7.0).epsilon(1e-9));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(3.0));
}

TEST_CASE("lp: equality system with free variable") {
  // min x0 s.t. x0 + x1 = 2, x0 - x1 = 0 -> x = (1,1)
  lp::Problem p(2);
  p.c << 1, 0;
  p.add_eq_row((Eigen::RowVectorXd(2) << 1, 1).finished(), 2.0);
  p.add_eq_row((Eigen::RowVectorXd(2) << 1, -1).finished(), 0.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("lp: infeasible system carries a Farkas certificate") {
  // x >= 0, x0 + x1 = 1, x0 + x1 = 2
  lp::Problem p(2);
  p.set_bounds(0, 0, lp::kInf);
  p.set_bounds(1, 0, lp::kInf);
  p.add_eq_row((Eigen::RowVectorXd(2) << 1, 1).finished(), 1.0);
  p.add_eq_row((Eigen::RowVectorXd(2) << 1, 1).finished(), 2.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::Infeasible);
  CHECK(sol.farkas_gap > 1e-9);
  // verify the certificate by hand: y.b > sup over bounds of y.Ax = 0 when
  // y.A <= 0 componentwise
  Eigen::VectorXd y = sol.farkas_eq;
  Eigen::VectorXd q = p.eq_a.transpose() * y;
  double ub = 0.0;
  for (int j = 0; j < 2; ++j) ub += std::max(q[j], 0.0) * 1e6;  // huge box
  CHECK(y.dot(p.eq_b) > ub - 1e-6);
}

TEST_CASE("lp: unbounded detection") {
  lp::Problem p(1);
  p.c << -1;  // max x, x >= 0 unbounded
  p.set_bounds(0, 0, lp::kInf);
  p.add_le_row((Eigen::RowVectorXd(1) << -1).finished(), 0.0);
  auto sol = lp::solve(p);
  CHECK(sol.status == lp::Status::Unbounded);
}

TEST_CASE("lp: redundant consistent rows are tolerated") {
  lp::Problem p(2);
  p.set_bounds(0, 0, 10);
  p.set_bounds(1, 0, 10);
  p.c << 1, 1;
  p.add_eq_row((Eigen::RowVectorXd(2) << 1, 1).finished(), 3.0);
  p.add_eq_row((Eigen::RowVectorXd(2) << 2, 2).finished(), 6.0);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
}

namespace {

// brute-force oracle: enumerate all bases of the standard-form LP
// min c'x, Ax = b, 0 <= x <= u (finite u), pick the best feasible vertex
double brute_force_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& c, const Eigen::VectorXd& u) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(m);
  // iterate subsets of size m plus bound patterns for nonbasic vars
  std::function<void(int, int)> rec_cols = [&](int start, int k) {
    if (k == m) {
      Eigen::MatrixXd bm(m, m);
      for (int i = 0; i < m; ++i) bm.col(i) = a.col(idx[i]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(bm);
      if (!lu.isInvertible()) return;
      // nonbasic at lower or upper: enumerate 2^(n-m) patterns
      std::vector<int> nb;
      for (int j = 0; j < n; ++j)
        if (std::find(idx.begin(), idx.begin() + m, j) == idx.begin() + m) nb.push_back(j);
      for (int mask = 0; mask < (1 << nb.size()); ++mask) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd rhs = b;
        for (size_t t = 0; t < nb.size(); ++t) {
          double v = (mask >> t) & 1 ? u[nb[t]] : 0.0;
          x[nb[t]] = v;
          rhs -= a.col(nb[t]) * v;
        }
        Eigen::VectorXd xb = lu.solve(rhs);
        bool ok = true;
        for (int i = 0; i < m; ++i) {
          if (xb[i] < -1e-9 || xb[i] > u[idx[i]] + 1e-9) ok = false;
          x[idx[i]] = xb[i];
        }
        if (ok) best = std::min(best, c.dot(x));
      }
      return;
    }
    for (int j = start; j < n; ++j) {
      idx[k] = j;
      rec_cols(j + 1, k + 1);
    }
  };
  rec_cols(0, 0);
  return best;
}

}  // namespace

TEST_CASE("lp: random problems agree with basis enumeration oracle") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int m = 2 + trial % 3;
    int n = m + 2 + (trial / 3) % 4;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = unif(rng);
    // feasible by construction
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0[j] = 0.5 + 0.4 * unif(rng);
    Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c[j] = unif(rng);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 2.0);

    lp::Problem p(n);
    p.c = c;
    for (int j = 0; j < n; ++j) p.set_bounds(j, 0.0, u[j]);
    for (int i = 0; i < m; ++i) p.add_eq_row(a.row(i), b[i]);
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    double oracle = brute_force_lp(a, b, c, u);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(sol.primal_residual < 1e-8);
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("lp: warm start reproduces the optimum") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd a(3, 8);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = unif(rng);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(8, 0.5);
  Eigen::VectorXd b = a * x0;
  lp::Problem p(8);
  for (int j = 0; j < 8; ++j) p.set_bounds(j, 0.0, 2.0);
  for (int j = 0; j < 8; ++j) p.c[j] = unif(rng);
  for (int i = 0; i < 3; ++i) p.add_eq_row(a.row(i), b[i]);
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::Optimal);

  // nearby rhs, warm-started
  lp::Problem p2 = p;
  p2.eq_b.array() += 1e-3;
  lp::Options opts;
  opts.warm = &sol.basis;
  auto sol2 = lp::solve(p2, opts);
  REQUIRE(sol2.status == lp::Status::Optimal);
  auto cold = lp::solve(p2);
  CHECK(sol2.objective == doctest::Approx(cold.objective).epsilon(1e-9));
  CHECK(sol2.iterations <= cold.iterations);
}

TEST_CASE("socp: projection onto a shifted disk") {
  // min tY s.t. (tY - t_b, w - r_b) in Q3 for one shifted cone:
  // optimum tY = |(1,1)| = sqrt(2) at w = 0 forced by two extra rows
  socp::Problem p;
  p.soc_dims = {3};
  p.c = Eigen::VectorXd::Zero(3);
  p.c[0] = 1.0;
  p.a.setZero(2, 3);
  p.a(0, 1) = 1.0;
  p.a(1, 2) = 1.0;
  p.b.resize(2);
  p.b << -1.0, -1.0;  // z1 = w1 - 1 = -1, z2 = w2 - 1 = -1
  auto res = socp::solve(p);
  REQUIRE(res.ok());
  CHECK(res.pobj == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(std::abs(res.pobj - res.dobj) < 1e-8);
}

TEST_CASE("socp: random orthant LPs match the simplex") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + trial % 3, n = m + 3;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = unif(rng);
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.5);
    for (int j = 0; j < n; ++j) x0[j] += 0.3 * unif(rng);
    Eigen::VectorXd b = a * x0;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c[j] = unif(rng) + 1.5;  // bounded below on the orthant

    socp::Problem sp;
    sp.nlin = n;
    sp.c = c;
    sp.a = a;
    sp.b = b;
    auto sres = socp::solve(sp);
    REQUIRE(sres.ok());

    lp::Problem lpp(n);
    lpp.c = c;
    for (int j = 0; j < n; ++j) lpp.set_bounds(j, 0.0, lp::kInf);
    for (int i = 0; i < m; ++i) lpp.add_eq_row(a.row(i), b[i]);
    auto lres = lp::solve(lpp);
    REQUIRE(lres.status == lp::Status::Optimal);
    CHECK(sres.pobj == doctest::Approx(lres.objective).epsilon(1e-6));
  }
}
