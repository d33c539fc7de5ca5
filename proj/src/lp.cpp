#include "bellcert/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellcert::lp {

const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::Numerical: return "numerical";
  }
  return "?";
}

void Problem::resize(int nvars) {
  c = Eigen::VectorXd::Zero(nvars);
  eq_a.resize(0, nvars);
  eq_b.resize(0);
  le_a.resize(0, nvars);
  le_b.resize(0);
  lower = Eigen::VectorXd::Constant(nvars, -kInf);
  upper = Eigen::VectorXd::Constant(nvars, kInf);
}

void Problem::set_bounds(int j, double lo, double hi) {
  lower[j] = lo;
  upper[j] = hi;
}

namespace {
void append_row(Eigen::MatrixXd& a, Eigen::VectorXd& b,
                const Eigen::RowVectorXd& row, double rhs) {
  a.conservativeResize(a.rows() + 1, Eigen::NoChange);
  a.row(a.rows() - 1) = row;
  b.conservativeResize(b.size() + 1);
  b[b.size() - 1] = rhs;
}
}  // namespace

void Problem::add_eq_row(const Eigen::RowVectorXd& row, double rhs) {
  append_row(eq_a, eq_b, row, rhs);
}
void Problem::add_le_row(const Eigen::RowVectorXd& row, double rhs) {
  append_row(le_a, le_b, row, rhs);
}

namespace {

enum VStat : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeNB = 3 };

// Bounded-variable revised primal simplex with an explicit basis inverse.
// Column layout: [structural | slacks for <= rows | artificials].
class Simplex {
 public:
  Simplex(const Problem& p, const Options& opts) : opts_(opts) {
    n_ = p.nvars();
    m_eq_ = static_cast<int>(p.eq_b.size());
    m_le_ = static_cast<int>(p.le_b.size());
    m_ = m_eq_ + m_le_;
    ns_ = n_ + m_le_;
    ntot_ = ns_ + m_;

    a_.setZero(m_, ntot_);
    if (m_eq_ > 0) a_.topLeftCorner(m_eq_, n_) = p.eq_a;
    if (m_le_ > 0) {
      a_.bottomLeftCorner(m_le_, n_) = p.le_a;
      a_.block(m_eq_, n_, m_le_, m_le_).setIdentity();
    }
    b_.resize(m_);
    b_ << p.eq_b, p.le_b;

    lo_.setConstant(ntot_, 0.0);
    hi_.setConstant(ntot_, kInf);
    lo_.head(n_) = p.lower;
    hi_.head(n_) = p.upper;

    cost_.setZero(ntot_);
    cost_.head(n_) = p.c;

    x_.setZero(ntot_);
    stat_.assign(ntot_, kAtLower);
    basis_.assign(m_, -1);
    max_iters_ = opts.max_iters > 0 ? opts.max_iters : 50 * (m_ + ns_) + 2000;
  }

  Solution run(const Problem& p) {
    Solution sol;
    if (m_ == 0) {
      solve_unconstrained(sol, p);
      return sol;
    }
    if (!try_warm_start()) {
      Status s1 = phase1(sol);
      if (s1 != Status::Optimal) {
        sol.status = s1;
        sol.iterations = iters_;
        return sol;
      }
    } else {
      for (int j = ns_; j < ntot_; ++j) {
        lo_[j] = hi_[j] = 0.0;
        stat_[j] = kAtLower;
        x_[j] = 0.0;
      }
    }
    Status s2 = iterate(cost_);
    finalize(sol, p, s2);
    return sol;
  }

 private:
  const Options& opts_;
  int n_ = 0, m_eq_ = 0, m_le_ = 0, m_ = 0, ns_ = 0, ntot_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_, lo_, hi_, cost_, x_;
  std::vector<unsigned char> stat_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  int iters_ = 0, max_iters_ = 0, pivots_since_refactor_ = 0, degen_streak_ = 0;
  bool bland_ = false;

  void solve_unconstrained(Solution& sol, const Problem& p) {
    sol.x.resize(n_);
    for (int j = 0; j < n_; ++j) {
      double cj = p.c[j];
      if (cj > 0) {
        if (!std::isfinite(lo_[j])) { sol.status = Status::Unbounded; return; }
        sol.x[j] = lo_[j];
      } else if (cj < 0) {
        if (!std::isfinite(hi_[j])) { sol.status = Status::Unbounded; return; }
        sol.x[j] = hi_[j];
      } else {
        sol.x[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(hi_[j]) ? hi_[j] : 0.0);
      }
    }
    sol.status = Status::Optimal;
    sol.objective = p.c.dot(sol.x);
  }

  void set_nonbasic_start(int j) {
    bool lo_fin = std::isfinite(lo_[j]), hi_fin = std::isfinite(hi_[j]);
    if (lo_fin) {
      stat_[j] = kAtLower;
      x_[j] = lo_[j];
    } else if (hi_fin) {
      stat_[j] = kAtUpper;
      x_[j] = hi_[j];
    } else {
      stat_[j] = kFreeNB;
      x_[j] = 0.0;
    }
  }

  bool refactorize() {
    Eigen::MatrixXd bmat(m_, m_);
    for (int i = 0; i < m_; ++i) bmat.col(i) = a_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
    Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(m_, m_));
    if (!inv.allFinite()) return false;
    // quick singularity probe
    double probe = (bmat * inv.col(0) -
                    Eigen::VectorXd::Unit(m_, 0)).cwiseAbs().maxCoeff();
    if (!(probe < 1e-6)) return false;
    binv_ = std::move(inv);
    pivots_since_refactor_ = 0;
    recompute_basic_values();
    return true;
  }

  void recompute_basic_values() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < ntot_; ++j) {
      if (stat_[j] != kBasic && x_[j] != 0.0) rhs -= a_.col(j) * x_[j];
    }
    Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  bool try_warm_start() {
    if (!opts_.warm || opts_.warm->empty()) return false;
    const Basis& w = *opts_.warm;
    if (static_cast<int>(w.basic.size()) != m_ ||
        static_cast<int>(w.stat.size()) != ns_)
      return false;
    for (int j : w.basic)
      if (j < 0 || j >= ns_) return false;
    for (int i = 0; i < m_; ++i) basis_[i] = w.basic[i];
    for (int j = 0; j < ns_; ++j) {
      if (w.stat[j] == kBasic) {
        stat_[j] = kBasic;
      } else if (w.stat[j] == kAtUpper && std::isfinite(hi_[j])) {
        stat_[j] = kAtUpper;
        x_[j] = hi_[j];
      } else {
        set_nonbasic_start(j);
      }
    }
    if (!refactorize()) return false;
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (x_[j] < lo_[j] - 1e-7 || x_[j] > hi_[j] + 1e-7) return false;
    }
    return true;
  }

  Status phase1(Solution& sol) {
    for (int j = 0; j < ns_; ++j) set_nonbasic_start(j);
    Eigen::VectorXd r = b_;
    for (int j = 0; j < ns_; ++j)
      if (x_[j] != 0.0) r -= a_.col(j) * x_[j];

    Eigen::VectorXd pcost = Eigen::VectorXd::Zero(ntot_);
    binv_.setIdentity(m_, m_);
    for (int i = 0; i < m_; ++i) {
      int aj = ns_ + i;
      double s = (r[i] >= 0.0) ? 1.0 : -1.0;
      a_(i, aj) = s;
      binv_(i, i) = s;
      basis_[i] = aj;
      stat_[aj] = kBasic;
      x_[aj] = std::abs(r[i]);
      pcost[aj] = 1.0;
    }

    Status st = iterate(pcost);
    if (st != Status::Optimal)
      return st == Status::Unbounded ? Status::Numerical : st;

    double infeas = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= ns_) infeas += std::abs(x_[basis_[i]]);
    if (infeas > 1e-7) {
      extract_farkas(sol, pcost);
      return Status::Infeasible;
    }

    // pivot zero-level artificials out where the row allows it
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < ns_) continue;
      int pick = -1;
      double best = 1e-7;
      for (int j = 0; j < ns_; ++j) {
        if (stat_[j] == kBasic || lo_[j] == hi_[j]) continue;
        double wij = binv_.row(i).dot(a_.col(j));
        if (std::abs(wij) > best) {
          best = std::abs(wij);
          pick = j;
        }
      }
      if (pick >= 0) pivot_at_zero(i, pick);
    }
    // freeze artificials; dependent rows keep theirs basic at level zero
    for (int j = ns_; j < ntot_; ++j) {
      lo_[j] = hi_[j] = 0.0;
      if (stat_[j] != kBasic) {
        stat_[j] = kAtLower;
        x_[j] = 0.0;
      }
    }
    return Status::Optimal;
  }

  // duals of the phase-1 optimum certify emptiness:
  //   y'b - sup_{l<=x<=u} y'Ax = phase-1 objective > 0
  void extract_farkas(Solution& sol, const Eigen::VectorXd& pcost) {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = pcost[basis_[i]];
    Eigen::VectorXd y = binv_.transpose() * cb;
    double gap = y.dot(b_);
    for (int j = 0; j < ns_; ++j) {
      double q = y.dot(a_.col(j));
      double term;
      if (q > 0) {
        term = std::isfinite(hi_[j]) ? q * hi_[j] : kInf;
      } else if (q < 0) {
        term = std::isfinite(lo_[j]) ? q * lo_[j] : kInf;
      } else {
        term = 0.0;
      }
      gap -= term;
    }
    sol.farkas_eq = y.head(m_eq_);
    sol.farkas_le = y.tail(m_le_);
    sol.farkas_gap = std::isfinite(gap) ? gap : 0.0;
  }

  void pivot_at_zero(int row, int enter) {
    Eigen::VectorXd w = binv_ * a_.col(enter);
    int leave_col = basis_[row];
    double wr = w[row];
    binv_.row(row) /= wr;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = w[i];
      if (f != 0.0) binv_.row(i) -= f * binv_.row(row);
    }
    basis_[row] = enter;
    stat_[enter] = kBasic;
    stat_[leave_col] = kAtLower;
    x_[leave_col] = 0.0;
    if (++pivots_since_refactor_ >= 100) refactorize();
  }

  Status iterate(const Eigen::VectorXd& cost) {
    bland_ = false;
    degen_streak_ = 0;
    while (true) {
      if (++iters_ > max_iters_) return Status::IterationLimit;

      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      Eigen::VectorXd y = binv_.transpose() * cb;
      Eigen::RowVectorXd d = cost.transpose() - y.transpose() * a_;

      int enter = -1;
      double enter_score = opts_.opt_tol;
      double sigma = +1.0;
      for (int j = 0; j < ntot_; ++j) {
        if (stat_[j] == kBasic || lo_[j] == hi_[j]) continue;
        double dj = d[j];
        double score;
        double dir;
        if (stat_[j] == kAtLower && dj < -opts_.opt_tol) {
          score = -dj;
          dir = +1.0;
        } else if (stat_[j] == kAtUpper && dj > opts_.opt_tol) {
          score = dj;
          dir = -1.0;
        } else if (stat_[j] == kFreeNB && std::abs(dj) > opts_.opt_tol) {
          score = std::abs(dj);
          dir = dj < 0 ? +1.0 : -1.0;
        } else {
          continue;
        }
        if (bland_) {
          enter = j;
          sigma = dir;
          break;
        }
        if (score > enter_score) {
          enter_score = score;
          enter = j;
          sigma = dir;
        }
      }
      if (enter < 0) return Status::Optimal;

      Eigen::VectorXd w = binv_ * a_.col(enter);

      double t_flip = hi_[enter] - lo_[enter];
      if (!std::isfinite(t_flip)) t_flip = kInf;

      double t_best = kInf;
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        double delta = -sigma * w[i];  // rate of change of basic i
        int bj = basis_[i];
        double lim;
        if (delta > 1e-11) {
          if (!std::isfinite(hi_[bj])) continue;
          lim = (hi_[bj] - x_[bj]) / delta;
        } else if (delta < -1e-11) {
          if (!std::isfinite(lo_[bj])) continue;
          lim = (lo_[bj] - x_[bj]) / delta;
        } else {
          continue;
        }
        if (lim < 0.0) lim = 0.0;
        bool take;
        if (lim < t_best - 1e-10) {
          take = true;
        } else if (lim < t_best + 1e-10 && leave >= 0) {
          take = bland_ ? (basis_[i] < basis_[leave])
                        : (std::abs(w[i]) > std::abs(w[leave]));
        } else {
          take = leave < 0 && lim <= t_best;
        }
        if (take) {
          t_best = std::min(t_best, lim);
          leave = i;
        }
      }

      if (leave < 0 && !std::isfinite(t_flip)) return Status::Unbounded;

      bool flip = t_flip < t_best - 1e-12 || leave < 0;
      double t = flip ? t_flip : t_best;

      if (t > 1e-11) {
        degen_streak_ = 0;
        bland_ = false;
      } else if (++degen_streak_ > 2 * m_ + 100) {
        bland_ = true;
      }

      if (t != 0.0) {
        for (int i = 0; i < m_; ++i) x_[basis_[i]] -= sigma * t * w[i];
      }

      if (flip) {
        stat_[enter] = (stat_[enter] == kAtLower) ? kAtUpper : kAtLower;
        x_[enter] = (stat_[enter] == kAtLower) ? lo_[enter] : hi_[enter];
        continue;
      }

      // basis change
      x_[enter] += sigma * t;
      int leave_col = basis_[leave];
      double delta_l = -sigma * w[leave];
      stat_[leave_col] = (delta_l > 0) ? kAtUpper : kAtLower;
      x_[leave_col] = (delta_l > 0) ? hi_[leave_col] : lo_[leave_col];

      // ratio-test thresholds guarantee |w[leave]| > 1e-11
      double wr = w[leave];
      binv_.row(leave) /= wr;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        double f = w[i];
        if (f != 0.0) binv_.row(i) -= f * binv_.row(leave);
      }
      basis_[leave] = enter;
      stat_[enter] = kBasic;

      if (++pivots_since_refactor_ >= 100) {
        if (!refactorize()) return Status::Numerical;
      }
    }
  }

  void finalize(Solution& sol, const Problem& p, Status st) {
    sol.status = st;
    sol.iterations = iters_;
    if (st != Status::Optimal && st != Status::IterationLimit) return;

    if (!refactorize()) {
      sol.status = Status::Numerical;
      return;
    }
    sol.x = x_.head(n_);
    sol.objective = p.c.dot(sol.x);

    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
    Eigen::VectorXd y = binv_.transpose() * cb;
    sol.dual_eq = y.head(m_eq_);
    sol.dual_le = y.tail(m_le_);

    double res = 0.0;
    if (m_eq_ > 0)
      res = std::max(res, (p.eq_a * sol.x - p.eq_b).cwiseAbs().maxCoeff());
    if (m_le_ > 0)
      res = std::max(res, (p.le_a * sol.x - p.le_b).maxCoeff());
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(p.lower[j])) res = std::max(res, p.lower[j] - sol.x[j]);
      if (std::isfinite(p.upper[j])) res = std::max(res, sol.x[j] - p.upper[j]);
    }
    sol.primal_residual = std::max(res, 0.0);
    if (st == Status::Optimal && sol.primal_residual > 1e-7)
      sol.status = Status::Numerical;

    sol.basis.basic = basis_;
    sol.basis.stat.assign(stat_.begin(), stat_.begin() + ns_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= ns_) {
        sol.basis = Basis{};  // artificial stuck in basis: not reusable
        break;
      }
    }
  }
};

}  // namespace

Solution solve(const Problem& p, const Options& opts) {
  if (p.eq_a.cols() != p.c.size() || p.le_a.cols() != p.c.size()) {
    throw std::invalid_argument("lp::solve: inconsistent problem dimensions");
  }
  Simplex s(p, opts);
  Solution sol = s.run(p);
  if (sol.status == Status::Numerical || sol.status == Status::IterationLimit) {
    Options o2 = opts;
    o2.warm = nullptr;
    o2.opt_tol = std::max(opts.opt_tol, 1e-8);
    o2.max_iters = 400000;
    Simplex s2(p, o2);
    Solution sol2 = s2.run(p);
    if (sol2.status == Status::Optimal || sol2.status == Status::Infeasible)
      return sol2;
  }
  return sol;
}

}  // namespace bellcert::lp
