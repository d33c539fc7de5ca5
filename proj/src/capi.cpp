#include "bellcert.h"

#include "bellcert/analytic.hpp"
#include "bellcert/glue.hpp"
#include "bellcert/innn22.hpp"
#include "bellcert/jointmeas.hpp"
#include "bellcert/lhvlp.hpp"
#include "bellcert/simpoly.hpp"
#include "bellcert/steer.hpp"
#include "bellcert/sweep.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace {

thread_local std::string g_last_error;

bc_status fail(bc_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <class F>
bc_status guarded(F&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(BC_EINVAL, e.what());
  } catch (const std::runtime_error& e) {
    return fail(BC_ESOLVER, e.what());
  } catch (const std::exception& e) {
    return fail(BC_EINTERNAL, e.what());
  }
}

using namespace bellcert;

}  // namespace

extern "C" {

struct bc_chain {
  sweep::Chain chain;
};

struct bc_certificate {
  sweep::Certificate cert;
};

const char* bc_version(void) { return "bellcert 1.0.0"; }

const char* bc_last_error(void) { return g_last_error.c_str(); }

bc_status bc_hollow_triangle(double eta, bc_hollow_report* out) {
  if (!out) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    auto rep = jointmeas::hollow_triangle_check(eta);
    for (int i = 0; i < 3; ++i) out->pair_jm[i] = rep.pair_jm[i] ? 1 : 0;
    out->triple_jm = rep.triple_jm ? 1 : 0;
    out->is_hollow = rep.is_hollow ? 1 : 0;
    return BC_OK;
  });
}

bc_status bc_jm_threshold(int family, double tol, double* lo, double* hi) {
  if (!lo || !hi) return fail(BC_EINVAL, "null output");
  if (family != 0 && family != 1) return fail(BC_EINVAL, "family must be 0 or 1");
  return guarded([&] {
    auto fam = [family](double eta) {
      auto trine = trine_povm(eta);
      return family == 0 ? std::vector<QubitPovm>{trine[0], trine[1]}
                         : std::vector<QubitPovm>{trine[0], trine[1], trine[2]};
    };
    auto res = jointmeas::jm_threshold(fam, tol > 0 ? tol : 1e-5);
    *lo = res.lo;
    *hi = res.hi;
    return BC_OK;
  });
}

bc_status bc_decompose_trine(double eta, int* feasible, double* metric) {
  if (!feasible || !metric) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    auto res = simpoly::decompose_trine(eta);
    *feasible = res.feasible ? 1 : 0;
    *metric = res.feasible ? res.strategy->residual : res.overshoot;
    return BC_OK;
  });
}

bc_status bc_shrink_factor(double alpha, const bc_shrink_opts* opts,
                           double* eta_b) {
  if (!eta_b) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    simpoly::GridOptions g;
    if (opts) {
      if (opts->ternary_step_deg > 0) g.ternary_step_deg = opts->ternary_step_deg;
      if (opts->binary_step_deg > 0) g.binary_step_deg = opts->binary_step_deg;
      g.refine = opts->refine != 0;
    }
    auto rep = simpoly::shrink_factor(zeta(alpha), simpoly::vertex_set(), g);
    *eta_b = rep.eta_b;
    return BC_OK;
  });
}

bc_status bc_shrink_factor_facets(double alpha, double* eta_b,
                                  long* facet_count) {
  if (!eta_b) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    auto fl = simpoly::facets(simpoly::vertex_set());
    if (facet_count) *facet_count = static_cast<long>(fl.size());
    *eta_b = simpoly::shrink_factor_facets(zeta(alpha), fl);
    return BC_OK;
  });
}

bc_status bc_export_polytope(const char* vertices_csv, const char* facets_csv) {
  return guarded([&] {
    auto vs = simpoly::vertex_set();
    if (vertices_csv && *vertices_csv) simpoly::write_vertices_csv(vertices_csv, vs);
    if (facets_csv && *facets_csv) {
      auto fl = simpoly::facets(vs);
      simpoly::write_facets_csv(facets_csv, fl);
    }
    return BC_OK;
  });
}

bc_status bc_max_eta(double theta, double phi, double alpha, double* eta) {
  if (!eta) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *eta = lhvlp::max_eta_alpha(theta, phi, alpha);
    return BC_OK;
  });
}

bc_status bc_eta_bar(double theta, double phi, double* eta,
                     double* winner_alpha) {
  if (!eta) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    auto res = lhvlp::eta_bar(theta, phi);
    *eta = res.eta;
    if (winner_alpha) *winner_alpha = res.winner_alpha;
    return BC_OK;
  });
}

bc_status bc_chsh_max(double theta, double phi, double* value) {
  if (!value) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *value = analytic::horodecki_chsh(schmidt_state(theta, phi)).value;
    return BC_OK;
  });
}

bc_status bc_theta_star(double eta_star, double* theta) {
  if (!theta) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *theta = analytic::theta_star(eta_star);
    return BC_OK;
  });
}

bc_status bc_small_theta_bound(double theta, double* eta) {
  if (!eta) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *eta = analytic::small_theta_bound(theta);
    return BC_OK;
  });
}

bc_status bc_v_phi_step(double dphi_rad, double* v) {
  if (!v) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *v = glue::v_phi_step(dphi_rad);
    return BC_OK;
  });
}

bc_status bc_eta_theta_step(double theta, double theta_i, double eta_i,
                            double* eta) {
  if (!eta) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *eta = glue::eta_theta_step(theta, theta_i, eta_i);
    return BC_OK;
  });
}

bc_status bc_steer_roundtrip(double theta, double phi, double* residual) {
  if (!residual) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    auto asm_in = steer::assemblage(schmidt_state(theta, phi), bob_finite_set());
    auto rec = steer::ghjw_reconstruct(steer::realify(asm_in));
    auto asm_out = steer::assemblage(rec.state, rec.bob);
    double worst = 0.0;
    for (int y = 0; y < asm_in.settings(); ++y) {
      for (int b = 0; b < asm_in.outcomes[y]; ++b) {
        RealQubitOperator d = asm_in.sigma[y][b] - asm_out.sigma[y][b];
        worst = std::max(worst, std::max(std::abs(d.t), d.r.norm()));
      }
    }
    *residual = worst;
    return BC_OK;
  });
}

bc_status bc_chain_run(double alpha, double theta0, double eps,
                       double dphi_deg, double phimax_deg, double target,
                       const char* resume_csv, int verbose, bc_chain** out) {
  if (!out) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    sweep::ChainOptions opts;
    opts.alpha = alpha;
    opts.theta0 = theta0;
    opts.eps = eps;
    opts.dphi_deg = dphi_deg;
    opts.phimax_deg = phimax_deg;
    opts.target = target;
    opts.verbose = verbose != 0;
    if (resume_csv && *resume_csv) opts.resume = sweep::read_chain_csv(resume_csv);
    auto* h = new bc_chain{sweep::run_chain(opts)};
    *out = h;
    return BC_OK;
  });
}

int bc_chain_length(const bc_chain* c) {
  return c ? static_cast<int>(c->chain.points.size()) : 0;
}

bc_status bc_chain_point(const bc_chain* c, int i, double* theta, double* eta,
                         double* phi_min) {
  if (!c || i < 0 || i >= static_cast<int>(c->chain.points.size()))
    return fail(BC_EINVAL, "chain index out of range");
  const auto& p = c->chain.points[i];
  if (theta) *theta = p.theta;
  if (eta) *eta = p.eta_theta;
  if (phi_min) *phi_min = p.phi_min;
  return BC_OK;
}

int bc_chain_aborted(const bc_chain* c) {
  return c && c->chain.aborted ? 1 : 0;
}

double bc_chain_certified_low(const bc_chain* c) {
  return c ? c->chain.certified_low : 0.0;
}

bc_status bc_chain_write_csv(const bc_chain* c, const char* path) {
  if (!c || !path) return fail(BC_EINVAL, "null argument");
  return guarded([&] {
    sweep::write_chain_csv(path, c->chain);
    return BC_OK;
  });
}

void bc_chain_free(bc_chain* c) { delete c; }

bc_status bc_certify(double eps, double dphi_deg, double phimax_deg,
                     double target, int verbose, bc_certificate** out) {
  if (!out) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    sweep::CertifyOptions opts;
    if (eps > 0) opts.eps = eps;
    if (dphi_deg > 0) opts.dphi_deg = dphi_deg;
    if (phimax_deg > 0) opts.phimax_deg = phimax_deg;
    if (target > 0) opts.target = target;
    opts.verbose = verbose != 0;
    auto* h = new bc_certificate{sweep::certify_full_range(opts)};
    *out = h;
    return BC_OK;
  });
}

int bc_certificate_pass(const bc_certificate* c) {
  return c && c->cert.pass ? 1 : 0;
}

double bc_certificate_lowest_chain_theta(const bc_certificate* c) {
  return c ? c->cert.lowest_chain_theta : 0.0;
}

double bc_certificate_theta_star(const bc_certificate* c) {
  return c ? c->cert.theta_star : 0.0;
}

int bc_certificate_chain_length(const bc_certificate* c, int which) {
  if (!c) return 0;
  const auto& ch = which == 0 ? c->cert.chain0 : c->cert.chain56;
  return static_cast<int>(ch.points.size());
}

const char* bc_certificate_gap(const bc_certificate* c) {
  return c ? c->cert.gap_description.c_str() : "";
}

bc_status bc_certificate_write_fig2(const bc_certificate* c,
                                    const char* csv_path,
                                    const char* svg_path) {
  if (!c) return fail(BC_EINVAL, "null certificate");
  return guarded([&] {
    sweep::emit_fig2(c->cert, csv_path ? csv_path : "", svg_path ? svg_path : "");
    return BC_OK;
  });
}

void bc_certificate_free(bc_certificate* c) { delete c; }

bc_status bc_seesaw(int n, double eta, int restarts, uint64_t seed,
                    const char* witness_path, bc_seesaw_result* out) {
  if (!out) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    innn22::SeesawOptions opts;
    if (restarts > 0) opts.restarts = restarts;
    if (seed != 0) opts.seed = seed;
    double eta_eff = eta > 0 ? eta : 1.0 / (n - 1);
    auto res = innn22::seesaw(n, eta_eff, opts);
    auto compat = innn22::compat_certificate(res.alice, n);
    out->found = res.found ? 1 : 0;
    out->value = res.value;
    out->local_bound = res.bound;
    out->margin = res.margin;
    out->n = res.n;
    out->dim = res.dim;
    out->eta = res.eta;
    out->best_restart = res.best_restart;
    out->seed = res.seed;
    out->compat_all_ok = compat.all_ok ? 1 : 0;
    double worst = 0.0;
    for (const auto& e : compat.entries)
      worst = std::max(worst, e.marginal_residual);
    out->compat_worst_residual = worst;
    if (witness_path && *witness_path) innn22::write_witness(witness_path, res);
    return res.found ? BC_OK : fail(BC_ENOTFOUND, "seesaw found no violation");
  });
}

bc_status bc_innn22_local_bound(int n, double* bound) {
  if (!bound) return fail(BC_EINVAL, "null output");
  return guarded([&] {
    *bound = innn22::local_bound(innn22::cg_innn22(n));
    return BC_OK;
  });
}

}  // extern "C"
