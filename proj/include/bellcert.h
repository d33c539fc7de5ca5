/* bellcert C API: local-hidden-variable certification for noisy trine
 * measurements, measurement-compatibility thresholds, and the I_NN22
 * see-saw search. All functions return bc_status; bc_last_error() carries
 * the message of the most recent failure on the calling thread. */
#ifndef BELLCERT_H
#define BELLCERT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bc_status {
  BC_OK = 0,
  BC_EINVAL = 1,    /* bad argument / domain error */
  BC_ESOLVER = 2,   /* numerical solver failure */
  BC_ENOTFOUND = 3, /* search completed without a witness */
  BC_EFAIL = 4,     /* certification ran and failed */
  BC_EIO = 5,
  BC_EINTERNAL = 6
} bc_status;

const char* bc_version(void);
const char* bc_last_error(void);

/* ---- joint measurability ---- */

typedef struct bc_hollow_report {
  int pair_jm[3]; /* trine pairs (0,1), (0,2), (1,2) */
  int triple_jm;
  int is_hollow;
} bc_hollow_report;

bc_status bc_hollow_triangle(double eta, bc_hollow_report* out);

/* family: 0 = trine pair, 1 = trine triple. Returns the certified bracket. */
bc_status bc_jm_threshold(int family, double tol, double* lo, double* hi);

/* feasible <- 1 when the noisy trine decomposes over the two sharp Paulis;
 * metric is the reconstruction residual when feasible, the overshoot above
 * the square otherwise */
bc_status bc_decompose_trine(double eta, int* feasible, double* metric);

/* ---- measurement-simulability polytope ---- */

typedef struct bc_shrink_opts {
  double ternary_step_deg; /* <= 0: default 3.0 */
  double binary_step_deg;  /* <= 0: default 0.75 */
  int refine;              /* nonzero: local refinement after the grid */
} bc_shrink_opts;

bc_status bc_shrink_factor(double alpha, const bc_shrink_opts* opts,
                           double* eta_b);
bc_status bc_shrink_factor_facets(double alpha, double* eta_b,
                                  long* facet_count);
bc_status bc_export_polytope(const char* vertices_csv, const char* facets_csv);

/* ---- LHV linear program ---- */

bc_status bc_max_eta(double theta, double phi, double alpha, double* eta);
bc_status bc_eta_bar(double theta, double phi, double* eta,
                     double* winner_alpha);

/* ---- analytic branch ---- */

bc_status bc_chsh_max(double theta, double phi, double* value);
bc_status bc_theta_star(double eta_star, double* theta);
bc_status bc_small_theta_bound(double theta, double* eta);

/* ---- continuity formulas ---- */

bc_status bc_v_phi_step(double dphi_rad, double* v);
bc_status bc_eta_theta_step(double theta, double theta_i, double eta_i,
                            double* eta);

/* ---- steering roundtrip ---- */

bc_status bc_steer_roundtrip(double theta, double phi, double* residual);

/* ---- certification chains ---- */

typedef struct bc_chain bc_chain;

bc_status bc_chain_run(double alpha, double theta0, double eps,
                       double dphi_deg, double phimax_deg, double target,
                       const char* resume_csv, int verbose, bc_chain** out);
int bc_chain_length(const bc_chain* c);
bc_status bc_chain_point(const bc_chain* c, int i, double* theta, double* eta,
                         double* phi_min);
int bc_chain_aborted(const bc_chain* c);
double bc_chain_certified_low(const bc_chain* c);
bc_status bc_chain_write_csv(const bc_chain* c, const char* path);
void bc_chain_free(bc_chain* c);

typedef struct bc_certificate bc_certificate;

/* BC_OK with pass=0 is a completed-but-failed certification */
bc_status bc_certify(double eps, double dphi_deg, double phimax_deg,
                     double target, int verbose, bc_certificate** out);
int bc_certificate_pass(const bc_certificate* c);
double bc_certificate_lowest_chain_theta(const bc_certificate* c);
double bc_certificate_theta_star(const bc_certificate* c);
/* which: 0 -> alpha = 0 chain, 1 -> alpha = 5/6 chain */
int bc_certificate_chain_length(const bc_certificate* c, int which);
const char* bc_certificate_gap(const bc_certificate* c);
bc_status bc_certificate_write_fig2(const bc_certificate* c,
                                    const char* csv_path,
                                    const char* svg_path);
void bc_certificate_free(bc_certificate* c);

/* ---- I_NN22 ---- */

typedef struct bc_seesaw_result {
  int found;
  double value;
  double local_bound;
  double margin;
  int n;
  int dim;
  double eta;
  int best_restart;
  uint64_t seed;
  int compat_all_ok;
  double compat_worst_residual;
} bc_seesaw_result;

/* eta <= 0 selects the compatibility edge 1/(N-1) */
bc_status bc_seesaw(int n, double eta, int restarts, uint64_t seed,
                    const char* witness_path, bc_seesaw_result* out);
bc_status bc_innn22_local_bound(int n, double* bound);

#ifdef __cplusplus
}
#endif

#endif /* BELLCERT_H */
