// bellcert command-line interface; talks to the core exclusively through the
// C API in bellcert.h.
#include "bellcert.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

namespace {

using Values = std::map<std::string, double>;

int write_mirrors(const Values& vals, const std::string& json_path,
                  const std::string& csv_path) {
  if (!json_path.empty()) {
    nlohmann::json j;
    for (const auto& [k, v] : vals) j[k] = v;
    std::ofstream out(json_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot open %s\n", json_path.c_str());
      return 1;
    }
    out << j.dump(2) << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot open %s\n", csv_path.c_str());
      return 1;
    }
    out << "key,value\n";
    char buf[128];
    for (const auto& [k, v] : vals) {
      std::snprintf(buf, sizeof(buf), "%s,%.12g\n", k.c_str(), v);
      out << buf;
    }
  }
  return 0;
}

int die(bc_status st) {
  std::fprintf(stderr, "error: %s\n", bc_last_error());
  return st == BC_EINVAL ? 2 : 1;
}

void add_mirror_opts(CLI::App* cmd, std::string* json_path, std::string* csv_path) {
  cmd->add_option("--json", *json_path, "write results as JSON to this path");
  cmd->add_option("--csv", *csv_path, "write results as CSV to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bellcert: LHV certification for noisy trine measurements"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for grid sweeps");

  std::string json_path, csv_path;

  // jm
  auto* jm = app.add_subcommand("jm", "joint-measurability of the noisy trine");
  double jm_eta = 0.67;
  bool jm_thresholds = false;
  jm->add_option("--eta", jm_eta, "trine visibility")->check(CLI::Range(0.0, 1.0));
  jm->add_flag("--thresholds", jm_thresholds, "bisect the pair/triple thresholds");
  add_mirror_opts(jm, &json_path, &csv_path);

  // simulate
  auto* sim = app.add_subcommand("simulate", "decompose the trine over sharp Paulis");
  double sim_eta = 0.67;
  sim->add_option("--eta", sim_eta)->check(CLI::Range(0.0, 1.0));
  add_mirror_opts(sim, &json_path, &csv_path);

  // etab
  auto* etab = app.add_subcommand("etab", "depolarizing shrink factor of Bob's finite set");
  double etab_alpha = 0.0;
  bool etab_facets = false, etab_no_refine = false;
  double etab_tstep = 0.0, etab_bstep = 0.0;
  std::string etab_vcsv, etab_fcsv;
  etab->add_option("--alpha", etab_alpha, "zeta parameter (0 or 5/6=0.8333...)");
  etab->add_flag("--facets", etab_facets, "cross-check via facet enumeration");
  etab->add_option("--ternary-step", etab_tstep, "ternary grid step (degrees)");
  etab->add_option("--binary-step", etab_bstep, "binary grid step (degrees)");
  etab->add_flag("--no-refine", etab_no_refine, "skip local refinement");
  etab->add_option("--export-vertices", etab_vcsv, "write polytope vertices CSV");
  etab->add_option("--export-facets", etab_fcsv, "write polytope facets CSV");
  add_mirror_opts(etab, &json_path, &csv_path);

  // lp
  auto* lp = app.add_subcommand("lp", "max LHV-certified trine visibility at (theta, phi)");
  double lp_theta = M_PI / 4, lp_phi = 0.0, lp_alpha = -1.0;
  lp->add_option("--theta", lp_theta)->required();
  lp->add_option("--phi", lp_phi);
  lp->add_option("--alpha", lp_alpha, "fix alpha (default: best of 0 and 5/6)");
  add_mirror_opts(lp, &json_path, &csv_path);

  // chain
  auto* chain = app.add_subcommand("chain", "run one certification chain");
  double ch_alpha = 0.0, ch_theta0 = M_PI / 4, ch_eps = 1e-4, ch_dphi = 0.1,
         ch_phimax = 30.0, ch_target = 0.67;
  std::string ch_out, ch_resume;
  bool ch_verbose = false;
  chain->add_option("--alpha", ch_alpha)->required();
  chain->add_option("--theta0", ch_theta0);
  chain->add_option("--eps", ch_eps);
  chain->add_option("--dphi", ch_dphi, "phi grid step (degrees)");
  chain->add_option("--phimax", ch_phimax, "phi grid end (degrees)");
  chain->add_option("--target", ch_target);
  chain->add_option("-o,--out", ch_out, "chain CSV output path");
  chain->add_option("--resume", ch_resume, "resume from a chain CSV");
  chain->add_flag("--verbose", ch_verbose);

  // certify
  auto* cert = app.add_subcommand("certify", "full-range locality certificate");
  double ce_eps = 1e-4, ce_dphi = 0.1, ce_phimax = 30.0, ce_target = 0.67;
  std::string ce_csv, ce_svg;
  bool ce_verbose = false;
  cert->add_option("--eps", ce_eps);
  cert->add_option("--dphi", ce_dphi);
  cert->add_option("--phimax", ce_phimax);
  cert->add_option("--target", ce_target);
  cert->add_option("--fig2-csv", ce_csv);
  cert->add_option("--fig2-svg", ce_svg);
  cert->add_flag("--verbose", ce_verbose);

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "run the certificate and emit the dataset/plot");
  std::string f2_csv = "fig2.csv", f2_svg = "fig2.svg";
  double f2_eps = 1e-4, f2_dphi = 0.1, f2_phimax = 30.0, f2_target = 0.67;
  bool f2_verbose = false;
  fig2->add_option("--csv", f2_csv);
  fig2->add_option("--svg", f2_svg);
  fig2->add_option("--eps", f2_eps);
  fig2->add_option("--dphi", f2_dphi);
  fig2->add_option("--phimax", f2_phimax);
  fig2->add_option("--target", f2_target);
  fig2->add_flag("--verbose", f2_verbose);

  // chsh
  auto* chsh = app.add_subcommand("chsh", "maximal CHSH value of the Schmidt state");
  double chsh_theta = M_PI / 4, chsh_phi = 0.0;
  chsh->add_option("--theta", chsh_theta)->required();
  chsh->add_option("--phi", chsh_phi);
  add_mirror_opts(chsh, &json_path, &csv_path);

  // steer-roundtrip
  auto* steer = app.add_subcommand("steer-roundtrip",
                                   "assemblage -> GHJW -> assemblage residual");
  double st_theta = 0.3, st_phi = 0.7;
  steer->add_option("--theta", st_theta)->required();
  steer->add_option("--phi", st_phi);
  add_mirror_opts(steer, &json_path, &csv_path);

  // innn22
  auto* inn = app.add_subcommand("innn22", "see-saw violation search with lossy measurements");
  int in_n = 3, in_restarts = 0;
  double in_eta = 0.0;
  std::uint64_t in_seed = 0;
  std::string in_witness;
  inn->add_option("--n", in_n)->check(CLI::Range(3, 8));
  inn->add_option("--eta", in_eta, "visibility (default 1/(N-1))");
  inn->add_option("--restarts", in_restarts);
  inn->add_option("--seed", in_seed);
  inn->add_option("--witness", in_witness, "witness export path");
  add_mirror_opts(inn, &json_path, &csv_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (jm->parsed()) {
    bc_hollow_report rep;
    if (bc_status st = bc_hollow_triangle(jm_eta, &rep)) return die(st);
    std::printf("trine eta = %.6g\n", jm_eta);
    std::printf("pair (0,1) jointly measurable: %s\n", rep.pair_jm[0] ? "yes" : "no");
    std::printf("pair (0,2) jointly measurable: %s\n", rep.pair_jm[1] ? "yes" : "no");
    std::printf("pair (1,2) jointly measurable: %s\n", rep.pair_jm[2] ? "yes" : "no");
    std::printf("triple jointly measurable:     %s\n", rep.triple_jm ? "yes" : "no");
    std::printf("hollow triangle:               %s\n", rep.is_hollow ? "yes" : "no");
    Values vals{{"eta", jm_eta},
                {"pair01", rep.pair_jm[0]},
                {"pair02", rep.pair_jm[1]},
                {"pair12", rep.pair_jm[2]},
                {"triple", rep.triple_jm},
                {"is_hollow", rep.is_hollow}};
    if (jm_thresholds) {
      double plo, phi_, tlo, thi;
      if (bc_status st = bc_jm_threshold(0, 1e-5, &plo, &phi_)) return die(st);
      if (bc_status st = bc_jm_threshold(1, 1e-5, &tlo, &thi)) return die(st);
      std::printf("pairwise threshold:  %.6g (bracket [%.6g, %.6g])\n",
                  0.5 * (plo + phi_), plo, phi_);
      std::printf("triplewise threshold: %.6g (bracket [%.6g, %.6g])\n",
                  0.5 * (tlo + thi), tlo, thi);
      vals["pair_threshold"] = 0.5 * (plo + phi_);
      vals["triple_threshold"] = 0.5 * (tlo + thi);
    }
    return write_mirrors(vals, json_path, csv_path);
  }

  if (sim->parsed()) {
    int feasible = 0;
    double metric = 0.0;
    if (bc_status st = bc_decompose_trine(sim_eta, &feasible, &metric)) return die(st);
    if (feasible) {
      std::printf("feasible: trine at eta = %.6g decomposes over sharp Paulis "
                  "(residual %.6g)\n", sim_eta, metric);
    } else {
      std::printf("infeasible: eta = %.6g exceeds the square (overshoot %.6g)\n",
                  sim_eta, metric);
    }
    int rc = write_mirrors({{"eta", sim_eta},
                            {"feasible", static_cast<double>(feasible)},
                            {"metric", metric}},
                           json_path, csv_path);
    return rc != 0 ? rc : (feasible ? 0 : 1);
  }

  if (etab->parsed()) {
    Values vals{{"alpha", etab_alpha}};
    bc_shrink_opts opts{etab_tstep, etab_bstep, etab_no_refine ? 0 : 1};
    double eta_b = 0.0;
    if (bc_status st = bc_shrink_factor(etab_alpha, &opts, &eta_b)) return die(st);
    std::printf("shrink factor eta_B(alpha = %.6g) = %.6g\n", etab_alpha, eta_b);
    vals["eta_b"] = eta_b;
    if (etab_facets) {
      double eta_f = 0.0;
      long nfacets = 0;
      if (bc_status st = bc_shrink_factor_facets(etab_alpha, &eta_f, &nfacets))
        return die(st);
      std::printf("facet route: eta_B = %.6g over %ld facets (|diff| = %.3g)\n",
                  eta_f, nfacets, std::fabs(eta_f - eta_b));
      vals["eta_b_facets"] = eta_f;
      vals["facet_count"] = static_cast<double>(nfacets);
    }
    if (!etab_vcsv.empty() || !etab_fcsv.empty()) {
      if (bc_status st = bc_export_polytope(etab_vcsv.c_str(), etab_fcsv.c_str()))
        return die(st);
    }
    return write_mirrors(vals, json_path, csv_path);
  }

  if (lp->parsed()) {
    double eta = 0.0;
    Values vals{{"theta", lp_theta}, {"phi", lp_phi}};
    if (lp_alpha >= 0.0) {
      if (bc_status st = bc_max_eta(lp_theta, lp_phi, lp_alpha, &eta)) return die(st);
      std::printf("eta(theta = %.6g, phi = %.6g; alpha = %.6g) = %.6g\n", lp_theta,
                  lp_phi, lp_alpha, eta);
      vals["alpha"] = lp_alpha;
    } else {
      double winner = 0.0;
      if (bc_status st = bc_eta_bar(lp_theta, lp_phi, &eta, &winner)) return die(st);
      std::printf("eta_bar(theta = %.6g, phi = %.6g) = %.6g (winner alpha = %.6g)\n",
                  lp_theta, lp_phi, eta, winner);
      vals["winner_alpha"] = winner;
    }
    vals["eta"] = eta;
    return write_mirrors(vals, json_path, csv_path);
  }

  if (chain->parsed()) {
    bc_chain* h = nullptr;
    if (bc_status st = bc_chain_run(ch_alpha, ch_theta0, ch_eps, ch_dphi, ch_phimax,
                                    ch_target, ch_resume.c_str(), ch_verbose ? 1 : 0,
                                    &h))
      return die(st);
    int len = bc_chain_length(h);
    std::printf("chain alpha = %.6g: %d points, certified down to theta = %.6g%s\n",
                ch_alpha, len, bc_chain_certified_low(h),
                bc_chain_aborted(h) ? " (ABORTED)" : "");
    for (int i = 0; i < len; ++i) {
      double th, eta, phi_min;
      bc_chain_point(h, i, &th, &eta, &phi_min);
      std::printf("  %3d  theta = %.6g  eta = %.6g  phi_min = %.6g\n", i, th, eta,
                  phi_min);
    }
    int rc = 0;
    if (!ch_out.empty()) {
      if (bc_status st = bc_chain_write_csv(h, ch_out.c_str())) rc = die(st);
    }
    if (bc_chain_aborted(h) && rc == 0) rc = 1;
    bc_chain_free(h);
    return rc;
  }

  bool fig2_mode = fig2->parsed();
  if (cert->parsed() || fig2_mode) {
    double eps = fig2_mode ? f2_eps : ce_eps;
    double dphi = fig2_mode ? f2_dphi : ce_dphi;
    double phimax = fig2_mode ? f2_phimax : ce_phimax;
    double target = fig2_mode ? f2_target : ce_target;
    bool verbose = fig2_mode ? f2_verbose : ce_verbose;
    std::string out_csv = fig2_mode ? f2_csv : ce_csv;
    std::string out_svg = fig2_mode ? f2_svg : ce_svg;

    bc_certificate* h = nullptr;
    if (bc_status st = bc_certify(eps, dphi, phimax, target, verbose ? 1 : 0, &h))
      return die(st);
    int pass = bc_certificate_pass(h);
    std::printf("%s: full range [0, pi/4] at eta >= %.6g\n", pass ? "PASS" : "FAIL",
                target);
    std::printf("theta* = %.6g, lowest chain theta = %.6g\n",
                bc_certificate_theta_star(h), bc_certificate_lowest_chain_theta(h));
    std::printf("chain points: alpha=0 -> %d, alpha=5/6 -> %d\n",
                bc_certificate_chain_length(h, 0), bc_certificate_chain_length(h, 1));
    if (!pass) std::printf("gap: %s\n", bc_certificate_gap(h));
    int rc = 0;
    if (!out_csv.empty() || !out_svg.empty()) {
      if (bc_status st = bc_certificate_write_fig2(h, out_csv.c_str(), out_svg.c_str()))
        rc = die(st);
      else if (!out_csv.empty())
        std::printf("wrote %s%s%s\n", out_csv.c_str(),
                    out_svg.empty() ? "" : " and ", out_svg.c_str());
    }
    bc_certificate_free(h);
    return rc != 0 ? rc : (pass ? 0 : 1);
  }

  if (chsh->parsed()) {
    double v = 0.0;
    if (bc_status st = bc_chsh_max(chsh_theta, chsh_phi, &v)) return die(st);
    std::printf("max CHSH value at theta = %.6g: %.6g (local bound 2)\n", chsh_theta, v);
    return write_mirrors({{"theta", chsh_theta}, {"phi", chsh_phi}, {"chsh", v}},
                         json_path, csv_path);
  }

  if (steer->parsed()) {
    double r = 0.0;
    if (bc_status st = bc_steer_roundtrip(st_theta, st_phi, &r)) return die(st);
    std::printf("GHJW roundtrip residual at (theta = %.6g, phi = %.6g): %.6g\n",
                st_theta, st_phi, r);
    return write_mirrors({{"theta", st_theta}, {"phi", st_phi}, {"residual", r}},
                         json_path, csv_path);
  }

  if (inn->parsed()) {
    bc_seesaw_result res;
    bc_status st = bc_seesaw(in_n, in_eta, in_restarts, in_seed,
                             in_witness.c_str(), &res);
    if (st != BC_OK && st != BC_ENOTFOUND) return die(st);
    std::printf("I_%d%d22 local bound: %.6g\n", in_n, in_n, res.local_bound);
    std::printf("see-saw value at eta = %.6g (dim %d): %.6g, margin %.6g\n", res.eta,
                res.dim, res.value, res.margin);
    std::printf("violation found: %s (restart %d, seed %llu)\n",
                res.found ? "yes" : "NOT-FOUND", res.best_restart,
                static_cast<unsigned long long>(res.seed));
    std::printf("(N-1)-wise compatibility certificate: %s (worst residual %.3g)\n",
                res.compat_all_ok ? "verified" : "FAILED",
                res.compat_worst_residual);
    int rc = write_mirrors({{"n", static_cast<double>(res.n)},
                            {"eta", res.eta},
                            {"value", res.value},
                            {"local_bound", res.local_bound},
                            {"margin", res.margin},
                            {"found", static_cast<double>(res.found)},
                            {"compat_ok", static_cast<double>(res.compat_all_ok)}},
                           json_path, csv_path);
    if (rc != 0) return rc;
    return (res.found && res.compat_all_ok) ? 0 : 1;
  }

  return 2;
}
