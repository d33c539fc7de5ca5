#pragma once

#include "bellcert/lhvlp.hpp"

#include <string>
#include <vector>

namespace bellcert::sweep {

struct ChainPoint {
  int index = 0;
  double theta = 0.0;
  double lp_min = 0.0;     // min over the phi grid of the LP visibility
  double eta_theta = 0.0;  // v(dphi) * lp_min, valid for every phi
  double phi_min = 0.0;    // grid minimizer (radians)
  double alpha = 0.0;
};

struct ChainOptions {
  double alpha = 0.0;
  double theta0 = M_PI / 4;
  double eps = 1e-4;
  double dphi_deg = 0.1;
  double phimax_deg = 30.0;
  double target = 0.67;
  double stop_theta = 0.0;  // finish once the glued reach crosses below this
  int threads = 1;
  std::vector<ChainPoint> resume;
  bool verbose = false;
};

struct Chain {
  std::vector<ChainPoint> points;
  double certified_low = 0.0;   // glued coverage is [certified_low, theta0]
  double theta0 = 0.0;
  double alpha = 0.0;
  double target = 0.67;
  bool aborted = false;
  std::string abort_reason;
};

// The four-step descent: LP-certify a theta, glue down to the theta where the
// bound hits `target`, repeat until the step shrinks below eps or stop_theta
// is reached. Aborts if a grid point cannot be certified above target.
Chain run_chain(const ChainOptions& opts);

void write_chain_csv(const std::string& path, const Chain& chain);
std::vector<ChainPoint> read_chain_csv(const std::string& path);

struct CertifyOptions {
  double eps = 1e-4;
  double dphi_deg = 0.1;
  double phimax_deg = 30.0;
  double target = 0.67;
  int analytic_samples = 256;
  int threads = 1;
  bool verbose = false;
};

struct Certificate {
  bool pass = false;
  double target = 0.67;
  double theta_star = 0.0;
  std::vector<std::pair<double, double>> analytic;  // (theta, bound)
  Chain chain0;
  Chain chain56;
  double lowest_chain_theta = 0.0;
  std::string gap_description;  // empty on PASS
};

Certificate certify_full_range(const CertifyOptions& opts = {});

void emit_fig2(const Certificate& cert, const std::string& csv_path,
               const std::string& svg_path);

}  // namespace bellcert::sweep
