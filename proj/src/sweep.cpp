#include "bellcert/sweep.hpp"

#include "bellcert/analytic.hpp"
#include "bellcert/glue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bellcert::sweep {

namespace {
constexpr double kDeg = M_PI / 180.0;

double lp_value_with_retry(double theta, double phi, double alpha) {
  try {
    return lhvlp::max_eta_alpha(theta, phi, alpha);
  } catch (const std::runtime_error&) {
    lhvlp::MaxEtaOptions retry;
    retry.gap_tol = 1e-9;
    retry.feas_tol = 1e-8;
    return lhvlp::max_eta_alpha(theta, phi, alpha, retry);
  }
}

// LP visibilities across the phi grid; sequential runs chain warm starts,
// threaded runs split into contiguous chunks
std::vector<double> grid_values(double theta, double alpha, int npts,
                                double dphi, int threads) {
  std::vector<double> vals(npts);
  if (threads <= 1) {
    for (int j = 0; j < npts; ++j)
      vals[j] = lp_value_with_retry(theta, j * dphi, alpha);
    return vals;
  }
  int nthreads = std::min<int>(threads, npts);
  std::vector<std::thread> pool;
  int chunk = (npts + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    int lo = t * chunk, hi = std::min(npts, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&vals, lo, hi, theta, alpha, dphi] {
      for (int j = lo; j < hi; ++j)
        vals[j] = lp_value_with_retry(theta, j * dphi, alpha);
    });
  }
  for (auto& th : pool) th.join();
  return vals;
}

}  // namespace

Chain run_chain(const ChainOptions& opts) {
  if (!(opts.theta0 > 0.0 && opts.theta0 <= M_PI / 4 + 1e-12)) {
    throw std::invalid_argument("run_chain: theta0 must lie in (0, pi/4]");
  }
  if (!(opts.eps > 0.0)) throw std::invalid_argument("run_chain: eps must be positive");

  const double dphi = opts.dphi_deg * kDeg;
  const int npts = static_cast<int>(std::lround(opts.phimax_deg / opts.dphi_deg)) + 1;
  const double vphi = glue::v_phi_step(dphi);

  Chain chain;
  chain.alpha = opts.alpha;
  chain.theta0 = opts.theta0;
  chain.target = opts.target;
  chain.points = opts.resume;

  double theta = opts.theta0;
  int index = 0;
  if (!chain.points.empty()) {
    const ChainPoint& last = chain.points.back();
    index = last.index + 1;
    theta = glue::solve_theta_for_target(last.theta, last.eta_theta, opts.target);
    chain.certified_low = theta;
  }

  while (true) {
    std::vector<double> vals = grid_values(theta, opts.alpha, npts, dphi, opts.threads);
    auto it = std::min_element(vals.begin(), vals.end());
    ChainPoint pt;
    pt.index = index++;
    pt.theta = theta;
    pt.lp_min = *it;
    pt.phi_min = static_cast<double>(it - vals.begin()) * dphi;
    pt.eta_theta = vphi * pt.lp_min;
    pt.alpha = opts.alpha;

    if (opts.verbose) {
      std::fprintf(stderr, "chain alpha=%g theta=%.6f lp_min=%.6f eta=%.6f phi*=%.6f\n",
                   opts.alpha, pt.theta, pt.lp_min, pt.eta_theta, pt.phi_min);
    }

    if (pt.eta_theta <= opts.target) {
      chain.aborted = true;
      std::ostringstream os;
      os << "grid point theta=" << theta << " certifies only eta=" << pt.eta_theta
         << " <= target " << opts.target;
      chain.abort_reason = os.str();
      chain.certified_low = chain.points.empty()
                                ? opts.theta0
                                : glue::solve_theta_for_target(
                                      chain.points.back().theta,
                                      chain.points.back().eta_theta, opts.target);
      return chain;
    }

    chain.points.push_back(pt);
    double theta_next =
        glue::solve_theta_for_target(theta, pt.eta_theta, opts.target);
    chain.certified_low = theta_next;
    if (theta_next <= opts.stop_theta) return chain;
    if (theta - theta_next <= opts.eps) return chain;
    theta = theta_next;
  }
}

void write_chain_csv(const std::string& path, const Chain& chain) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "i,theta_i,eta,phi_min,lp_min,alpha\n";
  char buf[256];
  for (const auto& p : chain.points) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.index,
                  p.theta, p.eta_theta, p.phi_min, p.lp_min, p.alpha);
    out << buf;
  }
}

std::vector<ChainPoint> read_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<ChainPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ChainPoint p;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf", &p.index, &p.theta,
                    &p.eta_theta, &p.phi_min, &p.lp_min, &p.alpha) != 6) {
      throw std::runtime_error("malformed chain CSV line: " + line);
    }
    out.push_back(p);
  }
  return out;
}

Certificate certify_full_range(const CertifyOptions& opts) {
  Certificate cert;
  cert.target = opts.target;
  cert.theta_star = analytic::theta_star(opts.target);

  for (int i = 0; i < opts.analytic_samples; ++i) {
    double th = cert.theta_star * i / (opts.analytic_samples - 1);
    cert.analytic.emplace_back(th, analytic::small_theta_bound(th));
  }

  ChainOptions c0;
  c0.alpha = 0.0;
  c0.theta0 = M_PI / 4;
  c0.eps = opts.eps;
  c0.dphi_deg = opts.dphi_deg;
  c0.phimax_deg = opts.phimax_deg;
  c0.target = opts.target;
  c0.stop_theta = cert.theta_star;
  c0.threads = opts.threads;
  c0.verbose = opts.verbose;
  cert.chain0 = run_chain(c0);

  ChainOptions c56 = c0;
  c56.alpha = lhvlp::kAlphaHigh;
  c56.theta0 = 0.6;
  cert.chain56 = run_chain(c56);

  cert.lowest_chain_theta =
      std::min(cert.chain0.certified_low, cert.chain56.certified_low);

  // coverage: [0, theta*] analytic; [certified_low, theta0] per chain
  struct Iv {
    double lo, hi;
  };
  std::vector<Iv> ivs;
  bool analytic_ok = true;
  for (const auto& [th, v] : cert.analytic) analytic_ok &= v >= opts.target - 1e-12;
  if (analytic_ok) ivs.push_back({0.0, cert.theta_star});
  if (!cert.chain0.aborted && !cert.chain0.points.empty())
    ivs.push_back({cert.chain0.certified_low, cert.chain0.theta0});
  if (!cert.chain56.aborted && !cert.chain56.points.empty())
    ivs.push_back({cert.chain56.certified_low, cert.chain56.theta0});
  std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });

  double reach = 0.0;
  std::ostringstream gap;
  for (const auto& iv : ivs) {
    if (iv.lo > reach + 1e-9) {
      gap << "uncovered interval (" << reach << ", " << iv.lo << ")";
      break;
    }
    reach = std::max(reach, iv.hi);
  }
  if (gap.str().empty() && reach < M_PI / 4 - 1e-9) {
    gap << "uncovered interval (" << reach << ", " << M_PI / 4 << ")";
  }
  if (cert.chain0.aborted)
    gap << "; alpha=0 chain aborted: " << cert.chain0.abort_reason;
  if (cert.chain56.aborted)
    gap << "; alpha=5/6 chain aborted: " << cert.chain56.abort_reason;

  cert.gap_description = gap.str();
  cert.pass = cert.gap_description.empty() && analytic_ok &&
              !cert.chain0.points.empty() && !cert.chain56.points.empty() &&
              cert.lowest_chain_theta <= cert.theta_star + 1e-9;
  return cert;
}

void emit_fig2(const Certificate& cert, const std::string& csv_path,
               const std::string& svg_path) {
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path);
    out << "branch,theta,eta,alpha\n";
    char buf[256];
    for (const auto& [th, v] : cert.analytic) {
      std::snprintf(buf, sizeof(buf), "analytic,%.12g,%.12g,0\n", th, v);
      out << buf;
    }
    for (const Chain* ch : {&cert.chain0, &cert.chain56}) {
      for (const auto& p : ch->points) {
        std::snprintf(buf, sizeof(buf), "chain,%.12g,%.12g,%.12g\n", p.theta,
                      p.eta_theta, p.alpha);
        out << buf;
      }
    }
  }

  if (svg_path.empty()) return;
  std::ofstream svg(svg_path);
  if (!svg) throw std::runtime_error("cannot open " + svg_path);

  const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  const double x0 = 0.0, x1 = M_PI / 4, y0 = 0.5, y1 = 1.0;
  auto px = [&](double th) { return ml + (th - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (v - y0) / (y1 - y0) * (h - mt - mb); };

  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  // reference line at the target
  svg << "<line x1=\"" << ml << "\" y1=\"" << py(cert.target) << "\" x2=\""
      << w - mr << "\" y2=\"" << py(cert.target)
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  svg << "<text x=\"" << w - mr - 60 << "\" y=\"" << py(cert.target) - 6
      << "\" font-size=\"12\">eta = " << cert.target << "</text>\n";

  svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (const auto& [th, v] : cert.analytic) svg << px(th) << "," << py(v) << " ";
  svg << "\"/>\n";

  for (const auto& p : cert.chain0.points) {
    double cx = px(p.theta), cy = py(p.eta_theta);
    svg << "<path d=\"M " << cx << " " << cy - 4 << " L " << cx + 4 << " " << cy
        << " L " << cx << " " << cy + 4 << " L " << cx - 4 << " " << cy
        << " Z\" fill=\"none\" stroke=\"blue\"/>\n";
  }
  for (const auto& p : cert.chain56.points) {
    svg << "<circle cx=\"" << px(p.theta) << "\" cy=\"" << py(p.eta_theta)
        << "\" r=\"3.5\" fill=\"none\" stroke=\"red\"/>\n";
  }

  for (int i = 0; i <= 5; ++i) {
    double th = x0 + (x1 - x0) * i / 5;
    svg << "<text x=\"" << px(th) - 12 << "\" y=\"" << h - mb + 18
        << "\" font-size=\"12\">" << std::round(th * 1000) / 1000 << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    double v = y0 + (y1 - y0) * i / 5;
    svg << "<text x=\"" << ml - 40 << "\" y=\"" << py(v) + 4
        << "\" font-size=\"12\">" << std::round(v * 100) / 100 << "</text>\n";
  }
  svg << "<text x=\"" << (w / 2 - 20) << "\" y=\"" << h - 12
      << "\" font-size=\"13\">theta</text>\n";
  svg << "<text x=\"12\" y=\"" << (h / 2)
      << "\" font-size=\"13\" transform=\"rotate(-90 16," << h / 2
      << ")\">certified eta</text>\n";
  svg << "</svg>\n";
}

}  // namespace bellcert::sweep
