#include "bellcert/steer.hpp"

#include <cmath>
#include <stdexcept>

namespace bellcert::steer {

RealQubitOperator Assemblage::reduced(int y) const {
  RealQubitOperator sum = RealQubitOperator::zero();
  for (const auto& s : sigma[y]) sum = sum + s;
  return sum;
}

double Assemblage::no_signalling_residual() const {
  RealQubitOperator ref = reduced(0);
  double worst = 0.0;
  for (int y = 1; y < settings(); ++y) {
    RealQubitOperator d = reduced(y) - ref;
    worst = std::max(worst, std::max(std::abs(d.t), d.r.norm()));
  }
  return worst;
}

double Assemblage::min_psd_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : sigma)
    for (const auto& s : row) m = std::min(m, s.psd_margin());
  return m;
}

Assemblage assemblage(const TwoQubitState& state,
                      const std::vector<QubitPovm>& bob) {
  Assemblage out;
  for (const auto& meas : bob) {
    std::vector<RealQubitOperator> row;
    for (int b = 0; b < meas.arity(); ++b) {
      // tr_B(rho (I x M)) entrywise
      Eigen::Matrix2d mb = meas.effect(b).matrix();
      Eigen::Matrix2d red = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              red(i, j) += state.m(2 * i + k, 2 * j + l) * mb(l, k);
      row.push_back(RealQubitOperator::from_matrix(0.5 * (red + red.transpose())));
    }
    out.outcomes.push_back(meas.arity());
    out.sigma.push_back(std::move(row));
  }
  return out;
}

Assemblage realify(const Assemblage& asm_in) { return asm_in; }

Assemblage realify(const std::vector<std::vector<Eigen::Matrix2cd>>& sigma_c) {
  Assemblage out;
  for (const auto& row_c : sigma_c) {
    std::vector<RealQubitOperator> row;
    for (const auto& s : row_c) {
      Eigen::Matrix2d re = 0.5 * (s + s.conjugate()).real();
      row.push_back(RealQubitOperator::from_matrix(0.5 * (re + re.transpose()), 1e-7));
    }
    out.outcomes.push_back(static_cast<int>(row.size()));
    out.sigma.push_back(std::move(row));
  }
  return out;
}

double SteeringFunctional::beta(const Assemblage& a) const {
  double v = 0.0;
  for (size_t y = 0; y < f.size(); ++y)
    for (size_t b = 0; b < f[y].size(); ++b) v += f[y][b].inner(a.sigma[y][b]);
  return v;
}

SteeringFunctional steering_functional(const BellFunctional& c,
                                       const std::vector<QubitPovm>& alice) {
  if (static_cast<int>(alice.size()) != c.scenario.na()) {
    throw std::invalid_argument("steering_functional: Alice scenario mismatch");
  }
  SteeringFunctional out;
  for (int y = 0; y < c.scenario.nb(); ++y) {
    std::vector<RealQubitOperator> row;
    for (int b = 0; b < c.scenario.bob_outcomes[y]; ++b) {
      RealQubitOperator fb = RealQubitOperator::zero();
      for (int x = 0; x < c.scenario.na(); ++x)
        for (int a = 0; a < c.scenario.alice_outcomes[x]; ++a)
          fb = fb + c.at(x, y, a, b) * alice[x].effect(a);
      row.push_back(fb);
    }
    out.f.push_back(std::move(row));
  }
  return out;
}

GhjwResult ghjw_reconstruct(const Assemblage& a) {
  if (a.no_signalling_residual() > 1e-8) {
    throw std::invalid_argument("ghjw_reconstruct: assemblage signals");
  }
  Eigen::Matrix2d sa = a.reduced(0).matrix();
  // closed-form symmetric 2x2 eigendecomposition, deterministic conventions
  double tr = sa.trace();
  double half_diff = 0.5 * (sa(0, 0) - sa(1, 1));
  double rad = std::hypot(half_diff, sa(0, 1));
  double l0 = 0.5 * tr + rad, l1 = 0.5 * tr - rad;
  if (l1 < 1e-9 * std::max(l0, 1e-300)) {
    throw std::invalid_argument(
        "ghjw_reconstruct: reduced state is rank deficient");
  }
  Eigen::Vector2d v0;
  if (rad < 1e-15) {
    v0 << 1.0, 0.0;
  } else if (std::abs(sa(0, 1)) > std::abs(l0 - sa(0, 0))) {
    v0 << sa(0, 1), l0 - sa(0, 0);
  } else {
    v0 << l0 - sa(1, 1), sa(0, 1);
  }
  v0.normalize();
  // sign convention: larger component positive
  int big = std::abs(v0[0]) >= std::abs(v0[1]) ? 0 : 1;
  if (v0[big] < 0) v0 = -v0;
  double phi = std::atan2(v0[1], v0[0]);

  GhjwResult res;
  res.phi = phi;
  res.lambda = {l0, l1};
  double c = std::sqrt(l0), s = std::sqrt(l1);
  Eigen::Matrix2d o = planar_rotation(phi);
  Eigen::Vector4d psi;
  psi << c * o(0, 0), s * o(0, 1), c * o(1, 0), s * o(1, 1);
  res.state.m = psi * psi.transpose();

  Eigen::Vector2d inv_sqrt(1.0 / std::sqrt(l0), 1.0 / std::sqrt(l1));
  for (int y = 0; y < a.settings(); ++y) {
    QubitPovm meas;
    for (int b = 0; b < a.outcomes[y]; ++b) {
      Eigen::Matrix2d sp = o.transpose() * a.sigma[y][b].matrix() * o;
      Eigen::Matrix2d m;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          m(j, i) = sp(i, j) * inv_sqrt[i] * inv_sqrt[j];
      meas.elements.push_back(RealQubitOperator::from_matrix(0.5 * (m + m.transpose())));
    }
    res.bob.push_back(std::move(meas));
  }
  return res;
}

}  // namespace bellcert::steer
