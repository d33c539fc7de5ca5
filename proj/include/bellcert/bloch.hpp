#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

namespace bellcert {

// Absolute tolerance for validity predicates (PSD margins, POVM closure, ...).
inline constexpr double kValidityTol = 1e-10;

// Planar Bloch vector; components along the distinguished axes e1 and e3.
struct Vec2 {
  double x1 = 0.0;
  double x3 = 0.0;

  double norm() const { return std::hypot(x1, x3); }
  double dot(const Vec2& o) const { return x1 * o.x1 + x3 * o.x3; }

  Vec2 operator+(const Vec2& o) const { return {x1 + o.x1, x3 + o.x3}; }
  Vec2 operator-(const Vec2& o) const { return {x1 - o.x1, x3 - o.x3}; }
  Vec2 operator*(double s) const { return {s * x1, s * x3}; }
  Vec2 operator-() const { return {-x1, -x3}; }

  static Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Real symmetric 2x2 operator stored in Bloch form:
//   op = (t*I + r.x1*X + r.x3*Z) / 2,   trace(op) = t.
// PSD holds exactly iff t >= |r|, so validity checks need no eigensolver.
struct RealQubitOperator {
  double t = 0.0;
  Vec2 r;

  double trace() const { return t; }
  double psd_margin() const { return t - r.norm(); }
  bool is_psd(double tol = kValidityTol) const { return psd_margin() >= -tol; }

  // trace(a*b) = (a.t*b.t + a.r.b.r)/2 for real Bloch-form operators
  double inner(const RealQubitOperator& o) const {
    return 0.5 * (t * o.t + r.dot(o.r));
  }

  Eigen::Matrix2d matrix() const;

  RealQubitOperator operator+(const RealQubitOperator& o) const {
    return {t + o.t, r + o.r};
  }
  RealQubitOperator operator-(const RealQubitOperator& o) const {
    return {t - o.t, r - o.r};
  }
  RealQubitOperator operator*(double s) const { return {s * t, r * s}; }

  static RealQubitOperator identity() { return {2.0, {0.0, 0.0}}; }
  static RealQubitOperator zero() { return {0.0, {0.0, 0.0}}; }
  // Projector onto the +1 eigenstate of the Bloch direction `axis` (unit).
  static RealQubitOperator projector(const Vec2& axis) { return {1.0, axis}; }
  static RealQubitOperator from_matrix(const Eigen::Matrix2d& m,
                                       double sym_tol = 1e-9);
};

inline RealQubitOperator operator*(double s, const RealQubitOperator& a) {
  return a * s;
}

// Ordered list of effects summing to the identity.
struct QubitPovm {
  std::vector<RealQubitOperator> elements;

  int arity() const { return static_cast<int>(elements.size()); }
  const RealQubitOperator& effect(int b) const { return elements[b]; }

  // max violation of {sum t = 2, sum r = 0, each element PSD}
  double validity_residual() const;
  bool is_valid(double tol = kValidityTol) const {
    return validity_residual() <= tol;
  }

  // same effects followed by exact-zero effects up to the given arity
  QubitPovm embedded(int target_arity) const;
  QubitPovm permuted(const std::vector<int>& perm) const;
};

// 4x4 real symmetric unit-trace operator, basis order |00>,|01>,|10>,|11>.
// PSD is NOT required: this is the LP surrogate type.
struct PseudoState {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();

  double trace() const { return m.trace(); }
  double symmetry_residual() const { return (m - m.transpose()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
};

// Proper two-qubit state: PseudoState plus PSD.
struct TwoQubitState {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();

  double trace() const { return m.trace(); }
  double min_eigenvalue() const;
  bool is_valid(double tol = kValidityTol) const;
  PseudoState pseudo() const { return PseudoState{m}; }
};

enum class Party { A, B };

Eigen::Matrix4d kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b);

inline const Eigen::Matrix2d kPauliX = (Eigen::Matrix2d() << 0, 1, 1, 0).finished();
inline const Eigen::Matrix2d kPauliZ = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();

// Noisy trine measurements: effects (I + (-1)^a eta a_x.sigma)/2 with Bloch
// axes a_x at angles 2*pi*x/3, x = 0,1,2.
std::array<QubitPovm, 3> trine_povm(double eta);

// Noisy X and Z measurements at visibility v.
std::array<QubitPovm, 2> pauli_pair(double v);

// |psi> = (O(phi) (x) I)(cos(theta)|00> + sin(theta)|11>), returned as a
// projector. O(phi) is the planar rotation by phi.
TwoQubitState schmidt_state(double theta, double phi);
Eigen::Vector4d schmidt_vector(double theta, double phi);
Eigen::Matrix2d planar_rotation(double phi);

// The finite measurement set on Bob's side: 9 binary measurements with axes
// at y*pi/9 (embedded into arity 3) followed by 4 ternary measurements with
// rank-1 effects (I + v.sigma)/3 at base angles y*pi/2 and internal offsets
// {0, 2pi/3, 4pi/3}.
std::vector<QubitPovm> bob_finite_set();

// zeta(alpha) = alpha |0><0| + (1-alpha) I/2, with |0><0| = (I+Z)/2.
RealQubitOperator zeta(double alpha);

// element b -> eta_b*M_b + (1-eta_b)*tr(M_b zeta_b)*I
QubitPovm depolarize(const QubitPovm& povm, double eta_b,
                     const RealQubitOperator& zeta_b);

// Trace out `party`; partial_trace(rho, Party::B) is Alice's reduced operator.
RealQubitOperator partial_trace(const Eigen::Matrix4d& state, Party party);

}  // namespace bellcert
