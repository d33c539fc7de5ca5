#include "bellcert/behavior.hpp"
#include "bellcert/bloch.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace bellcert;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<QubitPovm> to_vec(const std::array<QubitPovm, 3>& a) {
  return {a[0], a[1], a[2]};
}
}  // namespace

TEST_CASE("trine: noise limits and explicit effects") {
  auto flat = trine_povm(0.0);
  for (const auto& m : flat)
    for (const auto& e : m.elements) {
      CHECK(e.t == doctest::Approx(1.0));
      CHECK(e.r.norm() == doctest::Approx(0.0));
    }

  auto sharp = trine_povm(1.0);
  CHECK(sharp[0].effect(0).t == doctest::Approx(1.0));
  CHECK(sharp[0].effect(0).r.x1 == doctest::Approx(1.0));
  CHECK(sharp[0].effect(0).r.x3 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sharp[0].effect(1).r.x1 == doctest::Approx(-1.0));

  auto noisy = trine_povm(0.67);
  CHECK(noisy[1].effect(0).r.x1 ==
        doctest::Approx(0.67 * std::cos(2 * kPi / 3)).epsilon(1e-14));
  CHECK(noisy[1].effect(0).r.x3 ==
        doctest::Approx(0.67 * std::sin(2 * kPi / 3)).epsilon(1e-14));
  CHECK(noisy[1].effect(0).r.x1 == doctest::Approx(-0.335));

  CHECK_THROWS_AS(trine_povm(1.2), std::invalid_argument);
  CHECK_THROWS_AS(trine_povm(-0.1), std::invalid_argument);
}

TEST_CASE("povm closure holds for all constructors") {
  for (double eta : {0.0, 0.3, 0.67, 1.0})
    for (const auto& m : trine_povm(eta)) CHECK(m.validity_residual() < 1e-14);
  for (double v : {0.0, 0.8, 1.0})
    for (const auto& m : pauli_pair(v)) CHECK(m.validity_residual() < 1e-14);
  for (const auto& m : bob_finite_set()) CHECK(m.validity_residual() < 1e-14);
}

TEST_CASE("pauli pair at v = 0.8") {
  auto pp = pauli_pair(0.8);
  CHECK(pp[0].effect(0).t == doctest::Approx(1.0));
  CHECK(pp[0].effect(0).r.x1 == doctest::Approx(0.8));
  CHECK(pp[0].effect(0).r.x3 == doctest::Approx(0.0));
  CHECK(pp[1].effect(0).r.x3 == doctest::Approx(0.8));
}

TEST_CASE("schmidt state: limits and reduced states") {
  TwoQubitState s00 = schmidt_state(0.0, 0.0);
  CHECK(s00.m(0, 0) == doctest::Approx(1.0));
  CHECK(s00.m.cwiseAbs().sum() == doctest::Approx(1.0));

  TwoQubitState bell = schmidt_state(kPi / 4, 0.0);
  RealQubitOperator ra = partial_trace(bell.m, Party::B);
  CHECK(ra.t == doctest::Approx(1.0));
  CHECK(ra.r.norm() == doctest::Approx(0.0).epsilon(1e-14));
  RealQubitOperator rb = partial_trace(bell.m, Party::A);
  CHECK(rb.r.norm() == doctest::Approx(0.0).epsilon(1e-14));

  TwoQubitState s = schmidt_state(0.3, 0.0);
  RealQubitOperator red = partial_trace(s.m, Party::B);
  Eigen::Matrix2d red_m = red.matrix();
  CHECK(red_m(0, 0) == doctest::Approx(std::cos(0.3) * std::cos(0.3)));
  CHECK(red_m(1, 1) == doctest::Approx(std::sin(0.3) * std::sin(0.3)));
  CHECK(s.is_valid());
  CHECK(s.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("partial trace commutes with local rotation") {
  for (double theta : {0.2, 0.5, kPi / 4}) {
    for (double phi : {0.1, 0.9, 2.3}) {
      RealQubitOperator rot = partial_trace(schmidt_state(theta, phi).m, Party::B);
      Eigen::Matrix2d o = planar_rotation(phi);
      Eigen::Matrix2d expected =
          o * partial_trace(schmidt_state(theta, 0.0).m, Party::B).matrix() *
          o.transpose();
      CHECK((rot.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("bob finite set: geometry") {
  auto set = bob_finite_set();
  REQUIRE(set.size() == 13);
  for (const auto& m : set) CHECK(m.arity() == 3);
  // y = 0 binary axis along e1
  CHECK(set[0].effect(0).r.x1 == doctest::Approx(1.0));
  CHECK(set[0].effect(2).t == doctest::Approx(0.0));
  // y = 9 ternary first axis: angle 9*pi/2 = pi/2 (mod 2pi)
  CHECK(set[9].effect(0).r.x1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(set[9].effect(0).r.x3 == doctest::Approx(2.0 / 3.0));
  for (int y = 9; y < 13; ++y)
    for (const auto& e : set[y].elements) CHECK(e.t == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("zeta and depolarize") {
  CHECK(zeta(0.0).r.norm() == doctest::Approx(0.0));
  CHECK(zeta(5.0 / 6.0).r.x3 == doctest::Approx(5.0 / 6.0));
  CHECK(zeta(1.0).psd_margin() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(zeta(1.5), std::invalid_argument);

  auto pp = pauli_pair(1.0);
  QubitPovm same = depolarize(pp[0], 1.0, zeta(0.0));
  CHECK((same.effect(0) - pp[0].effect(0)).r.norm() < 1e-15);

  QubitPovm flat = depolarize(pp[0], 0.0, zeta(0.0));
  CHECK(flat.effect(0).t == doctest::Approx(1.0));
  CHECK(flat.effect(0).r.norm() == doctest::Approx(0.0));

  QubitPovm shrunk = depolarize(pp[0], 0.9268, zeta(0.0));
  CHECK(shrunk.effect(0).t == doctest::Approx(1.0));
  CHECK(shrunk.effect(0).r.x1 == doctest::Approx(0.9268));
  CHECK(shrunk.validity_residual() < 1e-14);
}

TEST_CASE("behavior: product state against trine and Z") {
  QubitPovm zmeas;
  zmeas.elements = {RealQubitOperator{1.0, {0.0, 1.0}},
                    RealQubitOperator{1.0, {0.0, -1.0}}};
  auto beh = behavior(schmidt_state(0.0, 0.0), to_vec(trine_povm(0.67)), {zmeas});
  for (int x = 0; x < 3; ++x) {
    double expect = 0.5 * (1.0 + 0.67 * std::sin(2 * x * kPi / 3));
    CHECK(beh.at(x, 0, 0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(beh.at(x, 0, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(beh.normalization_residual() < 1e-12);
  CHECK(beh.is_proper());
  CHECK(beh.no_signalling_residual() < 1e-12);
}

TEST_CASE("behavior: eta = 0 trine gives uniform Alice marginal") {
  auto beh = behavior(schmidt_state(0.7, 0.4), to_vec(trine_povm(0.0)),
                      bob_finite_set());
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 13; ++y)
      for (int b = 0; b < 3; ++b)
        CHECK(beh.at(x, y, 0, b) == doctest::Approx(beh.at(x, y, 1, b)).epsilon(1e-12));
}

TEST_CASE("behavior: linear in the state") {
  auto alice = to_vec(trine_povm(0.67));
  auto bob = bob_finite_set();
  PseudoState a = schmidt_state(0.3, 0.2).pseudo();
  PseudoState b = schmidt_state(0.6, 1.0).pseudo();
  double w = 0.37;
  PseudoState mix;
  mix.m = w * a.m + (1 - w) * b.m;
  Behavior ba = behavior(a, alice, bob), bb = behavior(b, alice, bob),
           bm = behavior(mix, alice, bob);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 13; ++y)
      for (int aa = 0; aa < 2; ++aa)
        for (int c = 0; c < 3; ++c)
          CHECK(bm.at(x, y, aa, c) ==
                doctest::Approx(w * ba.at(x, y, aa, c) + (1 - w) * bb.at(x, y, aa, c))
                    .epsilon(1e-12));
}

TEST_CASE("bloch symmetry: phi + pi/3 equals cyclic trine relabel") {
  auto bob = bob_finite_set();
  for (double theta : {0.3, kPi / 4}) {
    for (double phi : {0.0, 0.11, 0.5}) {
      auto lhs = behavior(schmidt_state(theta, phi + kPi / 3),
                          to_vec(trine_povm(0.67)), bob);
      // relabeled trine: setting x measured as x+1 (mod 3)
      auto trine = trine_povm(0.67);
      std::vector<QubitPovm> relabeled = {trine[1], trine[2], trine[0]};
      auto rhs = behavior(schmidt_state(theta, phi), relabeled, bob);
      double worst = 0.0;
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 13; ++y)
          worst = std::max(worst, (lhs.table[x][y] - rhs.table[x][y])
                                      .cwiseAbs()
                                      .maxCoeff());
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("reflection symmetry: phi -> -phi swaps trine settings 1 and 2") {
  // conjugating by Z on both sides maps rho(theta,-phi) to rho(theta,phi),
  // sends trine setting x to swap12(x) with flipped outcomes, and reflects
  // Bob's Bloch vectors through e3
  auto bob = bob_finite_set();
  auto flip = [](const QubitPovm& m) {
    QubitPovm out = m;
    std::swap(out.elements[0], out.elements[1]);
    return out;
  };
  for (double theta : {0.3, 0.7}) {
    for (double phi : {0.11, 0.4}) {
      auto lhs = behavior(schmidt_state(theta, -phi), to_vec(trine_povm(0.67)), bob);
      auto trine = trine_povm(0.67);
      std::vector<QubitPovm> swapped = {flip(trine[0]), flip(trine[2]),
                                        flip(trine[1])};
      std::vector<QubitPovm> bob_ref;
      for (const auto& m : bob) {
        QubitPovm mm = m;
        for (auto& e : mm.elements) e.r.x1 = -e.r.x1;
        bob_ref.push_back(mm);
      }
      auto rhs = behavior(schmidt_state(theta, phi), swapped, bob_ref);
      double worst = 0.0;
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 13; ++y)
          worst = std::max(worst,
                           (lhs.table[x][y] - rhs.table[x][y]).cwiseAbs().maxCoeff());
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("pseudo states keep unit per-setting sums") {
  PseudoState chi_like;
  chi_like.m = 1.1 * schmidt_state(0.6, 0.1).m -
               0.1 * kron2(0.5 * Eigen::Matrix2d::Identity(),
                           0.5 * Eigen::Matrix2d::Identity());
  auto beh = behavior(chi_like, to_vec(trine_povm(0.9)), bob_finite_set());
  CHECK(beh.normalization_residual() < 1e-12);
  CHECK(beh.min_entry() < 0.0);  // negativity is allowed here
}
