#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinboard/su2kit.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace spinboard;
using testutil::kron;

namespace {
const int kTwoS[] = {1, 2, 3, 4, 5, 6};
}

TEST_CASE("spin matrices match the ladder construction and close the algebra") {
  for (int ts : kTwoS) {
    const SpinMagnitude s(ts);
    const auto ops = spin_operators(s);
    const auto ref = testutil::textbook_ops(ts);
    CHECK((ops.x - ref.x).norm() < 1e-12);
    CHECK((ops.y - ref.y).norm() < 1e-12);
    CHECK((ops.z - ref.z).norm() < 1e-12);
    const cplx i(0, 1);
    CHECK((ops.x * ops.y - ops.y * ops.x - i * ops.z).norm() < 1e-12);
    CHECK((ops.y * ops.z - ops.z * ops.y - i * ops.x).norm() < 1e-12);
    const CMat cas = ops.x * ops.x + ops.y * ops.y + ops.z * ops.z;
    const double S = s.value();
    CHECK((cas - S * (S + 1) * CMat::Identity(s.dim(), s.dim())).norm() < 1e-11);
    CHECK((ops.plus - (ops.x + i * ops.y)).norm() < 1e-12);
    CHECK((ops.minus - ops.plus.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("spin magnitude validation") {
  CHECK_THROWS(SpinMagnitude(0));
  CHECK_THROWS(SpinMagnitude(-3));
  CHECK(SpinMagnitude::from_value(1.5).two_s() == 3);
  CHECK_THROWS(SpinMagnitude::from_value(0.7));
}

TEST_CASE("coherent states are top eigenvectors of w.S") {
  std::mt19937_64 rng(11);
  for (int ts : kTwoS) {
    const SpinMagnitude s(ts);
    const auto ops = spin_operators(s);
    for (int k = 0; k < 10; ++k) {
      const Vec3 w = testutil::random_unit(rng);
      const CVec v = coherent_state(s, w);
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
      const CMat ws = w.x() * ops.x + w.y() * ops.y + w.z() * ops.z;
      CHECK((ws * v - s.value() * v).norm() < 1e-10);
      // expectation of S is S w
      const Vec3 m(v.dot(ops.x * v).real(), v.dot(ops.y * v).real(), v.dot(ops.z * v).real());
      CHECK((m - s.value() * w).norm() < 1e-10);
    }
  }
}

TEST_CASE("overlap closed form agrees with inner products and the modulus formula") {
  std::mt19937_64 rng(12);
  for (int ts : kTwoS) {
    const SpinMagnitude s(ts);
    for (int k = 0; k < 10; ++k) {
      const Vec3 a = testutil::random_unit(rng), b = testutil::random_unit(rng);
      const cplx direct = coherent_state(s, b).dot(coherent_state(s, a));
      CHECK(std::abs(overlap(s, a, b) - direct) < 1e-12);
      // |<b|a>| = ((1 + a.b)/2)^S
      CHECK(std::abs(std::abs(direct) - std::pow(0.5 * (1 + a.dot(b)), s.value())) < 1e-12);
    }
  }
}

TEST_CASE("angles round-trip and sigma flips y") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const Vec3 w = testutil::random_unit(rng);
    const auto [t, p] = to_angles(w);
    CHECK((from_angles(t, p) - w).norm() < 1e-12);
    CHECK(sigma(w).y() == doctest::Approx(-w.y()));
  }
  CHECK(to_angles(Vec3(0, 0, 1)).second == 0.0);
  CHECK(to_angles(Vec3(0, 0, -1)).second == 0.0);
}

TEST_CASE("sigma is complex conjugation on coherent states up to phase") {
  std::mt19937_64 rng(14);
  for (int ts : kTwoS) {
    const SpinMagnitude s(ts);
    const Vec3 w = testutil::random_unit(rng);
    const CVec v = coherent_state(s, w).conjugate();
    CHECK(std::abs(std::abs(coherent_state(s, sigma(w)).dot(v)) - 1.0) < 1e-12);
  }
}

TEST_CASE("rotation unitary conjugates spin vectors by the documented rotation") {
  std::mt19937_64 rng(15);
  for (int ts : {1, 2, 3, 4}) {
    const SpinMagnitude s(ts);
    const auto ops = spin_operators(s);
    for (int k = 0; k < 5; ++k) {
      const Vec3 axis = testutil::random_unit(rng);
      const double t = 2.0 * std::numbers::pi * (k + 0.37) / 5.0;
      const CMat u = rotation_unitary(s, axis, t);
      CHECK((u * u.adjoint() - CMat::Identity(s.dim(), s.dim())).norm() < 1e-11);
      const Mat3 r = rotation_matrix(axis, t);
      // R = AngleAxis(-t, axis)
      CHECK((r - Eigen::AngleAxisd(-t, axis).toRotationMatrix()).norm() < 1e-12);
      const Vec3 w = testutil::random_unit(rng);
      const CMat lhs = u * (w.x() * ops.x + w.y() * ops.y + w.z() * ops.z) * u.adjoint();
      const Vec3 rw = r * w;
      const CMat rhs = rw.x() * ops.x + rw.y() * ops.y + rw.z() * ops.z;
      CHECK((lhs - rhs).norm() < 1e-10);
      // coherent states map to coherent states
      CHECK(std::abs(std::abs(coherent_state(s, rw).dot(u * coherent_state(s, w))) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("product state puts site 0 in the most significant factor") {
  const SpinMagnitude s(2);
  const ClassicalConfig c{Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 0, -1)};
  const CVec expect = kron(kron(coherent_state(s, c[0]), coherent_state(s, c[1])), coherent_state(s, c[2]));
  CHECK((product_state(s, c) - expect).norm() < 1e-14);
}

TEST_CASE("configuration distances") {
  const SpinMagnitude s(4);  // S = 2
  const ClassicalConfig a{Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const ClassicalConfig b{Vec3(0, 0, -1), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  const auto d = config_distances(s, a, b);
  const double g1 = 2.0, g3 = std::sqrt(2.0);
  CHECK(d.l1 == doctest::Approx(g1 + g3));
  CHECK(d.l2sq == doctest::Approx(4.0 + 2.0));
  CHECK(d.mixed == doctest::Approx(std::min(std::sqrt(2.0) * g1, 2.0 * 4.0) + std::min(std::sqrt(2.0) * g3, 2.0 * 2.0)));
  CHECK(d.sqrt_s_l1 == doctest::Approx(std::sqrt(2.0) * (g1 + g3)));
  CHECK(differing_sites(a, b) == 2);
  CHECK_THROWS_AS(config_distances(s, a, ClassicalConfig(2)), std::invalid_argument);
}

TEST_CASE("overlap decays at least like exp(-eta * mixed distance)") {
  std::mt19937_64 rng(16);
  for (int ts : kTwoS) {
    const SpinMagnitude s(ts);
    for (int k = 0; k < 50; ++k) {
      ClassicalConfig a(3), b(3);
      for (int r = 0; r < 3; ++r) {
        a[r] = testutil::random_unit(rng);
        b[r] = (a[r] + 0.3 * (k % 5) * testutil::random_unit(rng)).normalized();
      }
      const auto d = config_distances(s, a, b);
      const double ov = std::abs(product_state(s, b).dot(product_state(s, a)));
      CHECK(ov <= std::exp(-d.eta * d.mixed) + 1e-12);
    }
  }
}

TEST_CASE("checked power and embedding helpers") {
  CHECK(checked_power(3, 4, 100) == 81);
  CHECK_THROWS_AS(checked_power(3, 5, 100), std::length_error);

  std::mt19937_64 rng(17);
  const int d = 3;
  const CMat a = testutil::random_matrix(rng, d);
  const CMat id = CMat::Identity(d, d);
  CHECK((embed_site_operator(a, 1, 3, d) - kron(kron(id, a), id)).norm() < 1e-12);
  CHECK((embed_site_operator(a, 0, 2, d) - kron(a, id)).norm() < 1e-12);

  const CMat b = testutil::random_matrix(rng, d);
  const CMat ab = kron(a, b);
  CHECK((embed_two_site_operator(ab, 0, 2, 3, d) - kron(kron(a, id), b)).norm() < 1e-12);
  // reversed site order swaps the factors
  CHECK((embed_two_site_operator(ab, 2, 0, 3, d) - kron(kron(b, id), a)).norm() < 1e-12);

  const CMat c = testutil::random_matrix(rng, d);
  const CMat abc = kron(kron(a, b), c);
  // factor r goes to perm[r]: a -> 2, b -> 0, c -> 1
  CHECK((permute_sites(abc, {2, 0, 1}, d) - kron(kron(b, c), a)).norm() < 1e-12);
}
