#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinboard/quantum_lab.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace spinboard;
using testutil::kron;

namespace {

ClassicalConfig random_config(std::mt19937_64& rng, int n) {
  ClassicalConfig c(n);
  for (auto& w : c) w = testutil::random_unit(rng);
  return c;
}

}  // namespace

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(diagonalize(CMat::Identity(10, 10), 8), std::length_error);
  const auto spec = with_torus(heisenberg_model(SpinMagnitude(2), 0.1, 0.1, BondGraph::single_bond()), TorusGeometry(2, 4, 2));
  CHECK_THROWS_AS(GibbsEnsemble::from_model(spec, Frame::rp, 1.0), std::length_error);
}

TEST_CASE("partition function of the two-site zz bond") {
  const auto spec = heisenberg_model(SpinMagnitude(1), 0.0, 0.0, BondGraph::single_bond());
  for (double beta : {0.0, 0.5, 3.0, 40.0}) {
    const auto ens = GibbsEnsemble::from_model(spec, Frame::rp, beta);
    CHECK(ens.log_partition() == doctest::Approx(std::log(2 * std::exp(beta) + 2 * std::exp(-beta))).epsilon(1e-12));
    CHECK(ens.density().trace().real() == doctest::Approx(1.0));
    // <H> = -tanh(beta)
    CHECK(ens.expectation(build_quantum_hamiltonian(spec, Frame::rp)).real() == doctest::Approx(-std::tanh(beta)));
  }
  CHECK_THROWS(GibbsEnsemble::from_model(spec, Frame::rp, -1.0));
}

TEST_CASE("coherent matrix elements") {
  std::mt19937_64 rng(51);
  const auto spec = heisenberg_model(SpinMagnitude(2), 0.4, 0.3, BondGraph::single_bond());
  const auto ens = GibbsEnsemble::from_model(spec, Frame::rp, 0.8);
  const CMat h = build_quantum_hamiltonian(spec, Frame::rp);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const CMat gibbs = es.eigenvectors() * (-0.8 * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                     es.eigenvectors().adjoint();
  for (int k = 0; k < 5; ++k) {
    const auto a = random_config(rng, 2), b = random_config(rng, 2);
    const CVec va = product_state(spec.spin, a), vb = product_state(spec.spin, b);
    const cplx direct = va.dot(gibbs * vb);
    CHECK(std::abs(ens.matrix_element(a, b) - direct) < 1e-12);
    // Hermitian: <a|G|b> = conj <b|G|a>
    CHECK(std::abs(ens.matrix_element(a, b) - std::conj(ens.matrix_element(b, a))) < 1e-12);
    CHECK(ens.log_diagonal(a) == doctest::Approx(std::log(va.dot(gibbs * va).real())).epsilon(1e-12));
    CHECK(ens.log_abs_matrix_element(a, b) == doctest::Approx(std::log(std::abs(direct))).epsilon(1e-10));
  }
}

TEST_CASE("sandwich bound lower side and its beta guard") {
  std::mt19937_64 rng(52);
  for (int ts : {1, 2, 4}) {
    const SpinMagnitude s(ts);
    const auto spec = orbital_compass_model(s, BondGraph::single_bond(0, 2));
    const double bmax = std::sqrt(s.value());
    const auto ens = GibbsEnsemble::from_model(spec, Frame::rp, bmax);
    const HamiltonianSymbols sym(spec);
    for (int k = 0; k < 10; ++k) {
      const auto rep = sandwich_check(ens, sym, random_config(rng, 2));
      // Jensen: log <w|e^{-bH}|w> >= -b <H>_w
      CHECK(rep.lower_slack >= -1e-10);
    }
    const auto hot = GibbsEnsemble::from_model(spec, Frame::rp, 1.01 * bmax);
    CHECK_THROWS(sandwich_check(hot, sym, random_config(rng, 2)));
    CHECK_NOTHROW(sandwich_check(hot, sym, random_config(rng, 2), 1.1));
  }
}

TEST_CASE("full bound report fields") {
  std::mt19937_64 rng(53);
  const auto spec = heisenberg_model(SpinMagnitude(2), 0.2, 0.2, BondGraph::single_bond());
  const auto ens = GibbsEnsemble::from_model(spec, Frame::rp, 1.0);
  const HamiltonianSymbols sym(spec);
  const auto a = random_config(rng, 2), b = random_config(rng, 2);
  const auto rep = full_bound_check(ens, sym, a, b);
  CHECK(rep.excess == doctest::Approx(rep.log_abs + rep.upper_a + 0.25 * rep.dist.mixed));
  CHECK(rep.excess_per_beta_volume == doctest::Approx(rep.excess / 2));
}

TEST_CASE("Berezin-Lieb for a single spin in a field") {
  for (int ts : {1, 2, 5}) {
    const SpinMagnitude s(ts);
    const double S = s.value();
    const auto ops = spin_operators(s);
    const CMat h = -ops.z / S;
    for (double beta : {0.5, 2.0}) {
      const auto rep = berezin_lieb_check(h, s, 1, beta, 64);
      CHECK(rep.classical_lower == doctest::Approx(std::sinh(beta) / beta).epsilon(1e-10));
      const double bu = beta * (S + 1) / S;
      CHECK(rep.classical_upper == doctest::Approx(std::sinh(bu) / bu).epsilon(1e-10));
      double z = 0.0;
      for (int i = 0; i < s.dim(); ++i) z += std::exp(beta * (i - S) / S);
      CHECK(rep.quantum_mid == doctest::Approx(z / s.dim()).epsilon(1e-12));
      CHECK(rep.ordered);
    }
  }
}

TEST_CASE("Berezin-Lieb ordering on two-site models, serial equals parallel") {
  const auto prof = entropy_profile(3, ProfileFamily::power_mean);
  for (int ts : {1, 2}) {
    const SpinMagnitude s(ts);
    std::vector<ModelSpec> specs{
        heisenberg_model(s, 0.5, 0.5, BondGraph::single_bond()),
        large_entropy_model(ModelKind::nematic, s, prof, SignMode::plus, BondGraph::single_bond()),
        ortho120_model(s, BondGraph::single_bond(0, 3)),
    };
    for (const auto& spec : specs) {
      const auto a = berezin_lieb_check(spec, 1.5, 24, Exec::serial);
      const auto b = berezin_lieb_check(spec, 1.5, 24, Exec::parallel);
      CHECK(a.ordered);
      CHECK(a.classical_lower <= a.quantum_mid * (1 + 1e-12));
      CHECK(a.quantum_mid <= a.classical_upper * (1 + 1e-12));
      CHECK(a.classical_lower == b.classical_lower);
      CHECK(a.classical_upper == b.classical_upper);
    }
  }
}

TEST_CASE("event projectors") {
  const SpinMagnitude s(2);
  // full space integrates to the identity
  const auto full = q_hat(s, 1, [](const ClassicalConfig&) { return true; }, 1 << 16, 7);
  CHECK((full.mean - CMat::Identity(3, 3)).norm() < 5e-2);
  CHECK(full.hits == full.samples);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(full.mean(i, i).real() - 1.0) < 5 * full.sigma(i, i) + 1e-12);
  // upper hemisphere: diagonal by symmetry, sums to 3/2 in trace
  const auto up = q_hat(s, 1, [](const ClassicalConfig& c) { return c[0].z() > 0; }, 1 << 16, 8);
  CHECK(std::abs(up.mean.trace().real() - 1.5) < 0.05);
  CHECK((up.mean - up.mean.adjoint()).norm() < 1e-12);
  CHECK_THROWS_AS(q_hat(s, 1, [](const ClassicalConfig&) { return false; }, 1000, 9), std::domain_error);
  // same seed, same batches
  const auto again = q_hat(s, 1, [](const ClassicalConfig& c) { return c[0].z() > 0; }, 1 << 16, 8);
  CHECK((again.mean - up.mean).norm() == 0.0);
}

TEST_CASE("placed block operators") {
  // d = 1, L = 4, B = 2: block 1 is the mirror image of block 0, conjugated
  const TorusGeometry g(1, 4, 2);
  const int dim = 2;
  std::mt19937_64 rng(54);
  const CMat a = testutil::random_matrix(rng, dim), b = testutil::random_matrix(rng, dim);
  const CMat op = kron(a, b);
  const CMat id = CMat::Identity(dim, dim);
  CHECK((place_block_operator(g, op, {0}, dim) - kron(kron(a, b), kron(id, id))).norm() < 1e-12);
  // sites 2, 3 hold local 1, 0
  CHECK((place_block_operator(g, op, {1}, dim) - kron(kron(id, id), kron(CMat(b.conjugate()), CMat(a.conjugate())))).norm() < 1e-12);
}

TEST_CASE("quantum chessboard inequality on a d = 1 chain") {
  const TorusGeometry g(1, 4, 2);
  const auto spec = with_torus(heisenberg_model(SpinMagnitude(1), 0.3, 0.3, BondGraph::single_bond()), g);
  auto e1 = [](const ClassicalConfig& c) { return c[0].z() > 0 && c[1].z() > 0; };
  auto e2 = [](const ClassicalConfig& c) { return c[0].z() < 0 && c[1].z() < 0; };
  const auto rep = chessboard_check_quantum(spec, 1.0, e1, e2, 0, 1, 1 << 14, 3);
  CHECK(rep.pass);
  CHECK(rep.lhs >= 0.0);
  CHECK(rep.lhs <= rep.rhs + 3 * rep.sigma);
  // identical events on translate-equivalent blocks: rhs >= lhs as well
  const auto same = chessboard_check_quantum(spec, 1.0, e1, e1, 0, 1, 1 << 14, 4);
  CHECK(same.pass);
  CHECK_THROWS(chessboard_check_quantum(spec, 1.0, e1, e1, 0, 0, 100, 1));
}
