#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinboard/kernels.hpp"

#include <cmath>
#include <numbers>

using namespace spinboard;

TEST_CASE("projector sum: serial and parallel agree bitwise") {
  const SpinMagnitude s(3);
  auto gen = [&](std::int64_t i, CVec& v, cplx& w) {
    const double t = 0.001 * i;
    v = coherent_state(s, from_angles(std::fmod(t, std::numbers::pi), 7 * t));
    w = cplx(1.0 + std::sin(t), 0.0);
  };
  const CMat a = projector_sum(5000, s.dim(), gen, Exec::serial);
  const CMat b = projector_sum(5000, s.dim(), gen, Exec::parallel);
  CHECK((a - b).norm() == 0.0);
  // against a plain loop
  CMat naive = CMat::Zero(s.dim(), s.dim());
  for (std::int64_t i = 0; i < 5000; ++i) {
    CVec v;
    cplx w;
    gen(i, v, w);
    naive += w * v * v.adjoint();
  }
  CHECK((a - naive).norm() < 1e-10 * naive.norm());
}

TEST_CASE("lattice log sum against a direct double loop") {
  for (int L : {4, 7, 16}) {
    const double wx2 = 0.3, wz2 = 0.7, lam = 0.05;
    double naive = 0.0;
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        const double k1 = 2 * std::numbers::pi * i / L, k2 = 2 * std::numbers::pi * j / L;
        naive += std::log(lam + wz2 * (2 - 2 * std::cos(k1)) + wx2 * (2 - 2 * std::cos(k2)));
      }
    CHECK(lattice_log_sum(wx2, wz2, lam, L, Exec::serial) == doctest::Approx(naive).epsilon(1e-12));
    CHECK(lattice_log_sum(wx2, wz2, lam, L, Exec::serial) == lattice_log_sum(wx2, wz2, lam, L, Exec::parallel));
  }
}

TEST_CASE("indexed sum") {
  auto f = [](std::int64_t i) { return 1.0 / ((i + 1.0) * (i + 1.0)); };
  const double a = indexed_sum(100000, f, Exec::serial);
  CHECK(a == indexed_sum(100000, f, Exec::parallel));
  CHECK(a == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1.0 / 100000).epsilon(1e-9));
  CHECK(indexed_sum(0, f, Exec::parallel) == 0.0);
  CHECK(indexed_sum(3, f, Exec::parallel) == doctest::Approx(1 + 0.25 + 1.0 / 9));
}

TEST_CASE("random streams") {
  auto a = make_stream(5, 1), b = make_stream(5, 1), c = make_stream(5, 2), d = make_stream(6, 1);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  auto r = make_stream(9, 0);
  Vec3 mean = Vec3::Zero();
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Vec3 w = uniform_sphere(r);
    CHECK(std::abs(w.norm() - 1.0) < 1e-12);
    mean += w;
  }
  mean /= n;
  // each component has variance 1/3
  CHECK(mean.norm() < 5 * std::sqrt(1.0 / (3 * n)) * std::sqrt(3.0));
}

TEST_CASE("Monte Carlo projector batches are reproducible for any execution mode") {
  const SpinMagnitude s(2);
  auto event = [](const ClassicalConfig& c) { return c[0].z() > 0.2 && c[1].x() < 0.5; };
  const auto a = qhat_batches(s, 2, event, 20000, 8, 42, Exec::serial);
  const auto b = qhat_batches(s, 2, event, 20000, 8, 42, Exec::parallel);
  REQUIRE(a.batch_means.size() == 8);
  CHECK(a.samples_per_batch == 2500);
  for (int i = 0; i < 8; ++i) {
    CHECK((a.batch_means[i] - b.batch_means[i]).norm() == 0.0);
    CHECK(a.hits[i] == b.hits[i]);
  }
  const auto c = qhat_batches(s, 2, event, 20000, 8, 43, Exec::parallel);
  CHECK((a.batch_means[0] - c.batch_means[0]).norm() > 0.0);
}
