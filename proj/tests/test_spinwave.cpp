#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinboard/spinwave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinboard;

namespace {

constexpr double pi = std::numbers::pi;

// Catalan's constant from the alternating series, averaging two
// consecutive partial sums to cancel the leading oscillation.
double catalan_series() {
  double s = 0.0, prev = 0.0;
  const int n = 2'000'000;
  for (int k = 0; k < n; ++k) {
    prev = s;
    s += (k % 2 ? -1.0 : 1.0) / ((2.0 * k + 1) * (2.0 * k + 1));
  }
  return 0.5 * (s + prev);
}

Vec3 at_deg(double deg) { return quarter_circle(deg * pi / 180.0); }

}  // namespace

TEST_CASE("dispersion") {
  const Vec3 ex(1, 0, 0);
  CHECK(dhat(0, 0, ex) == 0.0);
  CHECK(dhat(pi, pi, ex) == doctest::Approx(4.0));
  const Vec3 w = at_deg(30);
  const Vec3 swapped(w.z(), 0, w.x());
  for (auto [k1, k2] : {std::pair{0.3, 1.7}, std::pair{2.0, -0.4}})
    CHECK(dhat(k1, k2, w) == doctest::Approx(dhat(k2, k1, swapped)));
}

TEST_CASE("regularized free energy: closed form, lattice agreement, monotonicity") {
  const Vec3 ex(1, 0, 0);
  CHECK(f_lambda(ex, 1.0, SumMode::integral) == doctest::Approx(0.5 * std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(f_lambda(ex, 1.0, SumMode::integral) == doctest::Approx(0.4812118).epsilon(1e-7));
  for (double deg : {0.0, 20.0, 45.0, 80.0}) {
    const Vec3 w = at_deg(deg);
    CHECK(std::abs(f_lambda(w, 0.1, SumMode::lattice, 64) - f_lambda(w, 0.1, SumMode::integral)) < 1e-3);
    double prev = 1e9;
    for (double lam : {1.0, 0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4}) {
      const double f = f_lambda(w, lam, SumMode::integral);
      CHECK(f < prev);
      prev = f;
    }
  }
  CHECK_THROWS(f_lambda(ex, 0.0, SumMode::lattice, 16));
  CHECK_THROWS(f_lambda(ex, -1.0, SumMode::integral));
  CHECK_THROWS(f_lambda(Vec3(0, 1, 0), 1.0, SumMode::integral));
}

TEST_CASE("lattice sums converge in L") {
  const Vec3 w = at_deg(30);
  const double exact = f_lambda(w, 0.1, SumMode::integral);
  double prev = 1e9;
  for (int L : {16, 32, 64, 128, 256, 512}) {
    const double err = std::abs(f_lambda(w, 0.1, SumMode::lattice, L) - exact);
    // exponential convergence at lambda > 0 reaches rounding quickly
    CHECK(err <= std::max(prev, 1e-13));
    prev = err;
  }
  CHECK(prev < 1e-6);
  CHECK(f_lambda(w, 0.1, SumMode::lattice, 128, Exec::serial) == f_lambda(w, 0.1, SumMode::lattice, 128, Exec::parallel));
}

TEST_CASE("lambda to zero limit") {
  const double G = catalan_series();
  CHECK(G == doctest::Approx(0.915965594177219).epsilon(1e-12));
  CHECK(std::abs(f_infinite(at_deg(0)).value) < 1e-3);
  const double diag = 0.5 * (4 * G / pi - std::log(2.0));
  CHECK(diag == doctest::Approx(0.2365).epsilon(1e-3));
  CHECK(std::abs(f_infinite(at_deg(45)).value - diag) < 5e-3);
  for (double deg : {10.0, 25.0, 40.0})
    CHECK(f_infinite(at_deg(deg)).value == doctest::Approx(f_infinite(at_deg(90 - deg)).value).epsilon(1e-9));
  CHECK_THROWS(f_infinite(at_deg(10), SumMode::integral, 0, {1e-2, 1e-3}));
}

TEST_CASE("minimization over the quarter circle") {
  const auto m = minimize_f(1.0);
  CHECK(m.theta_deg.size() == 91);
  CHECK(m.argmin_deg == std::vector<double>{0.0, 90.0});
  CHECK(m.gap > 0.0);
  CHECK(m.monotone_to_45);
  CHECK_THROWS(minimize_f(2.0));
}

TEST_CASE("direct Monte Carlo free energy is reproducible") {
  McOptions o;
  o.burn_in = 50;
  o.sweeps = 100;
  o.batches = 10;
  o.ti_nodes = 4;
  const double beta = 100.0;
  const double delta = std::pow(beta, -5.0 / 12);
  const auto a = f_mc_direct(4, delta, beta, Vec3(1, 0, 0), o, 17);
  const auto b = f_mc_direct(4, delta, beta, Vec3(1, 0, 0), o, 17);
  CHECK(a.value - b.value == 0.0);
  CHECK(std::isfinite(a.value));
  CHECK(a.beta_delta2 == doctest::Approx(beta * delta * delta));
  CHECK_THROWS(f_mc_direct(4, delta, 0.5, Vec3(1, 0, 0), o, 17));
}

TEST_CASE("deviation identity of the 120-degree model") {
  const TorusGeometry g(3, 8, 1);
  CHECK(deviation_identity_check(g, ClassicalConfig(g.n_sites(), hex_vector(0)), 0.05).residual == 0.0);
  const auto c1 = deviation_config(g, 0.3, 0.05, 7);
  const auto r1 = deviation_identity_check(g, c1, 0.05);
  CHECK(r1.max_y <= 0.05);
  CHECK(r1.max_gap <= 0.05);
  CHECK(r1.scaled < 10.0);
  const auto r2 = deviation_identity_check(g, deviation_config(g, 0.3, 0.025, 7), 0.025);
  const double ratio = r1.residual / r2.residual;
  CHECK(ratio >= 5.0);
  CHECK(ratio <= 12.0);
  // hypotheses violated: a spin far out of plane
  auto bad = c1;
  bad[3] = Vec3(0, 1, 0);
  CHECK_THROWS_AS(deviation_identity_check(g, bad, 0.05), std::invalid_argument);
  CHECK_THROWS(deviation_identity_check(TorusGeometry(2, 4, 1), ClassicalConfig(16, hex_vector(0)), 0.05));
}
