#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinboard/classical_mc.hpp"
#include "test_util.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace spinboard;

namespace {

constexpr double pi = std::numbers::pi;

Vec3 polar_tilt(double theta, double phi = 0.3) { return from_angles(theta, phi); }

ModelSpec af_torus(int d, int L, int B, double j1 = 0.0, double j2 = 0.0) {
  return with_torus(heisenberg_model(SpinMagnitude(2), j1, j2, BondGraph::single_bond()), TorusGeometry(d, L, B));
}

McOptions quick(int sweeps = 600, int nodes = 8) {
  McOptions o;
  o.burn_in = 200;
  o.sweeps = sweeps;
  o.batches = 20;
  o.ti_nodes = nodes;
  return o;
}

}  // namespace

TEST_CASE("site regions") {
  const auto cap = SiteRegion::cap({0, 0, 2}, 0.4);
  CHECK(cap.contains(polar_tilt(0.39)));
  CHECK_FALSE(cap.contains(polar_tilt(0.41)));
  CHECK_FALSE(cap.contains(polar_tilt(pi - 0.1)));
  CHECK(cap.area_fraction() == doctest::Approx(std::pow(std::sin(0.2), 2)));
  const auto band = SiteRegion::band({0, 0, 1}, 0.4);
  CHECK(band.contains(polar_tilt(pi - 0.1)));
  CHECK(band.area_fraction() == doctest::Approx(2 * cap.area_fraction()));
  CHECK(SiteRegion::band({1, 0, 0}, pi / 2).is_full());
  CHECK(SiteRegion::cap({1, 0, 0}, pi).is_full());
  CHECK_FALSE(cap.is_full());
  const auto tilted = SiteRegion::cap(Vec3(0, 1, 1).normalized(), 0.3);
  CHECK((tilted.conjugated().axis - Vec3(0, -1, 1).normalized()).norm() < 1e-15);
}

TEST_CASE("block classification") {
  // Heisenberg: every spin at polar angle 0.05, kappa 0.2
  const auto heis = heisenberg_events(0.2, 4);
  CHECK(classify_block(heis, ClassicalConfig(4, polar_tilt(0.05))) == 0);
  CHECK(classify_block(heis, ClassicalConfig(4, polar_tilt(pi - 0.05))) == 1);
  ClassicalConfig mixed(4, polar_tilt(0.05));
  mixed[2] = polar_tilt(pi - 0.05);
  CHECK(classify_block(heis, mixed) == -1);
  // compass: 45 degrees in the xz-plane with kappa 0.3 is bad
  const Vec3 diag = Vec3(1, 0, 1).normalized();
  CHECK(classify_block(compass_events(0.3, 4), ClassicalConfig(4, diag)) == -1);
  CHECK(classify_block(compass_events(0.3, 4), ClassicalConfig(4, Vec3(-1, 0, 0))) == 0);
  // 120-degree: caps at the hexagonal directions
  CHECK(classify_block(ortho120_events(0.3, 8), ClassicalConfig(8, hex_vector(2))) == 2);
  // overlapping events
  GoodEventFamily dup{{heis.events[0], heis.events[0]}};
  CHECK_THROWS_AS(classify_block(dup, ClassicalConfig(4, polar_tilt(0.0))), std::logic_error);
}

TEST_CASE("entropy events") {
  const auto prof = entropy_profile(16, ProfileFamily::power_mean);
  const auto spec = large_entropy_model(ModelKind::xy_nonlinear, SpinMagnitude(2), prof, SignMode::plus,
                                        BondGraph::single_bond(0, 2));
  const auto fam = entropy_events(spec, 0.15, 2, 2);
  REQUIRE(fam.events.size() == 2);
  // aligned in the coupled plane: every bond energetically good
  CHECK(classify_block(fam, ClassicalConfig(4, Vec3(1, 0, 0))) == 0);
  // alternating along a coupled axis: all bonds far from aligned
  ClassicalConfig alt{Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(-1, 0, 0), Vec3(1, 0, 0)};
  CHECK(classify_block(fam, alt) == 1);
  ClassicalConfig one_bad{Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(-1, 0, 0)};
  CHECK(classify_block(fam, one_bad) == -1);
  CHECK_THROWS(entropy_events(af_torus(2, 4, 2), 0.15, 2, 2));
}

TEST_CASE("mixed bond patterns leave at least 1/a_d more disordered bonds than entropic sites") {
  for (int d : {2, 3}) {
    const double a_d = d * std::pow(2.0, d - 1);
    const std::uint64_t all = (1ULL << static_cast<int>(a_d)) - 1;
    for (std::uint64_t m = 1; m < all; ++m) {
      const auto f = pattern_fractions(d, m);
      CHECK(f.f_b >= f.f_s + 1.0 / a_d - 1e-15);
    }
  }
}

TEST_CASE("incompatibility scan on assembled configurations") {
  const TorusGeometry g(2, 8, 2);
  const auto fam = heisenberg_events(0.3, 4);
  ClassicalConfig c(g.n_sites());
  for (int s = 0; s < g.n_sites(); ++s) c[s] = g.site_coords(s)[0] < 4 ? polar_tilt(0.1) : polar_tilt(pi - 0.1);
  const auto rep = incompatibility_scan(g, fam, c);
  CHECK(rep.pairs_checked > 0);
  CHECK(rep.violations == 0);
  // uniform configuration: no distinct neighbors to check
  CHECK(incompatibility_scan(g, fam, ClassicalConfig(64, polar_tilt(0.0))).pairs_checked == 0);

  // random configurations made of aligned blocks
  std::mt19937_64 rng(61);
  const auto fam6 = ortho120_events(0.3, 4);
  long long checked = 0;
  for (int k = 0; k < 200; ++k) {
    ClassicalConfig r(g.n_sites());
    for (int b = 0; b < g.n_blocks(); ++b) {
      const Vec3 v = hex_vector(static_cast<int>(rng() % 6));
      PlacedBlock p = PlacedBlock::origin(2);
      p.position = g.block_coords(b);
      for (int u = 0; u < 4; ++u) r[placed_site(g, p, u)] = v;
    }
    const auto s = incompatibility_scan(g, fam6, r);
    checked += s.pairs_checked;
    CHECK(s.violations == 0);
  }
  CHECK(checked > 0);
}

TEST_CASE("Metropolis detailed balance on a two-site discrete chain") {
  // two Ising-like spins +-z, bond -s1 s2, proposal flips a random site; the
  // exact transition matrix must have the Boltzmann weights as its fixed point
  const double beta = 0.7;
  auto energy = [](int st) {
    const int a = (st & 1) ? 1 : -1, b = (st & 2) ? 1 : -1;
    return -static_cast<double>(a * b);
  };
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  for (int st = 0; st < 4; ++st) {
    for (int site : {0, 1}) {
      const int nx = st ^ (1 << site);
      const double acc = metropolis_acceptance(energy(nx) - energy(st), beta);
      t(st, nx) += 0.5 * acc;
      t(st, st) += 0.5 * (1 - acc);
    }
  }
  Eigen::RowVector4d p = Eigen::RowVector4d::Constant(0.25);
  for (int i = 0; i < 2000; ++i) p = p * t;
  Eigen::RowVector4d boltz;
  for (int st = 0; st < 4; ++st) boltz(st) = std::exp(-beta * energy(st));
  boltz /= boltz.sum();
  CHECK((p - boltz).cwiseAbs().maxCoeff() < 1e-3);
  // and pairwise balance
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(std::abs(boltz(a) * t(a, b) - boltz(b) * t(b, a)) < 1e-15);
  CHECK(metropolis_acceptance(-1.0, 2.0) == 1.0);
  CHECK(metropolis_acceptance(1.0, 2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("isolated bond: Langevin function") {
  const auto h = make_classical_hamiltonian(BondGraph::single_bond(),
                                            [](int, int, const Vec3& a, const Vec3& b) { return -a.dot(b); });
  McOptions o = quick(20000);
  for (double beta : {0.5, 2.0, 6.0}) {
    const auto est = mean_energy(h, beta, {}, o, 99, 0);
    const double langevin = 1.0 / std::tanh(beta) - 1.0 / beta;
    CHECK(std::abs(-est.mean - langevin) < 3 * est.sigma);
    CHECK(est.sigma < 0.02);
  }
}

TEST_CASE("sampler basics: unit norms, symmetric infinite-temperature average") {
  const auto spec = af_torus(2, 4, 2, 0.2, 0.2);
  const auto h = classical_hamiltonian(spec);
  MetropolisSampler m(h, 0.0, 5, 0);
  m.randomize();
  double sum = 0.0, sq = 0.0;
  const int batches = 40, per = 50;
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (int k = 0; k < per; ++k) {
      m.sweep();
      for (const auto& w : m.config()) acc += w.z();
    }
    acc /= per * 16.0;
    sum += acc;
    sq += acc * acc;
  }
  const double mean = sum / batches;
  const double sigma = std::sqrt((sq / batches - mean * mean) / (batches - 1));
  CHECK(std::abs(mean) < 3 * sigma + 1e-12);
  for (const auto& w : m.config()) CHECK(std::abs(w.norm() - 1.0) < 1e-12);
  CHECK(m.energy() == doctest::Approx(h.energy(m.config())).epsilon(1e-10));

  // constrained chains never leave their regions
  SiteConstraints cons(16, SiteRegion::cap({0, 0, 1}, 0.5));
  MetropolisSampler c(h, 3.0, 6, 1, cons);
  c.set_config(ClassicalConfig(16, Vec3(0, 0, 1)));
  c.tune(50);
  for (int k = 0; k < 200; ++k) {
    c.sweep();
    for (const auto& w : c.config()) CHECK(cons[0]->contains(w));
  }
  CHECK(c.acceptance() > 0.05);
}

TEST_CASE("energy bookkeeping matches the model") {
  std::mt19937_64 rng(62);
  const auto spec = af_torus(2, 4, 1, 0.4, 0.1);
  const auto h = classical_hamiltonian(spec);
  ClassicalConfig c(16);
  for (auto& w : c) w = testutil::random_unit(rng);
  CHECK(h.energy(c) == doctest::Approx(classical_energy(spec, c)).epsilon(1e-13));
  const Vec3 w = testutil::random_unit(rng);
  ClassicalConfig c2 = c;
  c2[5] = w;
  CHECK(h.local_energy(c, 5, w) - h.local_energy(c, 5, c[5]) == doctest::Approx(h.energy(c2) - h.energy(c)).epsilon(1e-12));
}

TEST_CASE("log probability: anchors, full space and determinism") {
  const auto spec = af_torus(2, 4, 2);
  const auto h = classical_hamiltonian(spec);
  SiteConstraints full(16, SiteRegion::band({1, 0, 0}, pi / 2));
  CHECK(log_probability(h, full, 2.0, quick(), 1).value == 0.0);
  CHECK(log_probability(h, {}, 2.0, quick(), 1).value == 0.0);
  SiteConstraints caps(16, SiteRegion::cap({0, 0, 1}, 0.8));
  const auto zero = log_probability(h, caps, 0.0, quick(), 1);
  CHECK(zero.value == doctest::Approx(16 * std::log(std::pow(std::sin(0.4), 2))));
  const auto a = log_probability(h, caps, 1.0, quick(300, 4), 9, Exec::serial);
  const auto b = log_probability(h, caps, 1.0, quick(300, 4), 9, Exec::parallel);
  CHECK(a.value == b.value);
  CHECK(a.sigma == b.sigma);
  // ferromagnetic caps gain weight at positive beta
  CHECK(a.value > zero.value);
  CHECK_THROWS(log_probability(h, caps, -1.0, quick(), 1));
}

TEST_CASE("frakp at beta = 0 and for the full space") {
  const double kappa = 0.6;
  for (auto [d, L, B] : std::vector<std::array<int, 3>>{{2, 4, 2}, {1, 8, 2}, {3, 2, 1}}) {
    const auto spec = af_torus(d, L, B);
    const auto ev = heisenberg_events(kappa, spec.torus->block_volume()).events[0];
    const auto f = estimate_frakp(spec, 0.0, ev, quick(), 3);
    CHECK(f.value == doctest::Approx(std::pow((1 - std::cos(kappa)) / 2, spec.torus->block_volume())).epsilon(1e-12));
    const auto all = uniform_product_event("all", SiteRegion::cap({0, 0, 1}, pi), spec.torus->block_volume());
    CHECK(estimate_frakp(spec, 1.5, all, quick(), 3).value == 1.0);
  }
}

TEST_CASE("dissemination") {
  const TorusGeometry g(2, 4, 2);
  const auto ev = product_event("tilted", {SiteRegion::cap(Vec3(0, 1, 1).normalized(), 0.3),
                                          SiteRegion::cap({1, 0, 0}, 0.3), SiteRegion::cap({0, 0, 1}, 0.3),
                                          SiteRegion::cap({0, 0, -1}, 0.3)});
  const auto cons = disseminate(g, ev);
  int constrained = 0;
  for (const auto& r : cons) constrained += r.has_value();
  CHECK(constrained == 16);
  // block (1, 0) is the mirror image in x and conjugated
  const PlacedBlock p = PlacedBlock::origin(2).moved_by({1, 0}, true);
  for (int u = 0; u < 4; ++u) {
    const auto& r = cons[placed_site(g, p, u)];
    REQUIRE(r.has_value());
    CHECK((r->axis - sigma(ev.product[u].axis)).norm() < 1e-15);
  }
  const auto single = place_event(g, ev, {1, 1});
  int count = 0;
  for (const auto& r : single) count += r.has_value();
  CHECK(count == 4);
}

TEST_CASE("classical chessboard") {
  const auto spec = af_torus(2, 4, 2, 0.3, 0.3);
  const auto fam = heisenberg_events(0.9, 4);
  // beta = 0, product events: equality by independence
  const auto zero = chessboard_check_classical(spec, 0.0, fam.events[0], fam.events[1], 0, 3, quick(), 5);
  CHECK(zero.lhs == doctest::Approx(zero.rhs).epsilon(1e-12));
  // positive beta, two cap events
  const auto hot = chessboard_check_classical(spec, 1.0, fam.events[0], fam.events[1], 0, 1, quick(800, 8), 6);
  CHECK(hot.pass);
  CHECK(hot.margin >= -3 * hot.sigma);
  CHECK_THROWS(chessboard_check_classical(spec, 1.0, fam.events[0], fam.events[1], 2, 2, quick(), 1));
}

TEST_CASE("frakp is subadditive: band versus its two caps") {
  const auto spec = af_torus(2, 4, 1);
  const double kappa = 0.7;
  const auto up = uniform_product_event("up", SiteRegion::cap({0, 0, 1}, kappa), 1);
  const auto down = uniform_product_event("down", SiteRegion::cap({0, 0, -1}, kappa), 1);
  const auto band = uniform_product_event("band", SiteRegion::band({0, 0, 1}, kappa), 1);
  const auto o = quick(800, 8);
  const auto pu = estimate_frakp(spec, 1.0, up, o, 11);
  const auto pd = estimate_frakp(spec, 1.0, down, o, 12);
  const auto pb = estimate_frakp(spec, 1.0, band, o, 13);
  CHECK(pb.value <= pu.value + pd.value + 3 * std::sqrt(pu.sigma * pu.sigma + pd.sigma * pd.sigma + pb.sigma * pb.sigma));
}

TEST_CASE("jump statistic and rank correlation") {
  CHECK(jump_statistic({0, 1, 2, 3, 10, 11}) == doctest::Approx(7.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 25, 100}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // ties take averaged ranks: y ranks 1.5, 1.5, 3, 4
  const double rho = spearman_rho({1, 2, 3, 4}, {5, 5, 6, 7});
  CHECK(rho == doctest::Approx(0.9486832980505138).epsilon(1e-12));
}

TEST_CASE("beta scan census") {
  const auto spec = af_torus(2, 8, 2, 0.5, 0.5);
  const auto fam = heisenberg_events(0.3, 4);
  const std::vector<double> grid{2.0, 5.0, 10.0, 20.0};
  std::vector<Observable> obs{{"mz", [](const ClassicalConfig& c) {
                                 double s = 0;
                                 for (const auto& w : c) s += w.z();
                                 return s / c.size();
                               }}};
  const auto scan = beta_scan(spec, grid, fam, obs, quick(800), 21, Vec3(0, 0, 1));
  REQUIRE(scan.points.size() == grid.size());
  CHECK(scan.event_labels == std::vector<std::string>{"G+", "G-"});
  for (const auto& p : scan.points) {
    double total = p.bad_fraction;
    for (double f : p.event_fractions) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.energy_density >= -2.0 - 1e-12);  // two bonds per site, each >= -1
    REQUIRE(p.observables.size() == 1);
  }
  // bad-block weight falls as beta grows
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(scan.points[i].bad_fraction < scan.points[i - 1].bad_fraction);
}
