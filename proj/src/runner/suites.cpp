#include "spinboard/runner/suites.hpp"

#include "spinboard/classical_mc.hpp"
#include "spinboard/model_symbols.hpp"
#include "spinboard/models.hpp"
#include "spinboard/quantum_lab.hpp"
#include "spinboard/spinwave.hpp"
#include "spinboard/su2kit.hpp"
#include "spinboard/symbols.hpp"
#include "spinboard/torus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <thread>

namespace spinboard::runner {

bool SuiteResult::hard_failure() const {
  return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.hard && !r.pass; });
}

namespace {

// Output of one independent task; merged in task order.
struct Partial {
  std::map<std::string, std::vector<std::vector<Cell>>> rows;
  std::vector<CheckRecord> records;
};

// Worker pool over independent tasks. Results land in task order, so the
// merged output does not depend on scheduling.
std::vector<Partial> run_tasks(int n, int jobs, const std::function<Partial(int)>& task) {
  std::vector<Partial> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        out[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min(jobs, n); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

CheckRecord upper_bound_check(const std::string& suite, const std::string& check, double value, double tol,
                              std::vector<std::pair<std::string, Cell>> inputs, bool hard = true) {
  CheckRecord r;
  r.suite = suite;
  r.check = check;
  r.inputs = std::move(inputs);
  r.value = value;
  r.slack = tol - value;
  r.pass = value <= tol;
  r.hard = hard;
  return r;
}

McOptions mc_options(const RunConfig& c) {
  McOptions o;
  o.burn_in = c.burn_in;
  o.sweeps = c.sweeps;
  o.batches = c.batches;
  o.ti_nodes = c.ti_nodes;
  return o;
}

Vec3 random_unit(std::mt19937_64& rng) { return uniform_sphere(rng); }

ClassicalConfig random_config(std::mt19937_64& rng, int n) {
  ClassicalConfig c(n);
  for (auto& w : c) w = random_unit(rng);
  return c;
}

// ---------------------------------------------------------------- suites

SuiteResult suite_coherent(const RunConfig& c) {
  const double tol_eig = tolerance(c, "eigen_residual", 1e-10);
  const double tol_ovl = tolerance(c, "overlap_residual", 1e-12);
  auto parts = run_tasks(static_cast<int>(c.spins.size()), c.jobs, [&](int i) {
    const auto s = SpinMagnitude::from_value(c.spins[i]);
    const auto ops = spin_operators(s);
    auto rng = make_stream(c.seed, i);
    double eig = 0.0, ovl = 0.0;
    for (std::int64_t k = 0; k < c.samples; ++k) {
      const Vec3 a = random_unit(rng), b = random_unit(rng);
      const CVec va = coherent_state(s, a), vb = coherent_state(s, b);
      const CMat n = a.x() * ops.x + a.y() * ops.y + a.z() * ops.z;
      eig = std::max(eig, (n * va - s.value() * va).norm());
      const double closed = std::pow((1.0 + a.dot(b)) / 2.0, s.value());
      ovl = std::max({ovl, std::abs(std::abs(overlap(s, a, b)) - closed), std::abs(overlap(s, a, b) - vb.dot(va))});
    }
    Partial p;
    p.rows["residuals"].push_back({s.value(), eig, ovl, eig <= tol_eig && ovl <= tol_ovl});
    p.records.push_back(upper_bound_check("coherent", "eigen_residual", eig, tol_eig, {{"S", s.value()}}));
    p.records.push_back(upper_bound_check("coherent", "overlap_residual", ovl, tol_ovl, {{"S", s.value()}}));
    return p;
  });
  SuiteResult r;
  r.tables.push_back({"residuals", {"S", "eigen_residual", "overlap_residual", "pass"}, {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["residuals"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

CMat random_hermitian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n01;
  CMat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(n01(rng), n01(rng));
  return 0.5 * (a + a.adjoint());
}

SuiteResult suite_symbols(const RunConfig& c) {
  const double tol_res = tolerance(c, "resolution_residual", 1e-8);
  const double tol_rt = tolerance(c, "roundtrip_residual", 1e-9);
  const double tol_null = tolerance(c, "high_harmonic_norm", 1e-9);
  auto parts = run_tasks(static_cast<int>(c.spins.size()), c.jobs, [&](int i) {
    const auto s = SpinMagnitude::from_value(c.spins[i]);
    const int d = s.dim();
    auto rng = make_stream(c.seed, i);
    const int degree = 2 * s.two_s() + 8;
    const auto q = sphere_quadrature(degree);
    const double pref = d / (4.0 * std::numbers::pi);
    CMat id = CMat::Zero(d, d);
    std::vector<CVec> states;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      states.push_back(coherent_state(s, q.nodes[k]));
      id += pref * q.weights[k] * states.back() * states.back().adjoint();
    }
    double res = (id - CMat::Identity(d, d)).norm();
    const CMat a = random_hermitian(rng, d);
    cplx tr = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) tr += pref * q.weights[k] * states[k].dot(a * states[k]);
    res = std::max(res, std::abs(tr - a.trace()));
    double rt = 0.0;
    for (std::int64_t k = 0; k < c.samples; ++k) {
      const CMat h = random_hermitian(rng, d);
      const auto up = upper_symbol(h, s);
      const CMat back = quantize([&](const Vec3& w) { return up(w); }, s.two_s(), s, Exec::serial);
      rt = std::max(rt, (back - h).norm());
    }
    double null = 0.0;
    for (int l = s.two_s() + 1; l <= s.two_s() + 2; ++l)
      for (int m = -l; m <= l; ++m) {
        const CMat y = quantize([&](const Vec3& w) { return spherical_harmonics(l, w)[harmonic_index(l, m)]; }, l, s,
                                Exec::serial);
        null = std::max(null, y.norm());
      }
    Partial p;
    p.rows["symbols"].push_back({s.value(), static_cast<long long>(degree), res, rt, null});
    p.records.push_back(upper_bound_check("symbols", "resolution_and_trace", res, tol_res, {{"S", s.value()}}));
    p.records.push_back(upper_bound_check("symbols", "quantize_roundtrip", rt, tol_rt, {{"S", s.value()}}));
    p.records.push_back(upper_bound_check("symbols", "high_harmonic_null", null, tol_null, {{"S", s.value()}}));
    return p;
  });
  SuiteResult r;
  r.tables.push_back({"symbols", {"S", "degree", "resolution_residual", "roundtrip_residual", "high_harmonic_norm"}, {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["symbols"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

SuiteResult suite_sandwich(const RunConfig& c) {
  const double tol = tolerance(c, "lower_slack", 1e-10);
  struct Case {
    int kind;
    double spin;
    int system;  // 0: single bond, 1: 2x2 torus
  };
  std::vector<Case> cases;
  for (int kind : {1, 4})
    for (double sp : c.spins)
      for (int sys : {0, 1}) {
        if (kind == 4 && sys == 0) continue;
        if (sys == 1 && SpinMagnitude::from_value(sp).dim() > 5) continue;  // 2x2 sites up to S = 2
        cases.push_back({kind, sp, sys});
      }
  auto parts = run_tasks(static_cast<int>(cases.size()), c.jobs, [&](int i) {
    const auto& cs = cases[i];
    const auto s = SpinMagnitude::from_value(cs.spin);
    ModelSpec spec;
    if (cs.system == 0) {
      spec = heisenberg_model(s, c.j1, c.j2, BondGraph::single_bond());
    } else {
      const TorusGeometry g(2, 2, 1);
      spec = cs.kind == 1 ? heisenberg_model(s, c.j1, c.j2, g.bonds(), g) : orbital_compass_model(s, g.bonds(), g);
    }
    const auto spectrum = diagonalize(build_quantum_hamiltonian(spec, Frame::rp));
    const HamiltonianSymbols sym(spec, Frame::rp);
    auto rng = make_stream(c.seed, i);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Partial p;
    double worst = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < c.samples; ++k) {
      const double beta = std::max(1e-3, u01(rng)) * std::sqrt(s.value());
      const GibbsEnsemble ens(spectrum, beta, s, spec.graph.n_sites);
      const auto rep = sandwich_check(ens, sym, random_config(rng, spec.graph.n_sites));
      worst = std::min(worst, rep.lower_slack);
      p.rows["sandwich"].push_back({static_cast<long long>(cs.kind), s.value(), beta, rep.lower_slack, rep.kappa});
    }
    auto rec = upper_bound_check("sandwich", "lower_slack", -worst, tol,
                                 {{"model", static_cast<long long>(cs.kind)},
                                  {"S", s.value()},
                                  {"sites", static_cast<long long>(spec.graph.n_sites)}});
    rec.value = worst;
    p.records.push_back(rec);
    return p;
  });
  SuiteResult r;
  r.tables.push_back({"sandwich", {"model", "S", "beta", "lower_slack", "kappa"}, {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["sandwich"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

SuiteResult suite_berezin(const RunConfig& c) {
  const double tol = tolerance(c, "berezin_slack", 1e-8);
  struct Case {
    int sites;
    double spin, beta;
  };
  std::vector<Case> cases;
  for (int sites : {1, 2})
    for (double sp : c.spins)
      for (double b : c.betas) cases.push_back({sites, sp, b});
  auto parts = run_tasks(static_cast<int>(cases.size()), c.jobs, [&](int i) {
    const auto& cs = cases[i];
    const auto s = SpinMagnitude::from_value(cs.spin);
    BerezinLiebReport rep;
    double oracle_gap = 0.0;
    if (cs.sites == 1) {
      const CMat h = -spin_operators(s).z / s.value();
      rep = berezin_lieb_check(h, s, 1, cs.beta);
      oracle_gap = std::abs(rep.classical_lower - std::sinh(cs.beta) / cs.beta);
    } else {
      rep = berezin_lieb_check(heisenberg_model(s, c.j1, c.j2, BondGraph::single_bond()), cs.beta);
    }
    const double lo = (rep.quantum_mid - rep.classical_lower) / rep.quantum_mid;
    const double hi = (rep.classical_upper - rep.quantum_mid) / rep.quantum_mid;
    Partial p;
    p.rows["berezin"].push_back({static_cast<long long>(cs.sites), s.value(), cs.beta, rep.classical_lower,
                                 rep.quantum_mid, rep.classical_upper, lo, hi});
    const std::vector<std::pair<std::string, Cell>> in{
        {"sites", static_cast<long long>(cs.sites)}, {"S", s.value()}, {"beta", cs.beta}};
    auto r1 = upper_bound_check("berezin", "lower_inequality", -lo, tol, in);
    r1.value = lo;
    auto r2 = upper_bound_check("berezin", "upper_inequality", -hi, tol, in);
    r2.value = hi;
    p.records.push_back(r1);
    p.records.push_back(r2);
    if (cs.sites == 1)
      p.records.push_back(upper_bound_check("berezin", "single_spin_oracle", oracle_gap / (std::sinh(cs.beta) / cs.beta),
                                            1e-10, in));
    return p;
  });
  SuiteResult r;
  r.tables.push_back(
      {"berezin", {"sites", "S", "beta", "classical_lower", "quantum", "classical_upper", "lower_slack", "upper_slack"}, {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["berezin"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

SuiteResult suite_chessboard_q(const RunConfig& c) {
  const auto s = SpinMagnitude::from_value(c.spins.front());
  const TorusGeometry g(c.d, c.L, c.B);
  const auto spec = heisenberg_model(s, c.j1, c.j2, g.bonds(), g);
  auto parts = run_tasks(static_cast<int>(c.betas.size()), c.jobs, [&](int i) {
    auto rng = make_stream(c.seed, 1000 + i);
    std::uniform_real_distribution<double> ang(0.6, 1.4);
    const SiteRegion r1 = SiteRegion::cap(random_unit(rng), ang(rng));
    const SiteRegion r2 = SiteRegion::cap(random_unit(rng), ang(rng));
    auto ev = [](SiteRegion r) {
      return [r](const ClassicalConfig& b) {
        for (const auto& w : b)
          if (!r.contains(w)) return false;
        return true;
      };
    };
    const auto rep = chessboard_check_quantum(spec, c.betas[i], ev(r1), ev(r2), 0, 1, c.samples, c.seed + i);
    Partial p;
    p.rows["chessboard"].push_back({c.betas[i], rep.lhs, rep.rhs, rep.margin, rep.sigma, rep.pass});
    CheckRecord rec;
    rec.suite = "chessboard-q";
    rec.check = "lhs_le_rhs";
    rec.inputs = {{"beta", c.betas[i]}, {"L", static_cast<long long>(c.L)}, {"S", s.value()}};
    rec.value = rep.margin;
    rec.slack = rep.margin + 3.0 * rep.sigma;
    rec.sigma = rep.sigma;
    rec.pass = rep.pass;
    rec.hard = false;  // statistical
    p.records.push_back(rec);
    return p;
  });
  SuiteResult r;
  r.tables.push_back({"chessboard", {"beta", "lhs", "rhs", "margin", "sigma", "pass"}, {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["chessboard"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

SuiteResult suite_chessboard_c(const RunConfig& c) {
  const TorusGeometry g(c.d, c.L, c.B);
  const auto spec = heisenberg_model(SpinMagnitude(1), c.j1, c.j2, g.bonds(), g);
  const auto opts = mc_options(c);
  SuiteResult r;
  r.tables.push_back({"chessboard", {"beta", "lhs", "rhs", "margin", "sigma", "pass"}, {}});
  for (std::size_t i = 0; i < c.betas.size(); ++i) {
    auto rng = make_stream(c.seed, 2000 + i);
    const auto a1 = uniform_product_event("cap_z", SiteRegion::cap({0, 0, 1}, 2.0 * c.kappa), g.block_volume());
    const auto a2 = uniform_product_event("cap_random", SiteRegion::cap(random_unit(rng), 1.0), g.block_volume());
    const auto rep = chessboard_check_classical(spec, c.betas[i], a1, a2, 0, 1, opts, c.seed + i);
    r.tables[0].add({c.betas[i], rep.lhs, rep.rhs, rep.margin, rep.sigma, rep.pass});
    CheckRecord rec;
    rec.suite = "chessboard-c";
    rec.check = "lhs_le_rhs";
    rec.inputs = {{"beta", c.betas[i]}, {"L", static_cast<long long>(c.L)}, {"B", static_cast<long long>(c.B)}};
    rec.value = rep.margin;
    rec.slack = rep.margin + 3.0 * rep.sigma;
    rec.sigma = rep.sigma;
    rec.pass = rep.pass;
    rec.hard = c.betas[i] == 0.0;  // exact at beta = 0
    r.records.push_back(rec);
  }
  return r;
}

SuiteResult suite_frakp(const RunConfig& c) {
  const TorusGeometry g(c.d, c.L, c.B);
  const auto spec = heisenberg_model(SpinMagnitude(1), c.j1, c.j2, g.bonds(), g);
  const auto ev = uniform_product_event("G+", SiteRegion::cap({0, 0, 1}, c.kappa), g.block_volume());
  const double exact0 = std::pow((1.0 - std::cos(c.kappa)) / 2.0, g.block_volume());
  SuiteResult r;
  r.tables.push_back({"frakp", {"beta", "p_hat", "sigma", "log_prob", "anchor"}, {}});
  for (std::size_t i = 0; i < c.betas.size(); ++i) {
    const auto est = estimate_frakp(spec, c.betas[i], ev, mc_options(c), c.seed + i);
    r.tables[0].add({c.betas[i], est.value, est.sigma, est.log_prob.value, est.log_prob.anchor});
    if (c.betas[i] == 0.0)
      r.records.push_back(upper_bound_check("frakp", "beta0_closed_form", std::abs(est.value - exact0) / exact0,
                                            tolerance(c, "frakp_beta0", 1e-12), {{"kappa", c.kappa}}));
  }
  return r;
}

SuiteResult suite_contours(const RunConfig& c) {
  const std::vector<double> qs{1e-3, 1e-2, 5e-2};
  SuiteResult r;
  r.tables.push_back({"contours", {"blocks_per_side", "t2", "enumerated", "brute_force", "q", "peierls_sum", "direct_sum"}, {}});
  for (int n : c.sizes) {
    const TorusGeometry g(c.d, n * c.B, c.B);
    const int nb = g.n_blocks();
    if (nb > 20) throw ConfigError("contour brute force is limited to 20 blocks");
    for (int t2 = 1; t2 < nb; ++t2) {
      const auto sets = enumerate_contours(g, 0, t2);
      // brute force over all subsets
      std::vector<int> boundary_sizes;
      for (std::uint32_t mask = 0; mask < (1u << nb); ++mask) {
        if (!(mask & 1u) || (mask >> t2) & 1u) continue;
        std::vector<char> in(nb), out(nb);
        for (int t = 0; t < nb; ++t) {
          in[t] = (mask >> t) & 1u;
          out[t] = !in[t];
        }
        if (!blocks_connected(g, in) || !blocks_connected(g, out)) continue;
        int edges = 0;
        for (int t = 0; t < nb; ++t)
          for (int j = 0; j < g.dim(); ++j)
            if (in[t] != in[g.neighbor_block(t, j)]) ++edges;
        boundary_sizes.push_back(edges);
      }
      double prev = -1.0;
      bool monotone = true;
      for (double q : qs) {
        const double ps = peierls_sum(g, 0, t2, q);
        double direct = 0.0;
        for (int e : boundary_sizes) direct += 2.0 * std::pow(4.0 * q, e / (4.0 * g.dim()));
        r.tables[0].add({static_cast<long long>(n), static_cast<long long>(t2), static_cast<long long>(sets.size()),
                         static_cast<long long>(boundary_sizes.size()), q, ps, direct});
        r.records.push_back(upper_bound_check("contours", "peierls_sum", std::abs(ps - direct),
                                              tolerance(c, "peierls_sum", 1e-12) * std::max(1.0, direct),
                                              {{"blocks_per_side", static_cast<long long>(n)},
                                               {"t2", static_cast<long long>(t2)},
                                               {"q", q}}));
        monotone = monotone && ps > prev;
        prev = ps;
      }
      auto rec = upper_bound_check("contours", "count_matches_brute_force",
                                   std::abs(double(sets.size()) - double(boundary_sizes.size())), 0.0,
                                   {{"blocks_per_side", static_cast<long long>(n)}, {"t2", static_cast<long long>(t2)}});
      r.records.push_back(rec);
      auto mono = upper_bound_check("contours", "monotone_in_q", monotone ? 0.0 : 1.0, 0.0,
                                    {{"blocks_per_side", static_cast<long long>(n)}, {"t2", static_cast<long long>(t2)}});
      r.records.push_back(mono);
    }
  }
  return r;
}

SuiteResult suite_entropy(const RunConfig& c) {
  SuiteResult r;
  const auto prof = entropy_profile(c.p, ProfileFamily::power_mean);
  const double gap = prof.sup_gap(50.0);
  r.records.push_back(upper_bound_check("entropy", "a_p_vs_limit", gap, 0.1, {{"p", static_cast<long long>(c.p)}}));
  r.tables.push_back({"patterns", {"d", "mask", "f_b", "f_s", "f_b_minus_f_s_minus_inv_ad"}, {}});
  for (int d : {2, 3}) {
    const int nb = static_cast<int>(block_bond_list(d).size());
    const double a_d = d * std::pow(2.0, d - 1);
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ull << nb); ++mask) {
      const auto f = pattern_fractions(d, mask);
      if (!f.mixed) continue;
      const double m = f.f_b - f.f_s - 1.0 / a_d;
      worst = std::min(worst, m);
      if (d == 2) r.tables[0].add({static_cast<long long>(d), static_cast<long long>(mask), f.f_b, f.f_s, m});
    }
    auto rec = upper_bound_check("entropy", "pattern_inequality", -worst, 1e-12, {{"d", static_cast<long long>(d)}});
    rec.value = worst;
    r.records.push_back(rec);
  }
  r.tables.push_back({"constants", {"d", "b", "a_d", "A_p_t", "Delta", "Delta_prime", "kappa2_feasible", "b0_feasible"}, {}});
  for (int d : {2, 3}) {
    const auto k = entropy_bound_constants(d, c.b, c.b, 1.0, prof);
    r.tables[1].add({static_cast<long long>(d), c.b, k.a_d, k.a_p_t, k.delta, k.delta_prime, k.kappa2_feasible, k.b0_feasible});
  }
  return r;
}

// 1/2 (4G/pi - ln 2) with G = sum (-1)^k / (2k+1)^2, summed in pairs.
double catalan() {
  double g = 0.0;
  for (int k = 200000; k >= 0; --k) g += (k % 2 ? -1.0 : 1.0) / ((2.0 * k + 1) * (2.0 * k + 1));
  return g;
}

SuiteResult suite_spinwave(const RunConfig& c) {
  SuiteResult r;
  const auto m = minimize_f(c.resolution_deg);
  r.tables.push_back({"free_energy", {"theta_deg", "F"}, {}});
  for (std::size_t i = 0; i < m.theta_deg.size(); ++i) r.tables[0].add({m.theta_deg[i], m.values[i]});
  const double f0 = m.values.front();
  const auto mid = std::find(m.theta_deg.begin(), m.theta_deg.end(), 45.0);
  const double f45 = mid != m.theta_deg.end() ? m.values[mid - m.theta_deg.begin()]
                                              : f_infinite(quarter_circle(std::numbers::pi / 4)).value;
  const double oracle = 0.5 * (4.0 * catalan() / std::numbers::pi - std::log(2.0));
  r.records.push_back(upper_bound_check("spinwave", "F_axis_zero", std::abs(f0), tolerance(c, "F_axis", 1e-3), {}));
  r.records.push_back(upper_bound_check("spinwave", "F_45_oracle", std::abs(f45 - oracle), tolerance(c, "F_45", 5e-3),
                                        {{"oracle", oracle}}));
  const bool axes = m.argmin_deg.size() == 2 && m.argmin_deg[0] == 0.0 && m.argmin_deg[1] == 90.0;
  r.records.push_back(upper_bound_check("spinwave", "argmin_axes", axes && m.gap > 0 ? 0.0 : 1.0, 0.0,
                                        {{"gap", m.gap}, {"resolution_deg", c.resolution_deg}}));
  r.tables.push_back({"lattice", {"theta_deg", "lambda", "L", "F_lambda", "F_extrapolated", "fit_error"}, {}});
  for (double deg : {0.0, 15.0, 30.0, 45.0}) {
    const Vec3 w = quarter_circle(deg * std::numbers::pi / 180.0);
    for (int L : c.sizes) {
      // the lattice ladder stops converging once lambda drops below ~1/L^2
      // on the axes; report the rungs anyway and mark the limit as missing
      double value = std::numeric_limits<double>::quiet_NaN(), fit = value;
      try {
        const auto lim = f_infinite(w, SumMode::lattice, L, c.lambdas);
        value = lim.value;
        fit = lim.fit_error;
      } catch (const std::runtime_error&) {
      }
      for (double lam : c.lambdas)
        r.tables[1].add({deg, lam, static_cast<long long>(L), f_lambda(w, lam, SumMode::lattice, L), value, fit});
    }
  }
  return r;
}

SuiteResult suite_scan(const RunConfig& c) {
  SuiteResult r;
  const TorusGeometry g(2, c.L, c.B);
  const auto opts = mc_options(c);
  const int bv = g.block_volume();
  struct Scan {
    std::string name;
    ModelSpec spec;
    std::vector<double> grid;
    GoodEventFamily family;
    std::vector<Observable> obs;
  };
  std::vector<Scan> scans;
  scans.push_back({"kind1", heisenberg_model(SpinMagnitude(1), 0.0, 0.0, g.bonds(), g),
                   {0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}, heisenberg_events(c.kappa, bv), {}});
  std::vector<double> g4{1, 2, 3, 5, 7, 10, 15, 20, 30, 40, 50};
  Observable inplane{"inplane", [](const ClassicalConfig& cfg) {
                       double s = 0.0;
                       for (const auto& w : cfg) s += w.x() * w.x() + w.z() * w.z();
                       return s / cfg.size();
                     }};
  scans.push_back({"kind4", orbital_compass_model(SpinMagnitude(1), g.bonds(), g), g4, compass_events(c.kappa, bv),
                   {inplane}});
  const auto prof = entropy_profile(c.p, ProfileFamily::power_mean);
  const auto spec2 = large_entropy_model(ModelKind::xy_nonlinear, SpinMagnitude(1), prof, SignMode::plus, g.bonds(), g);
  std::vector<double> g2;
  for (int i = 0; i < 40; ++i) g2.push_back(1.0 + 7.0 * i / 39.0);
  scans.push_back({"kind2", spec2, g2, entropy_events(spec2, c.b, c.B, 2), {}});

  auto parts = run_tasks(static_cast<int>(scans.size()), c.jobs, [&](int i) {
    const auto& sc = scans[i];
    const auto res = beta_scan(sc.spec, sc.grid, sc.family, sc.obs, opts, c.seed + i);
    Partial p;
    for (const auto& pt : res.points) {
      std::vector<Cell> row{sc.name, pt.beta, pt.energy_density, pt.bond_energy, pt.energy_sigma, pt.good_fraction,
                            pt.good_sigma, pt.bad_fraction, pt.distinct_neighbors};
      row.push_back(pt.observables.empty() ? std::numeric_limits<double>::quiet_NaN() : pt.observables[0]);
      p.rows["scan"].push_back(row);
    }
    if (sc.name == "kind1") {
      const double rise = res.points.back().good_fraction - res.points.front().good_fraction;
      auto rec = upper_bound_check("scan", "kind1_good_fraction_rise", -rise, -0.5, {{"kappa", c.kappa}}, false);
      rec.value = rise;
      p.records.push_back(rec);
    } else if (sc.name == "kind4") {
      std::vector<double> y;
      for (const auto& pt : res.points) y.push_back(pt.observables[0]);
      const double rho = spearman_rho(sc.grid, y);
      auto rec = upper_bound_check("scan", "kind4_order_spearman", -rho, -0.9, {}, false);
      rec.value = rho;
      p.records.push_back(rec);
    } else {
      std::vector<double> e;
      for (const auto& pt : res.points) e.push_back(pt.bond_energy);
      const double j = jump_statistic(e);
      auto rec = upper_bound_check("scan", "kind2_jump_statistic", -j, -5.0, {{"p", static_cast<long long>(c.p)}}, false);
      rec.value = j;
      p.records.push_back(rec);
    }
    return p;
  });
  r.tables.push_back({"scan",
                      {"model", "beta", "energy_density", "bond_energy", "energy_sigma", "good_fraction", "good_sigma",
                       "bad_fraction", "distinct_neighbors", "order_parameter"},
                      {}});
  for (auto& p : parts) {
    for (auto& row : p.rows["scan"]) r.tables[0].add(row);
    for (auto& rec : p.records) r.records.push_back(rec);
  }
  return r;
}

}  // namespace

SuiteResult run_suite(const RunConfig& c) {
  static const std::map<std::string, std::function<SuiteResult(const RunConfig&)>> table{
      {"coherent", suite_coherent},     {"symbols", suite_symbols},       {"sandwich", suite_sandwich},
      {"berezin", suite_berezin},       {"chessboard-q", suite_chessboard_q}, {"chessboard-c", suite_chessboard_c},
      {"frakp", suite_frakp},           {"contours", suite_contours},     {"entropy", suite_entropy},
      {"spinwave", suite_spinwave},     {"scan", suite_scan}};
  auto it = table.find(c.suite);
  if (it == table.end()) suite_config(c.suite);  // throws with the list
  return it->second(c);
}

int run(const RunConfig& c, std::ostream& log) {
  const auto result = run_suite(c);
  const std::string dir = resolve_out_dir(c);
  std::filesystem::create_directories(dir);
  // the output directory is not part of the run's identity
  RunConfig canonical = c;
  canonical.out.clear();
  const std::string toml = to_toml(canonical);
  write_text(dir + "/" + c.suite + "_config.toml", toml);
  for (const auto& t : result.tables) write_text(dir + "/" + c.suite + "_" + t.name + ".csv", t.to_csv());
  // nor is the thread count: results do not depend on it
  RunConfig identity = canonical;
  identity.jobs = 1;
  Ledger ledger(dir + "/ledger.jsonl", sha256_hex(to_toml(identity)), reference_doc_id(), c.seed);
  int failed = 0;
  for (const auto& rec : result.records) {
    ledger.append(rec);
    if (!rec.pass) {
      ++failed;
      log << (rec.hard ? "FAIL " : "WARN ") << rec.suite << " " << rec.check << " value=" << format_double(rec.value)
          << "\n";
    }
  }
  log << c.suite << ": " << result.records.size() - failed << "/" << result.records.size() << " checks passed\n";
  return result.hard_failure() ? 1 : 0;
}

}  // namespace spinboard::runner
