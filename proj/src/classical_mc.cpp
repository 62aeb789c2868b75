#include "spinboard/classical_mc.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace spinboard {

namespace {

// Batch-means mean and standard error.
std::pair<double, double> batch_stats(const std::vector<double>& xs, int batches) {
  const int n = static_cast<int>(xs.size());
  if (n == 0) return {0.0, 0.0};
  batches = std::clamp(batches, 1, n);
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    const int lo = n * b / batches, hi = n * (b + 1) / batches;
    for (int i = lo; i < hi; ++i) means[b] += xs[i];
    means[b] /= (hi - lo);
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
  if (batches < 2) return {mean, 0.0};
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);
  return {mean, std::sqrt(var / batches)};
}

PlacedBlock block_placement(const TorusGeometry& g, int block) {
  PlacedBlock p = PlacedBlock::origin(g.dim());
  p.position = g.block_coords(block);
  return p;
}

}  // namespace

// ------------------------------------------------------------------ regions

SiteRegion SiteRegion::cap(const Vec3& axis, double half_angle) {
  return {axis.normalized(), std::cos(half_angle), false};
}

SiteRegion SiteRegion::band(const Vec3& axis, double half_angle) {
  return {axis.normalized(), std::cos(half_angle), true};
}

bool SiteRegion::contains(const Vec3& w) const {
  const double c = w.dot(axis);
  return (two_sided ? std::abs(c) : c) >= cos_half_angle;
}

double SiteRegion::area_fraction() const {
  const double one = (1.0 - cos_half_angle) / 2.0;
  if (!two_sided) return one;
  return cos_half_angle >= 0 ? 2.0 * one : 1.0;
}

// tolerance absorbs cos(pi/2) and cos(pi) rounding
bool SiteRegion::is_full() const { return two_sided ? cos_half_angle <= 1e-12 : cos_half_angle <= -1.0 + 1e-12; }

SiteRegion SiteRegion::conjugated() const {
  SiteRegion r = *this;
  r.axis = sigma(axis);
  return r;
}

BlockEvent product_event(std::string label, std::vector<SiteRegion> regions) {
  BlockEvent e;
  e.label = std::move(label);
  e.product = std::move(regions);
  e.predicate = [regions = e.product](const ClassicalConfig& block) {
    if (block.size() != regions.size()) throw std::invalid_argument("block size does not match event");
    for (std::size_t u = 0; u < regions.size(); ++u)
      if (!regions[u].contains(block[u])) return false;
    return true;
  };
  return e;
}

BlockEvent uniform_product_event(std::string label, const SiteRegion& region, int block_volume) {
  return product_event(std::move(label), std::vector<SiteRegion>(block_volume, region));
}

GoodEventFamily heisenberg_events(double kappa, int block_volume) {
  return {{uniform_product_event("G+", SiteRegion::cap({0, 0, 1}, kappa), block_volume),
           uniform_product_event("G-", SiteRegion::cap({0, 0, -1}, kappa), block_volume)}};
}

GoodEventFamily compass_events(double kappa, int block_volume) {
  return {{uniform_product_event("Gx", SiteRegion::band({1, 0, 0}, kappa), block_volume),
           uniform_product_event("Gz", SiteRegion::band({0, 0, 1}, kappa), block_volume)}};
}

GoodEventFamily ortho120_events(double kappa, int block_volume) {
  GoodEventFamily f;
  for (int k = 0; k < 6; ++k)
    f.events.push_back(
        uniform_product_event("G" + std::to_string(k + 1), SiteRegion::cap(hex_vector(k), kappa), block_volume));
  return f;
}

GoodEventFamily entropy_events(const ModelSpec& spec, double b, int B, int d) {
  if (spec.kind != ModelKind::xy_nonlinear && spec.kind != ModelKind::nematic)
    throw std::invalid_argument("entropy events need a large-entropy model (kinds 2, 3)");
  // bonds inside a B-block, local index with coordinate 0 fastest
  struct LocalBond {
    int a, b, dir;
  };
  std::vector<LocalBond> bonds;
  int vol = 1;
  for (int j = 0; j < d; ++j) vol *= B;
  for (int u = 0; u < vol; ++u) {
    int stride = 1, rest = u;
    for (int j = 0; j < d; ++j) {
      if (rest % B < B - 1) bonds.push_back({u, u + stride, j});
      rest /= B;
      stride *= B;
    }
  }
  auto energetic = [spec, bonds](const ClassicalConfig& block, double b) {
    int n = 0;
    for (const auto& bd : bonds)
      if (-classical_bond_energy(spec, bd.dir, block[bd.a], block[bd.b], Frame::rp) >= b) ++n;
    return n;
  };
  const int nb = static_cast<int>(bonds.size());
  BlockEvent ord, dis;
  ord.label = "ordered";
  ord.predicate = [energetic, b, nb](const ClassicalConfig& blk) { return energetic(blk, b) == nb; };
  dis.label = "disordered";
  dis.predicate = [energetic, b](const ClassicalConfig& blk) { return energetic(blk, b) == 0; };
  return {{ord, dis}};
}

int classify_block(const GoodEventFamily& family, const ClassicalConfig& block) {
  int found = -1;
  for (std::size_t i = 0; i < family.events.size(); ++i) {
    if (!family.events[i].holds(block)) continue;
    if (found >= 0)
      throw std::logic_error("events " + family.events[found].label + " and " + family.events[i].label +
                             " overlap on this block");
    found = static_cast<int>(i);
  }
  return found;
}

int classify_block(const TorusGeometry& g, const ClassicalConfig& config, int block, const GoodEventFamily& family) {
  return classify_block(family, pull_block(g, block_placement(g, block), config));
}

IncompatibilityReport incompatibility_scan(const TorusGeometry& g, const GoodEventFamily& family,
                                           const ClassicalConfig& config) {
  IncompatibilityReport rep;
  std::vector<int> labels(g.n_blocks());
  for (int t = 0; t < g.n_blocks(); ++t) labels[t] = classify_block(g, config, t, family);
  for (int t = 0; t < g.n_blocks(); ++t) {
    if (labels[t] < 0) continue;
    for (int j = 0; j < g.dim(); ++j) {
      const int u = g.neighbor_block(t, j);
      if (u == t || labels[u] < 0 || labels[u] == labels[t]) continue;
      ++rep.pairs_checked;
      const int origin = g.neighbor_site(placed_site(g, block_placement(g, t), 0), j);
      if (classify_block(family, pull_window(g, origin, config)) >= 0) ++rep.violations;
    }
  }
  return rep;
}

// -------------------------------------------------------------- hamiltonian

double ClassicalHamiltonian::energy(const ClassicalConfig& config) const {
  double e = 0.0;
  for (const auto& b : graph.bonds) e += bond(b.dir, graph.parity[b.a], config[b.a], config[b.b]);
  return e;
}

double ClassicalHamiltonian::local_energy(const ClassicalConfig& config, int site, const Vec3& spin) const {
  double e = 0.0;
  for (int k : incidence[site]) {
    const auto& b = graph.bonds[k];
    const Vec3& a = b.a == site ? spin : config[b.a];
    const Vec3& c = b.b == site ? spin : config[b.b];
    e += bond(b.dir, graph.parity[b.a], a, c);
  }
  return e;
}

ClassicalHamiltonian make_classical_hamiltonian(BondGraph graph,
                                                std::function<double(int, int, const Vec3&, const Vec3&)> bond) {
  ClassicalHamiltonian h;
  h.incidence = graph.incidence();
  h.graph = std::move(graph);
  h.bond = std::move(bond);
  return h;
}

ClassicalHamiltonian classical_hamiltonian(const ModelSpec& spec, Frame frame) {
  spec.validate();
  return make_classical_hamiltonian(spec.graph, [spec, frame](int dir, int parity, const Vec3& a, const Vec3& b) {
    return classical_bond_energy(spec, dir, a, b, frame, parity);
  });
}

double metropolis_acceptance(double delta_e, double beta) {
  return delta_e <= 0.0 ? 1.0 : std::exp(-beta * delta_e);
}

// ----------------------------------------------------------------- sampler

MetropolisSampler::MetropolisSampler(const ClassicalHamiltonian& h, double beta, std::uint64_t seed,
                                     std::uint64_t stream, SiteConstraints constraints)
    : h_(&h), beta_(beta), rng_(make_stream(seed, stream)), constraints_(std::move(constraints)) {
  if (!constraints_.empty() && static_cast<int>(constraints_.size()) != h.graph.n_sites)
    throw std::invalid_argument("constraint list does not match the number of sites");
  randomize();
}

void MetropolisSampler::set_config(ClassicalConfig config) {
  if (static_cast<int>(config.size()) != h_->graph.n_sites)
    throw std::invalid_argument("configuration size does not match the Hamiltonian");
  for (std::size_t i = 0; i < config.size(); ++i) {
    config[i].normalize();
    if (!constraints_.empty() && constraints_[i] && !constraints_[i]->contains(config[i]))
      throw std::invalid_argument("initial configuration violates the constraints");
  }
  config_ = std::move(config);
  energy_ = h_->energy(config_);
}

void MetropolisSampler::randomize() {
  ClassicalConfig c(h_->graph.n_sites);
  for (int i = 0; i < h_->graph.n_sites; ++i) {
    if (!constraints_.empty() && constraints_[i]) {
      const auto& r = *constraints_[i];
      Vec3 w;
      do w = uniform_sphere(rng_);
      while (!r.contains(w) && r.cos_half_angle < 0.5);
      c[i] = r.contains(w) ? w : r.axis;
    } else {
      c[i] = uniform_sphere(rng_);
    }
  }
  set_config(std::move(c));
}

Vec3 MetropolisSampler::propose(const Vec3& w) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double c = 1.0 - u01(rng_) * (1.0 - std::cos(cone_));
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = 2.0 * std::numbers::pi * u01(rng_);
  const Vec3 helper = std::abs(w.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 e1 = w.cross(helper).normalized();
  const Vec3 e2 = w.cross(e1);
  return (c * w + s * (std::cos(phi) * e1 + std::sin(phi) * e2)).normalized();
}

void MetropolisSampler::sweep() {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int n = h_->graph.n_sites;
  for (int i = 0; i < n; ++i) {
    const Vec3 old = config_[i];
    // inversion moves let banded constraints switch sign
    const Vec3 trial = u01(rng_) < 0.125 ? Vec3(-old) : propose(old);
    ++tried_;
    if (!constraints_.empty() && constraints_[i] && !constraints_[i]->contains(trial)) continue;
    const double de = h_->local_energy(config_, i, trial) - h_->local_energy(config_, i, old);
    if (u01(rng_) < metropolis_acceptance(de, beta_)) {
      config_[i] = trial;
      energy_ += de;
      ++accepted_;
    }
  }
  if (++sweeps_done_ % 64 == 0) energy_ = h_->energy(config_);
}

void MetropolisSampler::tune(int sweeps, double target) {
  for (int done = 0; done < sweeps;) {
    reset_counters();
    const int chunk = std::min(10, sweeps - done);
    for (int k = 0; k < chunk; ++k) sweep();
    done += chunk;
    cone_ = std::clamp(cone_ * std::exp(acceptance() - target), 1e-3, std::numbers::pi);
  }
  reset_counters();
}

// ------------------------------------------------------ energy estimation

MeanEstimate mean_energy(const ClassicalHamiltonian& h, double beta, const SiteConstraints& constraints,
                         const McOptions& opts, std::uint64_t seed, std::uint64_t stream) {
  MetropolisSampler mc(h, beta, seed, stream, constraints);
  mc.tune(opts.burn_in, opts.target_acceptance);
  std::vector<double> es;
  es.reserve(opts.sweeps);
  for (int k = 0; k < opts.sweeps; ++k) {
    mc.sweep();
    es.push_back(mc.energy());
  }
  const auto [m, s] = batch_stats(es, opts.batches);
  return {m, s, mc.acceptance()};
}

LogProbability log_probability(const ClassicalHamiltonian& h, const SiteConstraints& constraints, double beta,
                               const McOptions& opts, std::uint64_t seed, Exec exec) {
  LogProbability out;
  bool constrained = false;
  for (const auto& r : constraints)
    if (r && !r->is_full()) {
      out.anchor += std::log(r->area_fraction());
      constrained = true;
    }
  out.value = out.anchor;
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  if (beta == 0.0 || !constrained) return out;

  const int n = opts.ti_nodes;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(0.0, beta, i, &nodes[i], &weights[i], table);
  gsl_integration_glfixed_table_free(table);

  std::vector<MeanEstimate> est(2 * n);
  auto run = [&](int task) {
    const int node = task / 2;
    const bool constrained = task % 2 == 0;
    est[task] = mean_energy(h, nodes[node], constrained ? constraints : SiteConstraints{}, opts, seed,
                            static_cast<std::uint64_t>(task));
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int task = 0; task < 2 * n; ++task) run(task);
  } else {
    for (int task = 0; task < 2 * n; ++task) run(task);
  }
  double integral = 0.0, var = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& c = est[2 * i];
    const auto& f = est[2 * i + 1];
    if (c.acceptance < 1e-3)
      throw std::runtime_error("constrained chain is not ergodic (acceptance " + std::to_string(c.acceptance) + ")");
    integral += weights[i] * (c.mean - f.mean);
    var += weights[i] * weights[i] * (c.sigma * c.sigma + f.sigma * f.sigma);
  }
  out.value = out.anchor - integral;
  out.sigma = std::sqrt(var);
  return out;
}

// --------------------------------------------------------- dissemination

SiteConstraints place_event(const TorusGeometry& g, const BlockEvent& event, const std::vector<int>& t,
                            SiteConstraints base) {
  if (!event.is_product()) throw std::invalid_argument("event " + event.label + " is not a per-site product");
  if (static_cast<int>(event.product.size()) != g.block_volume())
    throw std::invalid_argument("event size does not match the block volume");
  if (base.empty()) base.assign(g.n_sites(), std::nullopt);
  const PlacedBlock p = PlacedBlock::origin(g.dim()).moved_by(t, true);
  for (int u = 0; u < g.block_volume(); ++u) {
    const int site = placed_site(g, p, u);
    const SiteRegion r = p.conjugated ? event.product[u].conjugated() : event.product[u];
    if (base[site]) {
      const auto& q = *base[site];
      if (q.two_sided != r.two_sided || q.cos_half_angle != r.cos_half_angle || (q.axis - r.axis).norm() > 1e-12)
        throw std::invalid_argument("placed events overlap on a site with different regions");
    }
    base[site] = r;
  }
  return base;
}

SiteConstraints disseminate(const TorusGeometry& g, const BlockEvent& event) {
  SiteConstraints out(g.n_sites(), std::nullopt);
  for (int t = 0; t < g.n_blocks(); ++t) out = place_event(g, event, g.block_coords(t), std::move(out));
  return out;
}

FrakpEstimate estimate_frakp(const ModelSpec& spec, double beta, const BlockEvent& event, const McOptions& opts,
                             std::uint64_t seed, Exec exec) {
  if (!spec.torus) throw std::invalid_argument("estimate_frakp needs a torus model");
  const auto& g = *spec.torus;
  const auto h = classical_hamiltonian(spec, Frame::rp);
  FrakpEstimate out;
  out.log_prob = log_probability(h, disseminate(g, event), beta, opts, seed, exec);
  const double expo = 1.0 / g.n_blocks();
  out.value = std::exp(expo * out.log_prob.value);
  out.sigma = out.value * expo * out.log_prob.sigma;
  return out;
}

ClassicalChessboardReport chessboard_check_classical(const ModelSpec& spec, double beta, const BlockEvent& a1,
                                                     const BlockEvent& a2, int t1, int t2, const McOptions& opts,
                                                     std::uint64_t seed, Exec exec) {
  if (!spec.torus) throw std::invalid_argument("chessboard check needs a torus model");
  if (t1 == t2) throw std::invalid_argument("chessboard check needs distinct blocks");
  const auto& g = *spec.torus;
  const auto h = classical_hamiltonian(spec, Frame::rp);
  auto both = place_event(g, a1, g.block_coords(t1));
  both = place_event(g, a2, g.block_coords(t2), std::move(both));
  const auto joint = log_probability(h, both, beta, opts, seed, exec);
  const auto p1 = estimate_frakp(spec, beta, a1, opts, seed + 1, exec);
  const auto p2 = estimate_frakp(spec, beta, a2, opts, seed + 2, exec);
  ClassicalChessboardReport rep;
  rep.lhs = std::exp(joint.value);
  rep.rhs = p1.value * p2.value;
  rep.margin = rep.rhs - rep.lhs;
  const double s_lhs = rep.lhs * joint.sigma;
  const double s_rhs = rep.rhs * std::hypot(p1.value > 0 ? p1.sigma / p1.value : 0.0,
                                            p2.value > 0 ? p2.sigma / p2.value : 0.0);
  rep.sigma = std::hypot(s_lhs, s_rhs);
  rep.pass = rep.margin >= -3.0 * rep.sigma - 1e-12 * std::max(rep.lhs, rep.rhs);
  return rep;
}

// -------------------------------------------------------------------- scans

ScanResult beta_scan(const ModelSpec& spec, const std::vector<double>& grid, const GoodEventFamily& family,
                     const std::vector<Observable>& observables, const McOptions& opts, std::uint64_t seed,
                     std::optional<Vec3> ordered_start) {
  if (!spec.torus) throw std::invalid_argument("beta_scan needs a torus model");
  if (grid.empty()) return {};
  const auto& g = *spec.torus;
  const auto h = classical_hamiltonian(spec, Frame::rp);
  const int nev = static_cast<int>(family.events.size());
  const int nobs = static_cast<int>(observables.size());
  const double n_bonds = static_cast<double>(spec.graph.bonds.size());

  ScanResult res;
  for (const auto& e : family.events) res.event_labels.push_back(e.label);
  for (const auto& o : observables) res.observable_names.push_back(o.first);

  MetropolisSampler mc(h, grid.front(), seed, 0);
  if (ordered_start) mc.set_config(ClassicalConfig(g.n_sites(), ordered_start->normalized()));

  for (double beta : grid) {
    mc.set_beta(beta);
    mc.tune(opts.burn_in, opts.target_acceptance);
    std::vector<double> es, goods, distinct;
    std::vector<double> counts(nev, 0.0), obs(nobs, 0.0);
    es.reserve(opts.sweeps);
    std::vector<int> labels(g.n_blocks());
    for (int k = 0; k < opts.sweeps; ++k) {
      mc.sweep();
      es.push_back(mc.energy());
      int good = 0;
      for (int t = 0; t < g.n_blocks(); ++t) {
        labels[t] = classify_block(g, mc.config(), t, family);
        if (labels[t] >= 0) {
          counts[labels[t]] += 1.0;
          ++good;
        }
      }
      int dn = 0;
      for (int t = 0; t < g.n_blocks(); ++t)
        for (int j = 0; j < g.dim(); ++j) {
          const int u = g.neighbor_block(t, j);
          if (labels[t] >= 0 && labels[u] >= 0 && labels[t] != labels[u]) ++dn;
        }
      goods.push_back(static_cast<double>(good) / g.n_blocks());
      distinct.push_back(dn);
      for (int o = 0; o < nobs; ++o) obs[o] += observables[o].second(mc.config());
    }
    ScanPoint pt;
    pt.beta = beta;
    const auto [em, es_sigma] = batch_stats(es, opts.batches);
    pt.energy_density = em / g.n_sites();
    pt.bond_energy = -em / n_bonds;
    pt.energy_sigma = es_sigma / g.n_sites();
    const auto [gm, gs] = batch_stats(goods, opts.batches);
    pt.good_fraction = gm;
    pt.good_sigma = gs;
    pt.bad_fraction = 1.0 - gm;
    pt.distinct_neighbors = batch_stats(distinct, opts.batches).first;
    for (int i = 0; i < nev; ++i) pt.event_fractions.push_back(counts[i] / (double(opts.sweeps) * g.n_blocks()));
    for (int o = 0; o < nobs; ++o) pt.observables.push_back(obs[o] / opts.sweeps);
    pt.acceptance = mc.acceptance();
    res.points.push_back(std::move(pt));
  }
  return res;
}

double jump_statistic(const std::vector<double>& values) {
  if (values.size() < 3) throw std::invalid_argument("jump statistic needs at least three values");
  std::vector<double> d;
  for (std::size_t i = 1; i < values.size(); ++i) d.push_back(std::abs(values[i] - values[i - 1]));
  const double mx = *std::max_element(d.begin(), d.end());
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double med = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  if (med == 0.0) return mx > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return mx / med;
}

namespace {
std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman_rho needs paired samples");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace spinboard
