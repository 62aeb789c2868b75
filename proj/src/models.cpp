#include "spinboard/models.hpp"

#include "spinboard/kernels.hpp"

#include <gsl/gsl_integration.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinboard {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::heisenberg: return "heisenberg";
    case ModelKind::xy_nonlinear: return "xy_nonlinear";
    case ModelKind::nematic: return "nematic";
    case ModelKind::orbital_compass: return "orbital_compass";
    case ModelKind::ortho_120: return "ortho_120";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "heisenberg" || s == "1") return ModelKind::heisenberg;
  if (s == "xy_nonlinear" || s == "2") return ModelKind::xy_nonlinear;
  if (s == "nematic" || s == "3") return ModelKind::nematic;
  if (s == "orbital_compass" || s == "4") return ModelKind::orbital_compass;
  if (s == "ortho_120" || s == "5") return ModelKind::ortho_120;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

// ---------------------------------------------------------------- profiles

double EntropyProfile::energy(double x) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double EntropyProfile::energy_slope(double x) const {
  double v = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) v = v * x + k * coeffs[k];
  return v;
}

double EntropyProfile::a_p(double s) const { return energy(1.0 - eps * s); }

namespace {

double gsl_trampoline(double x, void* params) {
  return (*static_cast<std::function<double(double)>*>(params))(x);
}

double integrate_unit(std::function<double(double)> f) {
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
  gsl_function fn{&gsl_trampoline, &f};
  double result = 0.0, err = 0.0;
  gsl_integration_qags(&fn, 0.0, 1.0, 1e-13, 1e-11, 1000, ws, &result, &err);
  gsl_integration_workspace_free(ws);
  return result;
}

}  // namespace

double EntropyProfile::a_limit(double s) const {
  if (family == ProfileFamily::power_mean) return std::exp(-0.5 * s);
  const double norm = integrate_unit(density);
  return integrate_unit([&](double lam) { return density(lam) * std::exp(-lam * s); }) / norm;
}

double EntropyProfile::sup_gap(double s_max, int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = s_max * i / (samples - 1);
    worst = std::max(worst, std::abs(a_p(s) - a_limit(s)));
  }
  return worst;
}

EntropyProfile entropy_profile(int p, ProfileFamily family, std::function<double(double)> density) {
  if (p < 1) throw std::invalid_argument("profile order p must be positive");
  EntropyProfile prof;
  prof.p = p;
  prof.family = family;
  prof.eps = 1.0 / p;
  prof.coeffs.assign(p + 1, 0.0);
  if (family == ProfileFamily::power_mean) {
    // binomial(p, k) / 2^p
    double c = std::pow(0.5, p);
    for (int k = 0; k <= p; ++k) {
      prof.coeffs[k] = c;
      c = c * (p - k) / (k + 1);
    }
    return prof;
  }
  if (!density) throw std::invalid_argument("density family needs a density");
  double total = 0.0;
  for (int k = 1; k <= p; ++k) {
    const double v = density(static_cast<double>(k) / p) / p;
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("density must be finite and non-negative");
    prof.coeffs[k] = v;
    total += v;
  }
  if (!(total > 0.0)) throw std::invalid_argument("density is not normalizable");
  for (auto& c : prof.coeffs) c /= total;
  const double norm = integrate_unit(density);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("density is not normalizable");
  prof.density = std::move(density);
  return prof;
}

EntropyBoundConstants entropy_bound_constants(int d, double b, double b_prime, double a_p_t) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (!(a_p_t > 0.0)) throw std::invalid_argument("A_p(t) must be positive");
  EntropyBoundConstants k;
  k.d = d;
  k.a_d = d * std::pow(2.0, d - 1);
  k.a_p_t = a_p_t;
  k.delta = std::min(1.0 + 1.0 / k.a_d - 1.0 / a_p_t, 1.0 / k.a_d - b / a_p_t);
  k.delta_prime = 1.0 - (1.0 - b_prime / k.a_d) / a_p_t;
  k.kappa2_feasible = (1.0 - (1.0 - b) / k.a_d) / a_p_t <= 1.0;
  k.b0_feasible = b < 1.0 / (1.0 + k.a_d);
  return k;
}

EntropyBoundConstants entropy_bound_constants(int d, double b, double b_prime, double t,
                                              const EntropyProfile& profile) {
  return entropy_bound_constants(d, b, b_prime, profile.a_p(t));
}

std::vector<std::array<int, 2>> block_bond_list(int d) {
  std::vector<std::array<int, 2>> out;
  for (int j = 0; j < d; ++j)
    for (int u = 0; u < (1 << d); ++u)
      if (!(u & (1 << j))) out.push_back({u, u | (1 << j)});
  return out;
}

PatternFractions pattern_fractions(int d, std::uint64_t mask) {
  const auto bonds = block_bond_list(d);
  const int nb = static_cast<int>(bonds.size());
  if (nb >= 64 || (mask >> nb) != 0) throw std::invalid_argument("pattern mask out of range");
  PatternFractions f;
  const int dis = std::popcount(mask);
  f.f_b = static_cast<double>(dis) / nb;
  f.mixed = dis > 0 && dis < nb;
  int entropic_sites = 0;
  for (int u = 0; u < (1 << d); ++u) {
    bool all = true;
    for (int i = 0; i < nb; ++i)
      if ((bonds[i][0] == u || bonds[i][1] == u) && !(mask & (1ULL << i))) all = false;
    entropic_sites += all;
  }
  f.f_s = static_cast<double>(entropic_sites) / (1 << d);
  return f;
}

// ------------------------------------------------------------------ specs

DiamondMode ModelSpec::diamond() const {
  if (kind == ModelKind::xy_nonlinear) return DiamondMode::xy_only;
  if (kind == ModelKind::nematic) return DiamondMode::xz_flip_y;
  throw std::logic_error("diamond product only defined for kinds 2 and 3");
}

void ModelSpec::validate() const {
  if (graph.n_sites < 2) throw std::invalid_argument("model needs at least two sites");
  switch (kind) {
    case ModelKind::heisenberg:
      if (j1 < 0.0 || j1 >= 1.0 || j2 < 0.0 || j2 >= 1.0)
        throw std::invalid_argument("heisenberg couplings must lie in [0, 1)");
      break;
    case ModelKind::xy_nonlinear:
    case ModelKind::nematic: {
      double total = 0.0;
      for (double c : coeffs) {
        if (c < 0.0 || !std::isfinite(c)) throw std::invalid_argument("profile coefficients must be non-negative");
        total += c;
      }
      if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("profile coefficients must sum to 1");
      break;
    }
    case ModelKind::orbital_compass:
      if (graph.n_directions != 2) throw std::invalid_argument("orbital compass model needs d = 2");
      break;
    case ModelKind::ortho_120:
      if (graph.n_directions != 3) throw std::invalid_argument("120-degree model needs d = 3");
      break;
  }
}

namespace {

ModelSpec base_spec(ModelKind kind, SpinMagnitude s, BondGraph graph, std::optional<TorusGeometry> torus) {
  ModelSpec spec;
  spec.kind = kind;
  spec.spin = s;
  spec.graph = std::move(graph);
  spec.torus = std::move(torus);
  return spec;
}

}  // namespace

ModelSpec heisenberg_model(SpinMagnitude s, double j1, double j2, BondGraph graph,
                           std::optional<TorusGeometry> torus) {
  auto spec = base_spec(ModelKind::heisenberg, s, std::move(graph), std::move(torus));
  spec.j1 = j1;
  spec.j2 = j2;
  spec.validate();
  return spec;
}

ModelSpec large_entropy_model(ModelKind kind, SpinMagnitude s, const EntropyProfile& profile, SignMode sign,
                              BondGraph graph, std::optional<TorusGeometry> torus) {
  if (kind != ModelKind::xy_nonlinear && kind != ModelKind::nematic)
    throw std::invalid_argument("large-entropy models are kinds 2 and 3");
  auto spec = base_spec(kind, s, std::move(graph), std::move(torus));
  spec.coeffs = profile.coeffs;
  spec.eps = profile.eps;
  spec.sign = sign;
  spec.validate();
  return spec;
}

ModelSpec orbital_compass_model(SpinMagnitude s, BondGraph graph, std::optional<TorusGeometry> torus) {
  auto spec = base_spec(ModelKind::orbital_compass, s, std::move(graph), std::move(torus));
  spec.validate();
  return spec;
}

ModelSpec ortho120_model(SpinMagnitude s, BondGraph graph, std::optional<TorusGeometry> torus) {
  auto spec = base_spec(ModelKind::ortho_120, s, std::move(graph), std::move(torus));
  spec.validate();
  return spec;
}

ModelSpec with_torus(ModelSpec spec, const TorusGeometry& g) {
  spec.graph = g.bonds();
  spec.torus = g;
  spec.validate();
  return spec;
}

Vec3 hex_vector(int k) {
  const double a = std::numbers::pi * k / 3.0;
  return {std::cos(a), 0.0, std::sin(a)};
}

// ------------------------------------------------------------ transforms

namespace {

bool uses_cyclic(const ModelSpec& spec) {
  return spec.kind == ModelKind::orbital_compass || spec.kind == ModelKind::ortho_120 ||
         spec.kind == ModelKind::xy_nonlinear;
}

bool uses_flip(const ModelSpec& spec) {
  return spec.kind == ModelKind::heisenberg || spec.kind == ModelKind::nematic ||
         (spec.kind == ModelKind::xy_nonlinear && spec.sign == SignMode::minus);
}

const Vec3 kX{1, 0, 0}, kY{0, 1, 0}, kZ{0, 0, 1};

}  // namespace

CMat rp_site_unitary(const ModelSpec& spec, int parity) {
  const auto s = spec.spin;
  CMat u = CMat::Identity(s.dim(), s.dim());
  if (uses_cyclic(spec)) u = rotation_unitary(s, kY, std::numbers::pi / 2) * rotation_unitary(s, kX, std::numbers::pi / 2);
  if (uses_flip(spec) && parity % 2 == 1) u = rotation_unitary(s, kY, std::numbers::pi) * u;
  return u;
}

Mat3 rp_site_rotation(const ModelSpec& spec, int parity) {
  Mat3 r = Mat3::Identity();
  if (uses_cyclic(spec)) r = rotation_matrix(kY, std::numbers::pi / 2) * rotation_matrix(kX, std::numbers::pi / 2);
  if (uses_flip(spec) && parity % 2 == 1) r = rotation_matrix(kY, std::numbers::pi) * r;
  return r;
}

CMat rp_transform(const ModelSpec& spec) {
  checked_power(spec.dim(), spec.graph.n_sites, 1LL << 14);
  CMat u = CMat::Ones(1, 1);
  for (int r = 0; r < spec.graph.n_sites; ++r) {
    const CMat next = Eigen::kroneckerProduct(u, rp_site_unitary(spec, spec.graph.parity[r])).eval();
    u = next;
  }
  return u;
}

// --------------------------------------------------------------- operators

namespace {

CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

CMat profile_of(const std::vector<double>& coeffs, const CMat& x) {
  Eigen::SelfAdjointEigenSolver<CMat> es(x);
  Eigen::VectorXd vals(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * es.eigenvalues()(i) + *it;
    vals(i) = v;
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

CMat rp_bond_operator(const ModelSpec& spec, int dir) {
  const auto ops = spin_operators(spec.spin);
  const double S = spec.spin.value();
  const double inv = 1.0 / (S * S);
  switch (spec.kind) {
    case ModelKind::heisenberg:
      return -inv * (spec.j1 * kron(ops.x, ops.x) - spec.j2 * kron(ops.y, ops.y) + kron(ops.z, ops.z));
    case ModelKind::xy_nonlinear:
      return -profile_of(spec.coeffs, inv * (kron(ops.x, ops.x) + kron(ops.z, ops.z)));
    case ModelKind::nematic:
      return -profile_of(spec.coeffs, inv * (kron(ops.x, ops.x) - kron(ops.y, ops.y) + kron(ops.z, ops.z)));
    case ModelKind::orbital_compass:
      return dir == 0 ? CMat(-inv * kron(ops.x, ops.x)) : CMat(-inv * kron(ops.z, ops.z));
    case ModelKind::ortho_120: {
      const Vec3 v = hex_vector(2 * dir + 1);
      const CMat t = v.x() * ops.x + v.z() * ops.z;
      return -inv * kron(t, t);
    }
  }
  throw std::logic_error("unhandled model kind");
}

}  // namespace

CMat bond_operator(const ModelSpec& spec, int dir, Frame frame, int parity) {
  if (dir < 0 || dir >= spec.graph.n_directions) throw std::invalid_argument("bond direction out of range");
  CMat h = rp_bond_operator(spec, dir);
  if (frame == Frame::rp) return h;
  const CMat u = kron(rp_site_unitary(spec, parity), rp_site_unitary(spec, parity + 1));
  return u.adjoint() * h * u;
}

CMat build_quantum_hamiltonian(const ModelSpec& spec, Frame frame, long long dim_cap) {
  spec.validate();
  const long long total = checked_power(spec.dim(), spec.graph.n_sites, dim_cap);
  CMat h = CMat::Zero(total, total);
  std::vector<CMat> cache(2 * spec.graph.n_directions);
  std::vector<char> have(cache.size(), 0);
  for (const auto& b : spec.graph.bonds) {
    const int key = 2 * b.dir + spec.graph.parity[b.a] % 2;
    if (!have[key]) {
      cache[key] = bond_operator(spec, b.dir, frame, spec.graph.parity[b.a]);
      have[key] = 1;
    }
    h += embed_two_site_operator(cache[key], b.a, b.b, spec.graph.n_sites, spec.dim());
  }
  return h;
}

// ---------------------------------------------------------------- classical

double classical_bond_energy(const ModelSpec& spec, int dir, const Vec3& a, const Vec3& b, Frame frame,
                             int parity) {
  if (frame == Frame::original)
    return classical_bond_energy(spec, dir, rp_site_rotation(spec, parity) * a, rp_site_rotation(spec, parity + 1) * b,
                                 Frame::rp, parity);
  auto poly = [&](double x) {
    double v = 0.0;
    for (auto it = spec.coeffs.rbegin(); it != spec.coeffs.rend(); ++it) v = v * x + *it;
    return v;
  };
  switch (spec.kind) {
    case ModelKind::heisenberg:
      return -(spec.j1 * a.x() * b.x() - spec.j2 * a.y() * b.y() + a.z() * b.z());
    case ModelKind::xy_nonlinear:
      return -poly(a.x() * b.x() + a.z() * b.z());
    case ModelKind::nematic:
      return -poly(a.x() * b.x() - a.y() * b.y() + a.z() * b.z());
    case ModelKind::orbital_compass:
      return dir == 0 ? -a.x() * b.x() : -a.z() * b.z();
    case ModelKind::ortho_120: {
      const Vec3 v = hex_vector(2 * dir + 1);
      return -a.dot(v) * b.dot(v);
    }
  }
  throw std::logic_error("unhandled model kind");
}

double classical_energy(const ModelSpec& spec, const ClassicalConfig& config, Frame frame, EnergyForm form) {
  if (static_cast<int>(config.size()) != spec.graph.n_sites)
    throw std::invalid_argument("configuration size does not match the model");
  if (form == EnergyForm::direct) {
    double e = 0.0;
    for (const auto& b : spec.graph.bonds)
      e += classical_bond_energy(spec, b.dir, config[b.a], config[b.b], frame, spec.graph.parity[b.a]);
    return e;
  }
  if (frame != Frame::rp || !spec.torus)
    throw std::invalid_argument("completed-square form needs the rp frame on a torus");
  const int n = spec.graph.n_sites;
  double e = 0.0, ysq = 0.0;
  for (const auto& w : config) ysq += w.y() * w.y();
  if (spec.kind == ModelKind::orbital_compass) {
    for (const auto& b : spec.graph.bonds) {
      const double g = b.dir == 0 ? config[b.a].x() - config[b.b].x() : config[b.a].z() - config[b.b].z();
      e += 0.5 * g * g;
    }
    return e + ysq - n;
  }
  if (spec.kind == ModelKind::ortho_120) {
    for (const auto& b : spec.graph.bonds) {
      const Vec3 v = hex_vector(2 * b.dir + 1);
      const double g = config[b.a].dot(v) - config[b.b].dot(v);
      e += 0.5 * g * g;
    }
    return e + 1.5 * ysq - 1.5 * n;
  }
  throw std::invalid_argument("completed-square form exists for kinds 4 and 5 only");
}

// ------------------------------------------------------------------- rp check

RpReport rp_check(const CMat& h, const ModelSpec& spec, double beta, int trials, std::uint64_t seed, int factors,
                  double tol) {
  const int n = spec.graph.n_sites;
  const int dim = spec.dim();
  std::vector<int> perm(n);
  std::vector<int> plus;
  if (spec.torus) {
    const auto& g = *spec.torus;
    for (int x = 0; x < n; ++x) {
      auto c = g.site_coords(x);
      if (c[0] < g.side() / 2) plus.push_back(x);
      c[0] = g.side() - 1 - c[0];
      perm[x] = g.site_index(c);
    }
  } else {
    if (n != 2) throw std::invalid_argument("rp check needs a torus or a single bond");
    perm = {1, 0};
    plus = {0};
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const double e0 = es.eigenvalues().minCoeff();
  Eigen::VectorXd w = (-beta * (es.eigenvalues().array() - e0)).exp();
  const CMat rho = es.eigenvectors() * (w / w.sum()).asDiagonal() * es.eigenvectors().adjoint();

  auto rng = make_stream(seed, 0x7270);
  std::normal_distribution<double> g01(0.0, 1.0);
  // Put the plus-half sites first, draw A on them, then move them back.
  std::vector<int> order(plus);
  for (int x = 0; x < n; ++x)
    if (std::find(plus.begin(), plus.end(), x) == plus.end()) order.push_back(x);
  std::vector<int> place(n);
  for (int i = 0; i < n; ++i) place[i] = order[i];
  const long long half_dim = checked_power(dim, static_cast<int>(plus.size()), 1LL << 14);
  const long long rest_dim = checked_power(dim, n - static_cast<int>(plus.size()), 1LL << 14);

  RpReport rep;
  rep.trials = trials;
  rep.min_real = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    CMat a = CMat::Identity(half_dim, half_dim);
    for (int f = 0; f < factors; ++f) {
      CMat m(half_dim, half_dim);
      for (long long i = 0; i < half_dim; ++i)
        for (long long j = 0; j < half_dim; ++j) m(i, j) = cplx(g01(rng), g01(rng));
      a = a * m;
    }
    const CMat full = permute_sites(kron(a, CMat::Identity(rest_dim, rest_dim)), place, dim);
    const CMat reflected = permute_sites(full, perm, dim).conjugate();
    const cplx v = (rho * full * reflected).trace();
    rep.min_real = std::min(rep.min_real, v.real());
    rep.max_imag = std::max(rep.max_imag, std::abs(v.imag()));
    rep.scale = std::max(rep.scale, std::abs(v));
  }
  const double slack = tol * std::max(1.0, rep.scale);
  rep.positive = rep.min_real >= -slack && rep.max_imag <= slack;
  return rep;
}

}  // namespace spinboard
