#include "spinboard/spinwave.hpp"

#include "spinboard/models.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinboard {

Vec3 quarter_circle(double theta_star) { return {std::cos(theta_star), 0.0, std::sin(theta_star)}; }

double dhat(double k1, double k2, const Vec3& w) {
  return w.z() * w.z() * (2.0 - 2.0 * std::cos(k1)) + w.x() * w.x() * (2.0 - 2.0 * std::cos(k2));
}

namespace {

struct RowParams {
  double lambda, outer, inner;  // outer multiplies the k1 gap, inner the k2 gap
};

// (1/2pi) int dk2 log(a - b cos k2) = log((a + sqrt(a^2 - b^2)) / 2)
double row_integral(double k1, void* p) {
  const auto* r = static_cast<const RowParams*>(p);
  const double a = r->lambda + r->outer * (2.0 - 2.0 * std::cos(k1)) + 2.0 * r->inner;
  const double b = 2.0 * r->inner;
  return std::log((a + std::sqrt(std::max(0.0, (a - b) * (a + b)))) / 2.0);
}

double integral_mode(const Vec3& w, double lambda) {
  double wx2 = w.x() * w.x(), wz2 = w.z() * w.z();
  // put the larger coefficient inside so the outer integrand stays bounded
  if (wx2 < wz2) std::swap(wx2, wz2);
  RowParams p{lambda, wz2, wx2};
  gsl_function f{&row_integral, &p};
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
  double result = 0.0, err = 0.0;
  const auto old = gsl_set_error_handler_off();
  const int status = gsl_integration_qags(&f, 0.0, std::numbers::pi, 1e-13, 1e-12, 1000, ws, &result, &err);
  gsl_set_error_handler(old);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw std::runtime_error(std::string("spin-wave integral failed: ") + gsl_strerror(status));
  // 1/2 * (1/pi) int_0^pi
  return 0.5 * result / std::numbers::pi;
}

}  // namespace

double f_lambda(const Vec3& w, double lambda, SumMode mode, int L, Exec exec) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be non-negative");
  if (std::abs(w.y()) > 1e-12 || std::abs(w.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("direction must be a unit vector in the xz-plane");
  if (mode == SumMode::integral) return integral_mode(w, lambda);
  if (lambda == 0.0) throw std::invalid_argument("the lattice sum needs lambda > 0 (the k = 0 term is log lambda)");
  if (L < 2) throw std::invalid_argument("lattice mode needs L >= 2");
  return lattice_log_sum(w.x() * w.x(), w.z() * w.z(), lambda, L, exec) / (2.0 * double(L) * L);
}

FreeEnergyLimit f_infinite(const Vec3& w, SumMode mode, int L, std::vector<double> lambdas) {
  if (lambdas.size() < 5) throw std::invalid_argument("the extrapolation needs at least five lambda values");
  FreeEnergyLimit out;
  out.lambdas = lambdas;
  const int n = static_cast<int>(lambdas.size());
  Eigen::MatrixXd a(n, 4);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double l = lambdas[i];
    out.ladder.push_back(f_lambda(w, l, mode, L));
    // sqrt(lambda) appears along the axes, where the problem is one-dimensional
    a.row(i) << 1.0, std::sqrt(l), l * std::log(l), l;
    y(i) = out.ladder.back();
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  out.value = c(0);
  out.fit_error = (a * c - y).cwiseAbs().maxCoeff();
  const double last = out.ladder[std::distance(lambdas.begin(), std::min_element(lambdas.begin(), lambdas.end()))];
  if (out.fit_error > 1e-4 || std::abs(out.value - last) > 1e-2)
    throw std::runtime_error("lambda extrapolation did not converge");
  return out;
}

FreeEnergyMinimum minimize_f(double resolution_deg, double tol) {
  if (!(resolution_deg > 0.0) || resolution_deg > 1.0) throw std::invalid_argument("resolution must be in (0, 1] degree");
  FreeEnergyMinimum m;
  const int steps = static_cast<int>(std::lround(90.0 / resolution_deg));
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (int i = 0; i <= steps; ++i) {
    const double deg = 90.0 * i / steps;
    m.theta_deg.push_back(deg);
    m.values.push_back(f_infinite(quarter_circle(deg * std::numbers::pi / 180.0), SumMode::integral, 0, ladder).value);
  }
  const double fmin = *std::min_element(m.values.begin(), m.values.end());
  m.gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    if (m.values[i] <= fmin + tol) m.argmin_deg.push_back(m.theta_deg[i]);
    if (i > 0 && i < steps) m.gap = std::min(m.gap, m.values[i] - fmin);
  }
  m.monotone_to_45 = true;
  for (int i = 2; i <= steps && m.theta_deg[i] <= 45.0 + 1e-9; ++i)
    if (m.values[i] < m.values[i - 1] - 1e-12) m.monotone_to_45 = false;
  return m;
}

DirectFreeEnergy f_mc_direct(int L, double delta, double beta, const Vec3& w, const McOptions& opts,
                             std::uint64_t seed, double beta_min, double regime, Exec exec) {
  if (!(delta > 0.0) || !(beta > beta_min) || !(beta_min > 0.0)) throw std::invalid_argument("need 0 < beta_min < beta and delta > 0");
  DirectFreeEnergy out;
  out.beta = beta;
  out.delta = delta;
  out.beta_delta2 = beta * delta * delta;
  out.beta_delta3 = beta * delta * delta * delta;
  out.regime_ok = out.beta_delta2 > 1.0 / regime && out.beta_delta3 < regime;

  const TorusGeometry g(2, L, 1);
  // H + N = sum_bonds (1/2)(gap)^2 + sum_r y_r^2; the site term is spread over
  // the 2d bond slots of each site.
  auto bond = [](int dir, int, const Vec3& a, const Vec3& b) {
    const double gap = dir == 0 ? a.x() - b.x() : a.z() - b.z();
    return 0.5 * gap * gap + 0.25 * (a.y() * a.y() + b.y() * b.y());
  };
  const auto h = make_classical_hamiltonian(g.bonds(), bond);
  const SiteConstraints caps(g.n_sites(), SiteRegion::cap(w, delta));
  const double n = g.n_sites();

  const int nodes = opts.ti_nodes;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(nodes);
  std::vector<double> u(nodes + 1), wt(nodes + 1, 0.0);
  for (int i = 0; i < nodes; ++i)
    gsl_integration_glfixed_point(std::log(beta_min), std::log(beta), i, &u[i], &wt[i], table);
  gsl_integration_glfixed_table_free(table);
  u[nodes] = std::log(beta_min);  // anchor correction point

  std::vector<MeanEstimate> est(nodes + 1);
  auto run = [&](int i) { est[i] = mean_energy(h, std::exp(u[i]), caps, opts, seed, static_cast<std::uint64_t>(i)); };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i <= nodes; ++i) run(i);
  } else {
    for (int i = 0; i <= nodes; ++i) run(i);
  }
  // d log Z / d log beta = -beta <H + N>
  double log_z = n * std::log(4.0 * std::numbers::pi * caps[0]->area_fraction()) - beta_min * est[nodes].mean;
  double var = std::pow(beta_min * est[nodes].sigma, 2);
  for (int i = 0; i < nodes; ++i) {
    const double b = std::exp(u[i]);
    log_z -= wt[i] * b * est[i].mean;
    var += std::pow(wt[i] * b * est[i].sigma, 2);
  }
  out.value = -log_z / n;
  out.sigma = std::sqrt(var) / n;
  return out;
}

ClassicalConfig deviation_config(const TorusGeometry& g, double base_angle, double delta, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ClassicalConfig c(g.n_sites());
  for (auto& w : c) {
    const double ang = base_angle + 0.5 * delta * u(rng);
    const double y = delta * u(rng);
    const double r = std::sqrt(1.0 - y * y);
    w = Vec3(r * std::cos(ang), y, r * std::sin(ang));
  }
  return c;
}

DeviationReport deviation_identity_check(const TorusGeometry& g, const ClassicalConfig& config, double delta) {
  if (g.dim() != 3) throw std::invalid_argument("the 120-degree model lives on a d = 3 torus");
  if (static_cast<int>(config.size()) != g.n_sites()) throw std::invalid_argument("configuration size mismatch");
  const auto spec = ortho120_model(SpinMagnitude(2), g.bonds(), g);
  ClassicalConfig flat(config.size());
  DeviationReport rep;
  double ysq = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    flat[i] = Vec3(config[i].x(), 0.0, config[i].z()).normalized();
    rep.max_y = std::max(rep.max_y, std::abs(config[i].y()));
    ysq += config[i].y() * config[i].y();
  }
  for (const auto& b : spec.graph.bonds) {
    const Vec3 v = hex_vector(2 * b.dir + 1);
    rep.max_gap = std::max(rep.max_gap, std::abs(flat[b.a].dot(v) - flat[b.b].dot(v)));
  }
  const double slack = 1.0 + 1e-12;
  if (rep.max_y > delta * slack || rep.max_gap > delta * slack)
    throw std::invalid_argument("configuration violates the deviation hypotheses");
  rep.residual = std::abs(classical_energy(spec, config) - classical_energy(spec, flat) - 1.5 * ysq);
  rep.scaled = rep.residual / (delta * delta * delta * std::pow(g.side(), 3));
  return rep;
}

}  // namespace spinboard
