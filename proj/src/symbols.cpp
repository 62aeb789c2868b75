#include "spinboard/symbols.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace spinboard {

SphereQuadrature sphere_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be non-negative");
  const int n_theta = degree / 2 + 1;  // exact to 2n-1 >= degree
  const int n_phi = degree + 1;        // exact for |k| <= degree
  SphereQuadrature q;
  q.degree = degree;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, i, &x, &w, table);
    const double rho = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_phi;
      q.nodes.emplace_back(rho * std::cos(phi), rho * std::sin(phi), x);
      q.weights.push_back(w * 2.0 * std::numbers::pi / n_phi);
    }
  }
  gsl_integration_glfixed_table_free(table);
  return q;
}

std::vector<cplx> spherical_harmonics(int lmax, const Vec3& omega) {
  const auto [theta, phi] = to_angles(omega);
  std::vector<double> plm(gsl_sf_legendre_array_n(lmax));
  gsl_sf_legendre_array_e(GSL_SF_LEGENDRE_SPHARM, lmax, std::cos(theta), -1.0, plm.data());
  std::vector<cplx> out((lmax + 1) * (lmax + 1));
  for (int l = 0; l <= lmax; ++l) {
    for (int m = 0; m <= l; ++m) {
      const cplx y = plm[gsl_sf_legendre_array_index(l, m)] * std::polar(1.0, m * phi);
      out[harmonic_index(l, m)] = y;
      if (m > 0) out[harmonic_index(l, -m)] = (m % 2 ? -1.0 : 1.0) * std::conj(y);
    }
  }
  return out;
}

CMat quantize(const SphereFunction& f, int f_degree, SpinMagnitude s, Exec exec) {
  const auto q = sphere_quadrature(s.two_s() + std::max(0, f_degree));
  const double pref = s.dim() / (4.0 * std::numbers::pi);
  auto gen = [&](std::int64_t i, CVec& v, cplx& w) {
    v = coherent_state(s, q.nodes[i]);
    w = pref * q.weights[i] * f(q.nodes[i]);
  };
  return projector_sum(static_cast<std::int64_t>(q.nodes.size()), s.dim(), gen, exec);
}

const TensorBasis& tensor_basis(SpinMagnitude s) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TensorBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[s.two_s()];
  if (slot) return *slot;
  auto basis = std::make_unique<TensorBasis>();
  basis->spin = s;
  const int lmax = s.two_s();
  const int n = (lmax + 1) * (lmax + 1);
  // One cubature pass for all harmonics at once.
  const auto q = sphere_quadrature(s.two_s() + lmax);
  const double pref = s.dim() / (4.0 * std::numbers::pi);
  basis->t.assign(n, CMat::Zero(s.dim(), s.dim()));
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const CVec v = coherent_state(s, q.nodes[i]);
    const CMat proj = v * v.adjoint();
    const auto y = spherical_harmonics(lmax, q.nodes[i]);
    for (int a = 0; a < n; ++a) basis->t[a] += (pref * q.weights[i] * y[a]) * proj;
  }
  basis->c.resize(lmax + 1);
  for (int l = 0; l <= lmax; ++l) {
    basis->c[l] = basis->t[harmonic_index(l, 0)].norm();
    for (int m = -l; m <= l; ++m) basis->t[harmonic_index(l, m)] /= basis->c[l];
  }
  slot = std::move(basis);
  return *slot;
}

std::vector<double> quantization_eigenvalues(SpinMagnitude s) { return tensor_basis(s).c; }

cplx SymbolExpansion::operator()(const Vec3& omega) const {
  const auto y = spherical_harmonics(lmax, omega);
  cplx out = 0.0;
  for (std::size_t a = 0; a < coeff.size(); ++a) out += coeff[a] * y[a];
  return out;
}

HarmonicContentError::HarmonicContentError(int degree, double weight)
    : std::runtime_error("operator has harmonic content at degree " + std::to_string(degree) +
                         " (weight " + std::to_string(weight) + ") above the allowed maximum"),
      degree_(degree),
      weight_(weight) {}

SymbolExpansion upper_symbol(const CMat& a, SpinMagnitude s, int lmax, double tol) {
  if (a.rows() != s.dim() || a.cols() != s.dim())
    throw std::invalid_argument("operator size does not match spin dimension");
  const auto& basis = tensor_basis(s);
  const int full = s.two_s();
  if (lmax < 0 || lmax > full) lmax = full;
  const double scale = std::max(1.0, a.norm());
  for (int l = lmax + 1; l <= full; ++l) {
    double w = 0.0;
    for (int m = -l; m <= l; ++m) w += std::norm((basis.t[harmonic_index(l, m)].adjoint() * a).trace());
    w = std::sqrt(w);
    if (w > tol * scale) throw HarmonicContentError(l, w);
  }
  SymbolExpansion out;
  out.spin = s;
  out.lmax = lmax;
  out.coeff.assign((lmax + 1) * (lmax + 1), 0.0);
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) {
      const int idx = harmonic_index(l, m);
      out.coeff[idx] = (basis.t[idx].adjoint() * a).trace() / basis.c[l];
    }
  return out;
}

cplx lower_symbol(const CMat& a, SpinMagnitude s, const ClassicalConfig& config) {
  const CVec v = product_state(s, config);
  if (v.size() != a.rows()) throw std::invalid_argument("operator size does not match configuration");
  return v.dot(a * v);
}

BondSymbol::BondSymbol(const CMat& h, SpinMagnitude s) : spin_(s), h_(h) {
  const int d = s.dim();
  const int n = d * d;
  if (h.rows() != n || h.cols() != n) throw std::invalid_argument("bond operator size mismatch");
  const auto& basis = tensor_basis(s);
  // Realign h[(i1 i2),(j1 j2)] -> R[(i1 j1),(i2 j2)].
  CMat realigned(n, n);
  for (int i1 = 0; i1 < d; ++i1)
    for (int i2 = 0; i2 < d; ++i2)
      for (int j1 = 0; j1 < d; ++j1)
        for (int j2 = 0; j2 < d; ++j2) realigned(i1 * d + j1, i2 * d + j2) = h(i1 * d + i2, j1 * d + j2);
  CMat tv(n, n);  // column a = vec(T_a)
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) tv(i * d + j, a) = basis.t[a](i, j);
  // <T_a (x) T_b, h> = sum conj(T_a) conj(T_b) R
  coeff_ = tv.adjoint() * realigned * tv.conjugate();
  scale_.resize(n);
  for (int l = 0; l <= s.two_s(); ++l)
    for (int m = -l; m <= l; ++m) scale_[harmonic_index(l, m)] = 1.0 / basis.c[l];
}

Eigen::VectorXcd BondSymbol::scaled_harmonics(const Vec3& omega) const {
  const auto y = spherical_harmonics(spin_.two_s(), omega);
  Eigen::VectorXcd out(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) out(a) = y[a] * scale_[a];
  return out;
}

double BondSymbol::upper_from_harmonics(const Eigen::VectorXcd& ya, const Eigen::VectorXcd& yb) const {
  return ya.cwiseProduct(coeff_ * yb).sum().real();
}

double BondSymbol::upper(const Vec3& a, const Vec3& b) const {
  return upper_from_harmonics(scaled_harmonics(a), scaled_harmonics(b));
}

double BondSymbol::lower(const Vec3& a, const Vec3& b) const {
  return lower_symbol(h_, spin_, {a, b}).real();
}

}  // namespace spinboard
