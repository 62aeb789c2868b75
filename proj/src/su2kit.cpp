#include "spinboard/su2kit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinboard {

SpinMagnitude::SpinMagnitude(int two_s) : two_s_(two_s) {
  if (two_s < 1) throw std::invalid_argument("spin magnitude must be at least 1/2");
}

SpinMagnitude SpinMagnitude::from_value(double s) {
  const double twice = 2.0 * s;
  const double r = std::round(twice);
  if (std::abs(twice - r) > 1e-12) throw std::invalid_argument("spin magnitude must be a half-integer");
  return SpinMagnitude(static_cast<int>(r));
}

SpinOperators spin_operators(SpinMagnitude s) {
  const int n = s.dim();
  const double S = s.value();
  SpinOperators ops;
  ops.z = CMat::Zero(n, n);
  ops.plus = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = -S + i;
    ops.z(i, i) = m;
    if (i + 1 < n) ops.plus(i + 1, i) = std::sqrt(S * (S + 1) - m * (m + 1));
  }
  ops.minus = ops.plus.adjoint();
  ops.x = 0.5 * (ops.plus + ops.minus);
  ops.y = (ops.plus - ops.minus) / cplx(0.0, 2.0);
  return ops;
}

Vec3 from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::pair<double, double> to_angles(const Vec3& omega) {
  const double z = std::clamp(omega.z() / omega.norm(), -1.0, 1.0);
  const double rho = std::hypot(omega.x(), omega.y());
  const double phi = rho > 0.0 ? std::atan2(omega.y(), omega.x()) : 0.0;
  return {std::acos(z), phi};
}

Vec3 sigma(const Vec3& omega) { return {omega.x(), -omega.y(), omega.z()}; }

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

CVec coherent_state(SpinMagnitude s, const Vec3& omega) {
  const auto [theta, phi] = to_angles(omega);
  const int n2 = s.two_s();
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  CVec v(s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    // i = S + M, so S - M = 2S - i
    const int up = i;
    const int down = n2 - i;
    const double mag = std::exp(0.5 * log_binomial(n2, up)) * std::pow(c, up) * std::pow(sn, down);
    v(i) = mag * std::polar(1.0, down * phi);
  }
  return v;
}

CVec product_state(SpinMagnitude s, const ClassicalConfig& config) {
  CVec out = CVec::Ones(1);
  for (const auto& omega : config) {
    const CVec site = coherent_state(s, omega);
    CVec next(out.size() * site.size());
    for (Eigen::Index a = 0; a < out.size(); ++a)
      next.segment(a * site.size(), site.size()) = out(a) * site;
    out = std::move(next);
  }
  return out;
}

cplx overlap(SpinMagnitude s, const Vec3& a, const Vec3& b) {
  const auto [ta, pa] = to_angles(a);
  const auto [tb, pb] = to_angles(b);
  const cplx base = std::cos(0.5 * ta) * std::cos(0.5 * tb) +
                    std::polar(1.0, pa - pb) * std::sin(0.5 * ta) * std::sin(0.5 * tb);
  cplx out = 1.0;
  for (int k = 0; k < s.two_s(); ++k) out *= base;
  return out;
}

CMat rotation_unitary(SpinMagnitude s, const Vec3& axis, double t) {
  const auto ops = spin_operators(s);
  const Vec3 w = axis.normalized();
  const CMat gen = w.x() * ops.x + w.y() * ops.y + w.z() * ops.z;
  Eigen::SelfAdjointEigenSolver<CMat> es(gen);
  CVec phases(s.dim());
  for (int i = 0; i < s.dim(); ++i) phases(i) = std::polar(1.0, t * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat3 rotation_matrix(const Vec3& axis, double t) {
  return Eigen::AngleAxisd(-t, axis.normalized()).toRotationMatrix();
}

ConfigDistances config_distances(SpinMagnitude s, const ClassicalConfig& a,
                                 const ClassicalConfig& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("configurations have different sizes: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  const double S = s.value();
  const double rs = std::sqrt(S);
  ConfigDistances out;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const double gap = (a[r] - b[r]).norm();
    out.l1 += gap;
    out.l2sq += gap * gap;
    out.mixed += std::min(rs * gap, S * gap * gap);
  }
  out.sqrt_s_l1 = rs * out.l1;
  return out;
}

int differing_sites(const ClassicalConfig& a, const ClassicalConfig& b) {
  if (a.size() != b.size()) throw std::invalid_argument("configurations have different sizes");
  int n = 0;
  for (std::size_t r = 0; r < a.size(); ++r) n += (a[r] != b[r]);
  return n;
}

long long checked_power(int base, int exponent, long long cap) {
  long long v = 1;
  for (int i = 0; i < exponent; ++i) {
    v *= base;
    if (v > cap) throw std::length_error("Hilbert space dimension exceeds cap " + std::to_string(cap));
  }
  return v;
}

CMat embed_site_operator(const CMat& op, int site, int n_sites, int dim) {
  const long long total = checked_power(dim, n_sites, 1LL << 30);
  long long stride = 1;
  for (int r = site + 1; r < n_sites; ++r) stride *= dim;
  CMat out = CMat::Zero(total, total);
  for (long long col = 0; col < total; ++col) {
    const int j = static_cast<int>((col / stride) % dim);
    const long long base = col - j * stride;
    for (int i = 0; i < dim; ++i) {
      const cplx v = op(i, j);
      if (v != 0.0) out(base + i * stride, col) += v;
    }
  }
  return out;
}

CMat embed_two_site_operator(const CMat& op, int site_a, int site_b, int n_sites, int dim) {
  if (site_a == site_b) throw std::invalid_argument("two-site operator needs distinct sites");
  const long long total = checked_power(dim, n_sites, 1LL << 30);
  auto stride_of = [&](int site) {
    long long st = 1;
    for (int r = site + 1; r < n_sites; ++r) st *= dim;
    return st;
  };
  const long long sa = stride_of(site_a);
  const long long sb = stride_of(site_b);
  CMat out = CMat::Zero(total, total);
  for (long long col = 0; col < total; ++col) {
    const int ja = static_cast<int>((col / sa) % dim);
    const int jb = static_cast<int>((col / sb) % dim);
    const long long base = col - ja * sa - jb * sb;
    const int jc = ja * dim + jb;
    for (int ia = 0; ia < dim; ++ia)
      for (int ib = 0; ib < dim; ++ib) {
        const cplx v = op(ia * dim + ib, jc);
        if (v != 0.0) out(base + ia * sa + ib * sb, col) += v;
      }
  }
  return out;
}

CMat permute_sites(const CMat& op, const std::vector<int>& perm, int dim) {
  const int n = static_cast<int>(perm.size());
  const long long total = checked_power(dim, n, 1LL << 30);
  if (op.rows() != total) throw std::invalid_argument("operator size does not match permutation");
  std::vector<long long> stride(n, 1);
  for (int r = n - 2; r >= 0; --r) stride[r] = stride[r + 1] * dim;
  std::vector<long long> image(total);
  for (long long idx = 0; idx < total; ++idx) {
    long long out = 0;
    for (int r = 0; r < n; ++r) out += ((idx / stride[r]) % dim) * stride[perm[r]];
    image[idx] = out;
  }
  CMat res(total, total);
  for (long long c = 0; c < total; ++c)
    for (long long r = 0; r < total; ++r) res(image[r], image[c]) = op(r, c);
  return res;
}

}  // namespace spinboard
