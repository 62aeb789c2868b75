#include "spinboard/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinboard {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedU};
  return std::mt19937_64(seq);
}

Vec3 uniform_sphere(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double z = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * u(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

namespace {

// CMat has no zero-size default that += can grow into, so carry the dimension.
struct MatAcc {
  CMat m;
  MatAcc& operator+=(const MatAcc& o) {
    m += o.m;
    return *this;
  }
};

}  // namespace

CMat projector_sum(std::int64_t n, int dim, const StateGenerator& gen, Exec exec) {
  const MatAcc zero{CMat::Zero(dim, dim)};
  auto body = [&](std::int64_t lo, std::int64_t hi, MatAcc& acc) {
    CVec v(dim);
    cplx w;
    for (std::int64_t i = lo; i < hi; ++i) {
      gen(i, v, w);
      acc.m.noalias() += w * (v * v.adjoint());
    }
  };
  return chunked_reduce(n, zero, body, exec).m;
}

double lattice_log_sum(double wx2, double wz2, double lambda, int L, Exec exec) {
  if (L < 1) throw std::invalid_argument("lattice size must be positive");
  std::vector<double> gap(L);
  for (int j = 0; j < L; ++j) gap[j] = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * j / L);
  auto body = [&](std::int64_t lo, std::int64_t hi, double& acc) {
    for (std::int64_t row = lo; row < hi; ++row) {
      const double a = lambda + wz2 * gap[row];
      double s = 0.0;
      for (int j = 0; j < L; ++j) s += std::log(a + wx2 * gap[j]);
      acc += s;
    }
  };
  return chunked_reduce<double>(L, 0.0, body, exec);
}

double indexed_sum(std::int64_t n, const std::function<double(std::int64_t)>& f, Exec exec) {
  auto body = [&](std::int64_t lo, std::int64_t hi, double& acc) {
    for (std::int64_t i = lo; i < hi; ++i) acc += f(i);
  };
  return chunked_reduce<double>(n, 0.0, body, exec);
}

QhatBatches qhat_batches(SpinMagnitude s, int n_sites, const ConfigPredicate& event,
                         std::int64_t samples, int batches, std::uint64_t seed, Exec exec) {
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  const long long dim = checked_power(s.dim(), n_sites, 1LL << 14);
  const double scale = std::pow(static_cast<double>(s.dim()), n_sites);
  QhatBatches out;
  out.samples_per_batch = samples / batches;
  out.batch_means.assign(batches, CMat::Zero(dim, dim));
  out.hits.assign(batches, 0);
  auto run = [&](int b) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(b));
    ClassicalConfig cfg(n_sites);
    CMat acc = CMat::Zero(dim, dim);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < out.samples_per_batch; ++i) {
      for (auto& w : cfg) w = uniform_sphere(rng);
      if (!event(cfg)) continue;
      const CVec v = product_state(s, cfg);
      acc.noalias() += v * v.adjoint();
      ++hits;
    }
    out.batch_means[b] = acc * (scale / static_cast<double>(out.samples_per_batch));
    out.hits[b] = hits;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int b = 0; b < batches; ++b) run(b);
  } else {
    for (int b = 0; b < batches; ++b) run(b);
  }
  return out;
}

}  // namespace spinboard
