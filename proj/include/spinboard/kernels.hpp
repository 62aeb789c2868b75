#pragma once
// Hot loops with an OpenMP version and a serial reference.
// Work is split into a fixed number of chunks whose partial results are
// combined in chunk order, so both versions give bitwise identical output
// for any thread count.

#include "spinboard/su2kit.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace spinboard {

enum class Exec { serial, parallel };

inline constexpr int kChunks = 64;

template <class T, class Body>
T chunked_reduce(std::int64_t n, const T& zero, Body body, Exec exec) {
  // body(begin, end, acc) accumulates items [begin, end) into acc
  std::vector<T> partial(kChunks, zero);
  auto run = [&](int c) {
    const std::int64_t lo = n * c / kChunks;
    const std::int64_t hi = n * (c + 1) / kChunks;
    body(lo, hi, partial[c]);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < kChunks; ++c) run(c);
  } else {
    for (int c = 0; c < kChunks; ++c) run(c);
  }
  T total = zero;
  for (int c = 0; c < kChunks; ++c) total += partial[c];
  return total;
}

// sum_i w_i f_i |v_i><v_i| where gen(i, v, wf) fills the state and weight.
using StateGenerator = std::function<void(std::int64_t, CVec&, cplx&)>;
CMat projector_sum(std::int64_t n, int dim, const StateGenerator& gen, Exec exec);

// sum over k in (2 pi / L) Z_L^2 of log(lambda + wz2 |1-e^{ik1}|^2 + wx2 |1-e^{ik2}|^2)
double lattice_log_sum(double wx2, double wz2, double lambda, int L, Exec exec);

// sum_{i < n} f(i)
double indexed_sum(std::int64_t n, const std::function<double(std::int64_t)>& f, Exec exec);

// Monte Carlo estimate of (dim_factor) * E[1_A(omega) |omega><omega|] for omega
// uniform on the product of spheres. Batch b uses its own stream derived from
// (seed, b). Returns the per-batch means.
struct QhatBatches {
  std::vector<CMat> batch_means;
  std::vector<std::int64_t> hits;  // accepted samples per batch
  std::int64_t samples_per_batch = 0;
};
using ConfigPredicate = std::function<bool(const ClassicalConfig&)>;
QhatBatches qhat_batches(SpinMagnitude s, int n_sites, const ConfigPredicate& event,
                         std::int64_t samples, int batches, std::uint64_t seed, Exec exec);

// Random number plumbing shared by the samplers.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);
Vec3 uniform_sphere(std::mt19937_64& rng);

}  // namespace spinboard
