// Serial versus OpenMP timings for the hot kernels. The serial path is the
// reference; both produce identical numbers (see the kernel unit tests).

#include "spinboard/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace spinboard;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_projector_sum(benchmark::State& st) {
  const SpinMagnitude s(8);
  auto gen = [&](std::int64_t i, CVec& v, cplx& w) {
    const double t = 0.001 * i;
    v = coherent_state(s, from_angles(std::fmod(t, std::numbers::pi), 7 * t));
    w = 1.0;
  };
  for (auto _ : st) benchmark::DoNotOptimize(projector_sum(20000, s.dim(), gen, mode(st)));
}

void BM_lattice_log_sum(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lattice_log_sum(0.5, 0.5, 1e-4, 512, mode(st)));
}

void BM_qhat_batches(benchmark::State& st) {
  const SpinMagnitude s(1);
  auto event = [](const ClassicalConfig& c) { return c[0].z() > 0.0 && c[1].z() > 0.0; };
  for (auto _ : st) benchmark::DoNotOptimize(qhat_batches(s, 4, event, 1 << 15, 16, 1, mode(st)));
}

}  // namespace

BENCHMARK(BM_projector_sum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lattice_log_sum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_qhat_batches)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
