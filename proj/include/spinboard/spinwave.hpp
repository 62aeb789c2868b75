#pragma once
// Gaussian spin-wave free energies of the 2D orbital compass model around a
// homogeneous direction in the xz-plane, their minimization, a direct Monte
// Carlo cross-check, and the deviation-variable identity of the 120-degree
// model.

#include "spinboard/classical_mc.hpp"
#include "spinboard/kernels.hpp"
#include "spinboard/torus.hpp"

#include <cstdint>
#include <vector>

namespace spinboard {

// (cos t, 0, sin t), t in [0, pi/2]
Vec3 quarter_circle(double theta_star);

// w_z^2 |1 - e^{i k1}|^2 + w_x^2 |1 - e^{i k2}|^2
double dhat(double k1, double k2, const Vec3& w);

enum class SumMode { integral, lattice };

// (1/2) int dk/(2pi)^2 log(lambda + dhat), or the reciprocal-torus sum
// (1/2L^2) sum_k. The integral mode does the k2 integral in closed form.
double f_lambda(const Vec3& w, double lambda, SumMode mode, int L = 0, Exec exec = Exec::parallel);

struct FreeEnergyLimit {
  double value = 0.0;
  double fit_error = 0.0;         // largest residual of the fit on the ladder
  std::vector<double> lambdas;
  std::vector<double> ladder;     // f_lambda on the ladder
};
// lambda -> 0 by a least-squares fit of F0 + a sqrt(lambda) + b lambda log lambda + c lambda.
// Throws if the fit residual exceeds 1e-4 or F0 strays from the last rung.
FreeEnergyLimit f_infinite(const Vec3& w, SumMode mode = SumMode::integral, int L = 512,
                           std::vector<double> lambdas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});

struct FreeEnergyMinimum {
  std::vector<double> theta_deg;
  std::vector<double> values;
  std::vector<double> argmin_deg;  // grid points within tol of the minimum
  double gap = 0.0;                // min over interior points of F - min F
  bool monotone_to_45 = false;     // nondecreasing on (0, 45]
};
FreeEnergyMinimum minimize_f(double resolution_deg = 1.0, double tol = 1e-6);

struct DirectFreeEnergy {
  double value = 0.0;  // -(1/L^2) log int exp(-beta (H + N)) 1{caps}
  double sigma = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double beta_delta2 = 0.0;
  double beta_delta3 = 0.0;
  bool regime_ok = false;  // beta delta^2 > 1/regime and beta delta^3 < regime
};
// Thermodynamic integration in log beta from beta_min, anchored by the cap
// area. Compare differences between directions, not absolute values.
DirectFreeEnergy f_mc_direct(int L, double delta, double beta, const Vec3& w, const McOptions& opts,
                             std::uint64_t seed, double beta_min = 1.0, double regime = 0.25,
                             Exec exec = Exec::parallel);

// 120-degree model on a d = 3 torus: H(w) - H(flattened w) - (3/2) sum w_y^2.
struct DeviationReport {
  double residual = 0.0;
  double scaled = 0.0;  // residual / (delta^3 L^3)
  double max_y = 0.0;
  double max_gap = 0.0;
};
// Requires |w_y| <= delta and in-plane projection gaps <= delta on every bond.
DeviationReport deviation_identity_check(const TorusGeometry& g, const ClassicalConfig& config, double delta);

// In-plane angles base + delta * a_r / 2 and heights delta * b_r with a, b
// uniform in [-1, 1] from the seed, so that scaling delta rescales one
// fixed pattern.
ClassicalConfig deviation_config(const TorusGeometry& g, double base_angle, double delta, std::uint64_t seed);

}  // namespace spinboard
