#pragma once
// The five model families: quantum Hamiltonians in the original and
// reflection-positive frames, their classical limits, and the entropy
// profiles and bound constants of the large-entropy models.

#include "spinboard/su2kit.hpp"
#include "spinboard/torus.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spinboard {

enum class ModelKind : int {
  heisenberg = 1,      // anisotropic antiferromagnet
  xy_nonlinear = 2,    // P of the xy coupling
  nematic = 3,         // P of the full coupling
  orbital_compass = 4, // d = 2
  ortho_120 = 5,       // d = 3
};

enum class Frame { original, rp };
enum class SignMode { plus, minus };
enum class DiamondMode { xy_only, xz_flip_y };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

// E(x) = sum_k c_k x^k with eps so that A(s) = E(1 - eps s).
enum class ProfileFamily { power_mean, density };

struct EntropyProfile {
  int p = 1;
  ProfileFamily family = ProfileFamily::power_mean;
  std::vector<double> coeffs;  // c_0..c_p
  double eps = 1.0;
  std::function<double(double)> density;  // phi on [0, 1], density family only

  double energy(double x) const;         // E_p(x)
  double energy_slope(double x) const;   // E_p'(x)
  double a_p(double s) const;            // E_p(1 - eps s)
  double a_limit(double s) const;        // p -> infinity limit
  double sup_gap(double s_max, int samples = 2001) const;
};

// ((1+x)/2)^p with eps = 1/p, or c_k = phi(k/p)/p normalized, eps = 1/p.
EntropyProfile entropy_profile(int p, ProfileFamily family,
                               std::function<double(double)> density = {});

struct EntropyBoundConstants {
  int d = 2;
  double a_d = 0.0;           // d 2^{d-1}, bonds in a 2^d block
  double a_p_t = 0.0;         // A_p(t)
  double delta = 0.0;         // min{1 + 1/a_d - 1/A, 1/a_d - b/A}
  double delta_prime = 0.0;   // 1 - (1 - b'/a_d)/A
  bool kappa2_feasible = false;  // (1 - (1-b)/a_d)/A <= 1
  bool b0_feasible = false;      // b < 1/(1 + a_d)
};

EntropyBoundConstants entropy_bound_constants(int d, double b, double b_prime, double a_p_t);
EntropyBoundConstants entropy_bound_constants(int d, double b, double b_prime, double t,
                                              const EntropyProfile& profile);

// Fractions for a bond pattern on the 2^d block: mask bit i set means bond i
// is disordered. f_s counts sites all of whose block bonds are disordered.
struct PatternFractions {
  double f_b = 0.0;
  double f_s = 0.0;
  bool mixed = false;
};
std::vector<std::array<int, 2>> block_bond_list(int d);  // local site pairs on {0,1}^d
PatternFractions pattern_fractions(int d, std::uint64_t disordered_mask);

struct ModelSpec {
  ModelKind kind = ModelKind::heisenberg;
  SpinMagnitude spin{1};
  double j1 = 0.0, j2 = 0.0;       // heisenberg
  std::vector<double> coeffs;      // kinds 2-3: E_p coefficients c_0..c_p
  double eps = 1.0;
  SignMode sign = SignMode::plus;  // kind 2
  BondGraph graph;
  std::optional<TorusGeometry> torus;

  DiamondMode diamond() const;
  int dim() const { return spin.dim(); }
  void validate() const;
};

ModelSpec heisenberg_model(SpinMagnitude s, double j1, double j2, BondGraph graph,
                           std::optional<TorusGeometry> torus = std::nullopt);
ModelSpec large_entropy_model(ModelKind kind, SpinMagnitude s, const EntropyProfile& profile, SignMode sign,
                              BondGraph graph, std::optional<TorusGeometry> torus = std::nullopt);
ModelSpec orbital_compass_model(SpinMagnitude s, BondGraph graph,
                                std::optional<TorusGeometry> torus = std::nullopt);
ModelSpec ortho120_model(SpinMagnitude s, BondGraph graph, std::optional<TorusGeometry> torus = std::nullopt);
// Torus convenience overload.
ModelSpec with_torus(ModelSpec spec, const TorusGeometry& g);

// v_1..v_6 in the xz-plane at angles 0, 60, ..., 300 degrees (index 0..5).
Vec3 hex_vector(int k);

// Per-site unitary of the reflection-positivity transform; rp = U orig U^dagger.
CMat rp_site_unitary(const ModelSpec& spec, int parity);
// Classical rotation induced by the site unitary: U|w> ~ |R w>.
Mat3 rp_site_rotation(const ModelSpec& spec, int parity);
CMat rp_transform(const ModelSpec& spec);  // full product unitary

// Two-site operator for bond r -> r + e_dir, r of sublattice `parity`.
CMat bond_operator(const ModelSpec& spec, int dir, Frame frame, int parity = 0);
CMat build_quantum_hamiltonian(const ModelSpec& spec, Frame frame, long long dim_cap = 1LL << 14);

// Classical bond energy in the given frame (the S -> infinity symbol).
double classical_bond_energy(const ModelSpec& spec, int dir, const Vec3& a, const Vec3& b,
                             Frame frame = Frame::rp, int parity = 0);

enum class EnergyForm { direct, completed_square };
double classical_energy(const ModelSpec& spec, const ClassicalConfig& config, Frame frame = Frame::rp,
                        EnergyForm form = EnergyForm::direct);

// Reflection positivity probe: <A conj(theta A)> for random A on the half
// x_0 < L/2 (site 0 for a single bond), theta the reflection x_0 -> L-1-x_0.
struct RpReport {
  double min_real = 0.0;
  double max_imag = 0.0;
  double scale = 0.0;  // largest |value| seen
  int trials = 0;
  bool positive = false;
};
RpReport rp_check(const CMat& h, const ModelSpec& spec, double beta, int trials, std::uint64_t seed,
                  int factors = 1, double tol = 1e-10);

}  // namespace spinboard
