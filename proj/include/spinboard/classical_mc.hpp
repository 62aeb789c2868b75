#pragma once
// Metropolis sampling of the classical limits, block events and their
// classification, the classical chessboard comparison, thermodynamic
// integration for event probabilities, and beta scans.

#include "spinboard/kernels.hpp"
#include "spinboard/models.hpp"
#include "spinboard/torus.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinboard {

// {w : w.axis >= cos_half_angle}, or {|w.axis| >= cos_half_angle} if two-sided.
struct SiteRegion {
  Vec3 axis{0, 0, 1};
  double cos_half_angle = 1.0;
  bool two_sided = false;

  static SiteRegion cap(const Vec3& axis, double half_angle);
  static SiteRegion band(const Vec3& axis, double half_angle);
  bool contains(const Vec3& w) const;
  double area_fraction() const;
  bool is_full() const;           // the whole sphere
  SiteRegion conjugated() const;  // image under sigma
};

// Event on a B-block, evaluated on the block-local configuration.
struct BlockEvent {
  std::string label;
  std::function<bool(const ClassicalConfig&)> predicate;
  std::vector<SiteRegion> product;  // one region per local site when the event is a product

  bool holds(const ClassicalConfig& block) const { return predicate(block); }
  bool is_product() const { return !product.empty(); }
};

BlockEvent product_event(std::string label, std::vector<SiteRegion> regions);
BlockEvent uniform_product_event(std::string label, const SiteRegion& region, int block_volume);

struct GoodEventFamily {
  std::vector<BlockEvent> events;
};

// G_+ / G_-: every spin within kappa of +z / -z.
GoodEventFamily heisenberg_events(double kappa, int block_volume);
// G_x / G_z: every spin within kappa of the x (z) axis, either sign.
GoodEventFamily compass_events(double kappa, int block_volume);
// G_k: every spin within kappa of v_k, k = 1..6.
GoodEventFamily ortho120_events(double kappa, int block_volume);
// Energetically good (every block bond has E(w . w') >= b) and entropic
// (every block bond below b); the product is the model's rp-frame coupling.
GoodEventFamily entropy_events(const ModelSpec& spec, double b, int B, int d);

// Index of the event that holds, -1 if none. Throws if two hold.
int classify_block(const GoodEventFamily& family, const ClassicalConfig& block);
int classify_block(const TorusGeometry& g, const ClassicalConfig& config, int block, const GoodEventFamily& family);

// Adjacent blocks carrying different good events must be separated by a bad
// block: the window shifted by one site from the first block toward the second.
struct IncompatibilityReport {
  long long pairs_checked = 0;
  long long violations = 0;
};
IncompatibilityReport incompatibility_scan(const TorusGeometry& g, const GoodEventFamily& family,
                                           const ClassicalConfig& config);

struct ClassicalHamiltonian {
  BondGraph graph;
  // bond(dir, sublattice of the first end, a, b)
  std::function<double(int dir, int parity, const Vec3& a, const Vec3& b)> bond;
  std::vector<std::vector<int>> incidence;

  double energy(const ClassicalConfig& config) const;
  double local_energy(const ClassicalConfig& config, int site, const Vec3& spin) const;
};
ClassicalHamiltonian classical_hamiltonian(const ModelSpec& spec, Frame frame = Frame::rp);
ClassicalHamiltonian make_classical_hamiltonian(BondGraph graph,
                                                std::function<double(int, int, const Vec3&, const Vec3&)> bond);

double metropolis_acceptance(double delta_e, double beta);

using SiteConstraints = std::vector<std::optional<SiteRegion>>;

class MetropolisSampler {
 public:
  MetropolisSampler(const ClassicalHamiltonian& h, double beta, std::uint64_t seed, std::uint64_t stream,
                    SiteConstraints constraints = {});

  void set_config(ClassicalConfig config);
  void randomize();
  void sweep();
  // Adjusts the cone half-angle toward the target acceptance. Only call
  // during burn-in; the chain is reversible for a fixed cone.
  void tune(int sweeps, double target = 0.5);

  const ClassicalConfig& config() const { return config_; }
  double energy() const { return energy_; }
  double acceptance() const { return tried_ ? static_cast<double>(accepted_) / tried_ : 0.0; }
  double cone() const { return cone_; }
  void set_beta(double beta) { beta_ = beta; }
  void reset_counters() { accepted_ = tried_ = 0; }

 private:
  Vec3 propose(const Vec3& w);
  const ClassicalHamiltonian* h_;
  double beta_;
  std::mt19937_64 rng_;
  SiteConstraints constraints_;
  ClassicalConfig config_;
  double energy_ = 0.0;
  double cone_ = 1.0;
  long long accepted_ = 0, tried_ = 0;
  long long sweeps_done_ = 0;
};

struct McOptions {
  int burn_in = 400;
  int sweeps = 2000;
  int batches = 32;
  int ti_nodes = 12;
  double target_acceptance = 0.5;
};

struct MeanEstimate {
  double mean = 0.0;
  double sigma = 0.0;
  double acceptance = 0.0;
};
MeanEstimate mean_energy(const ClassicalHamiltonian& h, double beta, const SiteConstraints& constraints,
                         const McOptions& opts, std::uint64_t seed, std::uint64_t stream);

// log P(constraints) under the Gibbs measure at beta, by thermodynamic
// integration from the exact beta = 0 value.
struct LogProbability {
  double value = 0.0;
  double sigma = 0.0;
  double anchor = 0.0;  // beta = 0 value, sum of log area fractions
};
LogProbability log_probability(const ClassicalHamiltonian& h, const SiteConstraints& constraints, double beta,
                               const McOptions& opts, std::uint64_t seed, Exec exec = Exec::parallel);

// Constraints for the disseminated event: theta_t applied to every block t
// (or the single placement when `only` is given).
SiteConstraints disseminate(const TorusGeometry& g, const BlockEvent& event);
SiteConstraints place_event(const TorusGeometry& g, const BlockEvent& event, const std::vector<int>& t,
                            SiteConstraints base = {});

struct FrakpEstimate {
  double value = 0.0;       // P(cap_t theta_t A)^{(B/L)^d}
  double sigma = 0.0;
  LogProbability log_prob;
};
FrakpEstimate estimate_frakp(const ModelSpec& spec, double beta, const BlockEvent& event, const McOptions& opts,
                             std::uint64_t seed, Exec exec = Exec::parallel);

struct ClassicalChessboardReport {
  double lhs = 0.0;  // P(theta_t1 A1 and theta_t2 A2)
  double rhs = 0.0;  // p(A1) p(A2)
  double margin = 0.0;
  double sigma = 0.0;
  bool pass = false;  // margin >= -3 sigma
};
ClassicalChessboardReport chessboard_check_classical(const ModelSpec& spec, double beta, const BlockEvent& a1,
                                                     const BlockEvent& a2, int t1, int t2, const McOptions& opts,
                                                     std::uint64_t seed, Exec exec = Exec::parallel);

using Observable = std::pair<std::string, std::function<double(const ClassicalConfig&)>>;

struct ScanPoint {
  double beta = 0.0;
  double energy_density = 0.0;  // <H> / N
  double bond_energy = 0.0;     // -<H> / (number of bonds)
  double energy_sigma = 0.0;
  std::vector<double> event_fractions;
  double good_fraction = 0.0;
  double good_sigma = 0.0;
  double distinct_neighbors = 0.0;  // adjacent good blocks of different type, per configuration
  double bad_fraction = 0.0;
  std::vector<double> observables;
  double acceptance = 0.0;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::vector<std::string> event_labels;
  std::vector<std::string> observable_names;
};

// Anneals one chain through the grid in the given order, carrying the
// configuration from point to point.
ScanResult beta_scan(const ModelSpec& spec, const std::vector<double>& grid, const GoodEventFamily& family,
                     const std::vector<Observable>& observables, const McOptions& opts, std::uint64_t seed,
                     std::optional<Vec3> ordered_start = std::nullopt);

// max |f_{i+1} - f_i| / median |f_{i+1} - f_i|
double jump_statistic(const std::vector<double>& values);
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spinboard
