#pragma once
// Exact diagonalization of small systems: Gibbs states, coherent-state
// matrix elements of exp(-beta H), Berezin-Lieb brackets, Monte Carlo
// estimates of the quantum event projectors and the quantum chessboard
// comparison.

#include "spinboard/kernels.hpp"
#include "spinboard/model_symbols.hpp"
#include "spinboard/models.hpp"
#include "spinboard/torus.hpp"

#include <cstdint>
#include <memory>

namespace spinboard {

inline constexpr long long kDefaultDimCap = 1LL << 14;

struct Spectrum {
  Eigen::VectorXd energies;
  CMat vectors;
};
std::shared_ptr<const Spectrum> diagonalize(const CMat& h, long long dim_cap = kDefaultDimCap);

class GibbsEnsemble {
 public:
  GibbsEnsemble(std::shared_ptr<const Spectrum> spectrum, double beta, SpinMagnitude spin, int n_sites);
  static GibbsEnsemble from_model(const ModelSpec& spec, Frame frame, double beta,
                                  long long dim_cap = kDefaultDimCap);

  double beta() const { return beta_; }
  SpinMagnitude spin() const { return spin_; }
  int n_sites() const { return n_sites_; }
  const Spectrum& spectrum() const { return *spectrum_; }

  double log_partition() const;
  CMat density() const;
  cplx expectation(const CMat& a) const;
  // <a| exp(-beta H) |b>
  cplx matrix_element(const ClassicalConfig& a, const ClassicalConfig& b) const;
  double log_diagonal(const ClassicalConfig& a) const;
  double log_abs_matrix_element(const ClassicalConfig& a, const ClassicalConfig& b) const;

 private:
  std::shared_ptr<const Spectrum> spectrum_;
  double beta_;
  SpinMagnitude spin_;
  int n_sites_;
  double e0_;
};

struct SandwichReport {
  double log_diag = 0.0;     // log <w|exp(-beta H)|w>
  double lower_symbol = 0.0; // <H>_w
  double upper_symbol = 0.0; // [H]_w
  double lower_slack = 0.0;  // log_diag + beta <H>_w, >= 0
  double kappa = 0.0;        // (log_diag + beta [H]_w) / (beta |Lambda|)
};

// Requires beta <= c2 sqrt(S).
SandwichReport sandwich_check(const GibbsEnsemble& ens, const HamiltonianSymbols& sym, const ClassicalConfig& w,
                              double c2 = 1.0);

struct FullBoundReport {
  double log_abs = 0.0;  // log |<a|exp(-beta H)|b>|
  double upper_a = 0.0;  // [H]_a
  ConfigDistances dist;
  double excess = 0.0;   // log_abs + beta [H]_a + eta d(a, b)
  double excess_per_beta_volume = 0.0;
};
FullBoundReport full_bound_check(const GibbsEnsemble& ens, const HamiltonianSymbols& sym, const ClassicalConfig& a,
                                 const ClassicalConfig& b, double c2 = 1.0);

struct BerezinLiebReport {
  double classical_lower = 0.0;  // int dw/(4pi)^N exp(-beta <H>_w)
  double quantum_mid = 0.0;      // Tr exp(-beta H) / (2S+1)^N
  double classical_upper = 0.0;  // int dw/(4pi)^N exp(-beta [H]_w)
  int degree = 0;
  bool ordered = false;
};
// h acts on one or two sites of spin s.
BerezinLiebReport berezin_lieb_check(const CMat& h, SpinMagnitude s, int n_sites, double beta, int degree = 64,
                                     Exec exec = Exec::parallel);
BerezinLiebReport berezin_lieb_check(const ModelSpec& spec, double beta, int degree = 64,
                                     Exec exec = Exec::parallel);

// Q_A = ((2S+1)/(4pi))^N int_A |w><w| dw by Monte Carlo with batch means.
struct QhatEstimate {
  CMat mean;
  Eigen::MatrixXd sigma;  // standard error per entry (real and imaginary parts combined)
  std::vector<CMat> batches;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
};
QhatEstimate q_hat(SpinMagnitude s, int n_sites, const ConfigPredicate& event, std::int64_t samples,
                   std::uint64_t seed, int batches = 32, Exec exec = Exec::parallel);

// Block operator placed by vartheta_t: reflected onto block t and complex
// conjugated for odd t.
CMat place_block_operator(const TorusGeometry& g, const CMat& op, const std::vector<int>& t, int dim);

struct ChessboardReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double sigma = 0.0;
  bool pass = false;    // margin >= -3 sigma
};

// <vartheta_t1(Q_1) vartheta_t2(Q_2)> against prod_j <prod_t vartheta_t(Q_j)>^{1/|T_{L/B}|}.
// Events are predicates on the block-local configuration.
ChessboardReport chessboard_check_quantum(const ModelSpec& spec, double beta, const ConfigPredicate& event1,
                                          const ConfigPredicate& event2, int t1, int t2, std::int64_t samples,
                                          std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace spinboard
