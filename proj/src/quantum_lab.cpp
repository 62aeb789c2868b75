#include "spinboard/quantum_lab.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinboard {

std::shared_ptr<const Spectrum> diagonalize(const CMat& h, long long dim_cap) {
  if (h.rows() > dim_cap) throw std::length_error("Hilbert space dimension exceeds cap " + std::to_string(dim_cap));
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  auto sp = std::make_shared<Spectrum>();
  sp->energies = es.eigenvalues();
  sp->vectors = es.eigenvectors();
  return sp;
}

GibbsEnsemble::GibbsEnsemble(std::shared_ptr<const Spectrum> spectrum, double beta, SpinMagnitude spin, int n_sites)
    : spectrum_(std::move(spectrum)), beta_(beta), spin_(spin), n_sites_(n_sites) {
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  e0_ = spectrum_->energies.minCoeff();
}

GibbsEnsemble GibbsEnsemble::from_model(const ModelSpec& spec, Frame frame, double beta, long long dim_cap) {
  return GibbsEnsemble(diagonalize(build_quantum_hamiltonian(spec, frame, dim_cap), dim_cap), beta, spec.spin,
                       spec.graph.n_sites);
}

double GibbsEnsemble::log_partition() const {
  return -beta_ * e0_ + std::log((-beta_ * (spectrum_->energies.array() - e0_)).exp().sum());
}

CMat GibbsEnsemble::density() const {
  Eigen::VectorXd w = (-beta_ * (spectrum_->energies.array() - e0_)).exp();
  w /= w.sum();
  return spectrum_->vectors * w.asDiagonal() * spectrum_->vectors.adjoint();
}

cplx GibbsEnsemble::expectation(const CMat& a) const { return (density() * a).trace(); }

cplx GibbsEnsemble::matrix_element(const ClassicalConfig& a, const ClassicalConfig& b) const {
  const CVec pa = spectrum_->vectors.adjoint() * product_state(spin_, a);
  const CVec pb = spectrum_->vectors.adjoint() * product_state(spin_, b);
  cplx out = 0.0;
  for (Eigen::Index n = 0; n < pa.size(); ++n) out += std::conj(pa(n)) * pb(n) * std::exp(-beta_ * spectrum_->energies(n));
  return out;
}

double GibbsEnsemble::log_diagonal(const ClassicalConfig& a) const {
  const CVec pa = spectrum_->vectors.adjoint() * product_state(spin_, a);
  double s = 0.0;
  for (Eigen::Index n = 0; n < pa.size(); ++n)
    s += std::norm(pa(n)) * std::exp(-beta_ * (spectrum_->energies(n) - e0_));
  return -beta_ * e0_ + std::log(s);
}

double GibbsEnsemble::log_abs_matrix_element(const ClassicalConfig& a, const ClassicalConfig& b) const {
  const CVec pa = spectrum_->vectors.adjoint() * product_state(spin_, a);
  const CVec pb = spectrum_->vectors.adjoint() * product_state(spin_, b);
  cplx s = 0.0;
  for (Eigen::Index n = 0; n < pa.size(); ++n)
    s += std::conj(pa(n)) * pb(n) * std::exp(-beta_ * (spectrum_->energies(n) - e0_));
  return -beta_ * e0_ + std::log(std::abs(s));
}

namespace {

void require_beta(const GibbsEnsemble& ens, double c2) {
  const double limit = c2 * std::sqrt(ens.spin().value());
  if (ens.beta() > limit * (1.0 + 1e-12))
    throw std::invalid_argument("beta = " + std::to_string(ens.beta()) + " exceeds c2 sqrt(S) = " +
                                std::to_string(limit));
}

}  // namespace

SandwichReport sandwich_check(const GibbsEnsemble& ens, const HamiltonianSymbols& sym, const ClassicalConfig& w,
                              double c2) {
  require_beta(ens, c2);
  const auto s = sym(w);
  SandwichReport rep;
  rep.log_diag = ens.log_diagonal(w);
  rep.lower_symbol = s.lower;
  rep.upper_symbol = s.upper;
  rep.lower_slack = rep.log_diag + ens.beta() * s.lower;
  rep.kappa = ens.beta() > 0.0 ? (rep.log_diag + ens.beta() * s.upper) / (ens.beta() * ens.n_sites()) : 0.0;
  return rep;
}

FullBoundReport full_bound_check(const GibbsEnsemble& ens, const HamiltonianSymbols& sym, const ClassicalConfig& a,
                                 const ClassicalConfig& b, double c2) {
  require_beta(ens, c2);
  FullBoundReport rep;
  rep.log_abs = ens.log_abs_matrix_element(a, b);
  rep.upper_a = sym(a).upper;
  rep.dist = config_distances(ens.spin(), a, b);
  rep.excess = rep.log_abs + ens.beta() * rep.upper_a + rep.dist.eta * rep.dist.mixed;
  rep.excess_per_beta_volume = ens.beta() > 0.0 ? rep.excess / (ens.beta() * ens.n_sites()) : 0.0;
  return rep;
}

BerezinLiebReport berezin_lieb_check(const CMat& h, SpinMagnitude s, int n_sites, double beta, int degree,
                                     Exec exec) {
  if (n_sites != 1 && n_sites != 2) throw std::invalid_argument("Berezin-Lieb check supports one or two sites");
  const int d = s.dim();
  if (h.rows() != (n_sites == 1 ? d : d * d)) throw std::invalid_argument("operator size does not match");
  const auto q = sphere_quadrature(degree);
  const int n = static_cast<int>(q.nodes.size());
  const double four_pi = 4.0 * std::numbers::pi;
  BerezinLiebReport rep;
  rep.degree = degree;

  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const double e0 = es.eigenvalues().minCoeff();
  const double log_tr = -beta * e0 + std::log((-beta * (es.eigenvalues().array() - e0)).exp().sum());
  rep.quantum_mid = std::exp(log_tr - n_sites * std::log(static_cast<double>(d)));

  if (n_sites == 1) {
    const auto up = upper_symbol(h, s);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const CVec v = coherent_state(s, q.nodes[i]);
      lo += q.weights[i] * std::exp(-beta * v.dot(h * v).real());
      hi += q.weights[i] * std::exp(-beta * up.real(q.nodes[i]));
    }
    rep.classical_lower = lo / four_pi;
    rep.classical_upper = hi / four_pi;
  } else {
    const BondSymbol sym(h, s);
    std::vector<CVec> states(n);
    std::vector<Eigen::VectorXcd> y(n);
    for (int i = 0; i < n; ++i) {
      states[i] = coherent_state(s, q.nodes[i]);
      y[i] = sym.scaled_harmonics(q.nodes[i]);
    }
    // Partial contractions over the second site.
    std::vector<CMat> partial(n);
    std::vector<Eigen::VectorXcd> zy(n);
    for (int j = 0; j < n; ++j) zy[j] = sym.contract_right(y[j]);
    for (int j = 0; j < n; ++j) {
      CMat k = CMat::Zero(d, d);
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) {
          cplx acc = 0.0;
          for (int b = 0; b < d; ++b)
            for (int e = 0; e < d; ++e) acc += std::conj(states[j](b)) * h(a * d + b, c * d + e) * states[j](e);
          k(a, c) = acc;
        }
      partial[j] = k;
    }
    auto row = [&](std::int64_t i, bool upper) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double e = upper ? y[i].cwiseProduct(zy[j]).sum().real()
                               : states[i].dot(partial[j] * states[i]).real();
        acc += q.weights[j] * std::exp(-beta * e);
      }
      return q.weights[i] * acc;
    };
    rep.classical_lower = indexed_sum(n, [&](std::int64_t i) { return row(i, false); }, exec) / (four_pi * four_pi);
    rep.classical_upper = indexed_sum(n, [&](std::int64_t i) { return row(i, true); }, exec) / (four_pi * four_pi);
  }
  const double tol = 1e-12 * std::max(1.0, rep.quantum_mid);
  rep.ordered = rep.classical_lower <= rep.quantum_mid + tol && rep.quantum_mid <= rep.classical_upper + tol;
  return rep;
}

BerezinLiebReport berezin_lieb_check(const ModelSpec& spec, double beta, int degree, Exec exec) {
  if (spec.graph.n_sites != 2) throw std::invalid_argument("Berezin-Lieb check supports two-site models");
  return berezin_lieb_check(build_quantum_hamiltonian(spec, Frame::rp), spec.spin, 2, beta, degree, exec);
}

QhatEstimate q_hat(SpinMagnitude s, int n_sites, const ConfigPredicate& event, std::int64_t samples,
                   std::uint64_t seed, int batches, Exec exec) {
  auto raw = qhat_batches(s, n_sites, event, samples, batches, seed, exec);
  QhatEstimate est;
  est.samples = raw.samples_per_batch * batches;
  for (auto h : raw.hits) est.hits += h;
  if (est.hits == 0) throw std::domain_error("event has no accepted samples; it looks like a null set");
  const auto dim = raw.batch_means[0].rows();
  est.mean = CMat::Zero(dim, dim);
  for (const auto& m : raw.batch_means) est.mean += m;
  est.mean /= batches;
  est.sigma = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& m : raw.batch_means) est.sigma += (m - est.mean).cwiseAbs2();
  est.sigma = (est.sigma / (batches - 1.0) / batches).cwiseSqrt();
  est.batches = std::move(raw.batch_means);
  return est;
}

CMat place_block_operator(const TorusGeometry& g, const CMat& op, const std::vector<int>& t, int dim) {
  const int bv = g.block_volume();
  const int n = g.n_sites();
  const long long rest = checked_power(dim, n - bv, kDefaultDimCap);
  const PlacedBlock p = PlacedBlock::origin(g.dim()).moved_by(t, true);
  std::vector<int> perm(n);
  std::vector<char> used(n, 0);
  for (int u = 0; u < bv; ++u) {
    perm[u] = placed_site(g, p, u);
    used[perm[u]] = 1;
  }
  int next = bv;
  for (int x = 0; x < n; ++x)
    if (!used[x]) perm[next++] = x;
  CMat full = permute_sites(Eigen::kroneckerProduct(op, CMat::Identity(rest, rest)).eval(), perm, dim);
  if (p.conjugated) full = full.conjugate().eval();
  return full;
}

ChessboardReport chessboard_check_quantum(const ModelSpec& spec, double beta, const ConfigPredicate& event1,
                                          const ConfigPredicate& event2, int t1, int t2, std::int64_t samples,
                                          std::uint64_t seed, Exec exec) {
  if (!spec.torus) throw std::invalid_argument("quantum chessboard check needs a torus");
  const auto& g = *spec.torus;
  const int ratio = g.side() / g.block();
  if (ratio != 2 && ratio != 4) throw std::invalid_argument("quantum chessboard check needs L = 2B or 4B");
  if (t1 == t2) throw std::invalid_argument("blocks t1 and t2 must differ");
  const auto ens = GibbsEnsemble::from_model(spec, Frame::rp, beta);
  const CMat rho = ens.density();
  const int dim = spec.dim();
  constexpr int kBatches = 32;
  const auto q1 = q_hat(spec.spin, g.block_volume(), event1, samples, seed, kBatches, exec);
  const auto q2 = q_hat(spec.spin, g.block_volume(), event2, samples, seed + 1, kBatches, exec);

  auto evaluate = [&](const CMat& a1, const CMat& a2, double& lhs, double& rhs) {
    lhs = (rho * place_block_operator(g, a1, g.block_coords(t1), dim) *
           place_block_operator(g, a2, g.block_coords(t2), dim))
              .trace()
              .real();
    rhs = 1.0;
    for (const CMat* a : {&a1, &a2}) {
      CMat prod = CMat::Identity(rho.rows(), rho.cols());
      for (int t = 0; t < g.n_blocks(); ++t) prod = prod * place_block_operator(g, *a, g.block_coords(t), dim);
      const double v = (rho * prod).trace().real();
      rhs *= std::pow(std::max(v, 0.0), 1.0 / g.n_blocks());
    }
  };

  ChessboardReport rep;
  evaluate(q1.mean, q2.mean, rep.lhs, rep.rhs);
  rep.margin = rep.rhs - rep.lhs;
  double mean = 0.0, sq = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    double l = 0.0, r = 0.0;
    evaluate(q1.batches[b], q2.batches[b], l, r);
    mean += r - l;
    sq += (r - l) * (r - l);
  }
  mean /= kBatches;
  rep.sigma = std::sqrt(std::max(0.0, sq / kBatches - mean * mean) / (kBatches - 1));
  rep.pass = rep.margin >= -3.0 * rep.sigma;
  return rep;
}

}  // namespace spinboard
