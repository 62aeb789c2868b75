#include "spinboard/model_symbols.hpp"

#include "spinboard/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace spinboard {

HamiltonianSymbols::HamiltonianSymbols(const ModelSpec& spec, Frame frame)
    : spec_(spec), frame_(frame), bond_(2 * spec.graph.n_directions) {
  spec_.validate();
  for (const auto& b : spec_.graph.bonds) {
    const int key = 2 * b.dir + spec_.graph.parity[b.a] % 2;
    if (!bond_[key])
      bond_[key] = std::make_shared<BondSymbol>(bond_operator(spec_, b.dir, frame_, spec_.graph.parity[b.a]),
                                                spec_.spin);
  }
}

SymbolPair HamiltonianSymbols::operator()(const ClassicalConfig& config) const {
  if (static_cast<int>(config.size()) != spec_.graph.n_sites)
    throw std::invalid_argument("configuration size does not match the model");
  const auto& any = *std::find_if(bond_.begin(), bond_.end(), [](const auto& p) { return bool(p); });
  std::vector<Eigen::VectorXcd> harm(config.size());
  std::vector<CVec> states(config.size());
  for (std::size_t r = 0; r < config.size(); ++r) {
    harm[r] = any->scaled_harmonics(config[r]);
    states[r] = coherent_state(spec_.spin, config[r]);
  }
  SymbolPair out;
  const int d = spec_.dim();
  for (const auto& b : spec_.graph.bonds) {
    const auto& sym = *bond_[2 * b.dir + spec_.graph.parity[b.a] % 2];
    out.upper += sym.upper_from_harmonics(harm[b.a], harm[b.b]);
    CVec v(d * d);
    for (int i = 0; i < d; ++i) v.segment(i * d, d) = states[b.a](i) * states[b.b];
    out.lower += v.dot(sym.op() * v).real();
  }
  return out;
}

SymbolPair hamiltonian_symbols(const ModelSpec& spec, const ClassicalConfig& config, Frame frame) {
  return HamiltonianSymbols(spec, frame)(config);
}

SymbolGap estimate_xi(const ModelSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const HamiltonianSymbols sym(spec, Frame::rp);
  const int n = spec.graph.n_sites;
  std::vector<Vec3> dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int k = 0; k < 6; ++k) dirs.push_back(hex_vector(k));
  auto rng = make_stream(seed, 0x7869);
  SymbolGap gap;
  gap.kind = spec.kind;
  gap.spin = spec.spin.value();
  auto visit = [&](const ClassicalConfig& c) {
    const auto s = sym(c);
    const double h = classical_energy(spec, c, Frame::rp);
    gap.upper_gap = std::max(gap.upper_gap, std::abs(s.upper - h) / n);
    gap.lower_gap = std::max(gap.lower_gap, std::abs(s.lower - h) / n);
    ++gap.samples;
  };
  for (const auto& w : dirs) visit(ClassicalConfig(n, w));
  for (int i = 0; i < samples; ++i) {
    ClassicalConfig c(n);
    if (i % 2 == 0) {
      for (auto& w : c) w = uniform_sphere(rng);
    } else {
      c.assign(n, uniform_sphere(rng));
    }
    visit(c);
  }
  gap.xi = gap.upper_gap + gap.lower_gap;
  return gap;
}

}  // namespace spinboard
