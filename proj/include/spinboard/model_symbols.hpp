#pragma once
// Symbols of the model Hamiltonians and the per-site symbol gap xi.

#include "spinboard/models.hpp"
#include "spinboard/symbols.hpp"

#include <cstdint>
#include <memory>

namespace spinboard {

struct SymbolPair {
  double lower = 0.0;
  double upper = 0.0;
};

// Caches one BondSymbol per (direction, sublattice) of a model.
class HamiltonianSymbols {
 public:
  HamiltonianSymbols(const ModelSpec& spec, Frame frame = Frame::rp);
  SymbolPair operator()(const ClassicalConfig& config) const;
  double upper(const ClassicalConfig& config) const { return (*this)(config).upper; }
  double lower(const ClassicalConfig& config) const { return (*this)(config).lower; }
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  Frame frame_;
  std::vector<std::shared_ptr<BondSymbol>> bond_;  // index 2*dir + parity
};

SymbolPair hamiltonian_symbols(const ModelSpec& spec, const ClassicalConfig& config, Frame frame = Frame::rp);

struct SymbolGap {
  double xi = 0.0;           // upper_gap + lower_gap
  double upper_gap = 0.0;    // sup |[H] - H_inf| / N over the samples
  double lower_gap = 0.0;    // sup |<H> - H_inf| / N over the samples
  ModelKind kind = ModelKind::heisenberg;
  double spin = 0.0;
  int samples = 0;
};

// Random configurations plus homogeneous ones along the axes and the
// hexagonal directions, which is where the two-body gaps peak.
SymbolGap estimate_xi(const ModelSpec& spec, int samples, std::uint64_t seed);

}  // namespace spinboard
