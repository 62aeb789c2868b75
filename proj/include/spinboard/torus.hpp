#pragma once
// Torus geometry, block tilings, reflections and contour enumeration.

#include "spinboard/su2kit.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace spinboard {

struct Bond {
  int a = 0;    // r
  int b = 0;    // r + e_dir
  int dir = 0;
};

// Interaction graph. Torus graphs hold one bond r -> r + e_j per site and
// direction, so a side of length 2 carries each pair twice.
struct BondGraph {
  int n_sites = 0;
  int n_directions = 0;
  std::vector<Bond> bonds;
  std::vector<int> parity;  // sublattice of each site

  static BondGraph single_bond(int direction = 0, int n_directions = 1);
  // incident[r] = indices into bonds touching r
  std::vector<std::vector<int>> incidence() const;
};

class TorusGeometry {
 public:
  TorusGeometry(int d, int L, int B);

  int dim() const { return d_; }
  int side() const { return L_; }
  int block() const { return B_; }
  int blocks_per_side() const { return L_ / B_; }
  int n_sites() const { return n_sites_; }
  int n_blocks() const { return n_blocks_; }
  int block_volume() const { return block_volume_; }

  std::vector<int> site_coords(int site) const;
  int site_index(const std::vector<int>& coords) const;  // coordinates taken mod L
  std::vector<int> block_coords(int block) const;
  int block_index(const std::vector<int>& coords) const;  // mod L/B
  std::vector<int> local_coords(int local) const;        // inside a block, 0..B-1
  int neighbor_site(int site, int dir, int step = 1) const;
  int neighbor_block(int block, int dir, int step = 1) const;
  int site_parity(int site) const;
  int block_parity(int block) const;

  BondGraph bonds() const;

 private:
  int d_, L_, B_;
  int n_sites_, n_blocks_, block_volume_;
};

TorusGeometry build_torus(int d, int L, int B);

// Site map of theta_t: component j goes to (t_j+1)B-1-x_j if t_j is odd and
// to x_j + B t_j otherwise. It carries block 0 onto block t.
std::vector<int> block_reflection_map(const TorusGeometry& g, const std::vector<int>& t);
// Reflection through the plane between x_dir = plane-1 and x_dir = plane.
std::vector<int> plane_reflection_map(const TorusGeometry& g, int dir, int plane);

// Image of a configuration under theta_t, with sigma applied when t has odd
// parity and conjugate is set (that is vartheta_t).
ClassicalConfig reflect(const TorusGeometry& g, const std::vector<int>& t, const ClassicalConfig& config,
                        bool conjugate);
ClassicalConfig apply_site_map(const std::vector<int>& map, const ClassicalConfig& config);

// A block event placed on the torus: the event lives on block `position`,
// mirrored in the flagged directions and conjugated if `conjugated`.
struct PlacedBlock {
  std::vector<int> position;
  std::vector<bool> mirrored;
  bool conjugated = false;

  static PlacedBlock origin(int d);
  // Effect of vartheta_t (or theta_t if conjugate is false) on the placement.
  PlacedBlock moved_by(const std::vector<int>& t, bool conjugate) const;
  bool operator==(const PlacedBlock&) const = default;
};

// Block-local view of config at a placement; local index follows local_coords.
ClassicalConfig pull_block(const TorusGeometry& g, const PlacedBlock& p, const ClassicalConfig& config);
// Global site of local index u at placement p.
int placed_site(const TorusGeometry& g, const PlacedBlock& p, int local);
// Block-shaped window whose lowest corner is at `origin_site`.
ClassicalConfig pull_window(const TorusGeometry& g, int origin_site, const ClassicalConfig& config);

struct BoundaryEdge {
  int inside = 0;   // block in the contour set
  int outside = 0;  // block in the complement
  int dir = 0;
  bool inside_is_left = false;  // edge is (inside, inside + e_dir)
};

struct ContourSet {
  std::vector<int> members;  // sorted block indices
  std::vector<BoundaryEdge> boundary;
  std::vector<int> boundary_per_dir;
  int max_dir = 0;
  std::vector<int> exterior_layer;  // complement blocks left of a boundary edge in max_dir
};

// All Y with t1 in Y, t2 not in Y, Y and its complement connected.
std::vector<ContourSet> enumerate_contours(const TorusGeometry& g, int t1, int t2, int cap = -1);

// sum over contours of 2 (4q)^{|dY| / (4d)}
double peierls_sum(const TorusGeometry& g, int t1, int t2, double q, int cap = -1);

// Connectivity of a block subset on the factor torus (used by tests and enumeration).
bool blocks_connected(const TorusGeometry& g, const std::vector<char>& in_set);

}  // namespace spinboard
