#include "spinboard/torus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace spinboard {

BondGraph BondGraph::single_bond(int direction, int n_directions) {
  if (direction < 0 || direction >= n_directions) throw std::invalid_argument("bond direction out of range");
  BondGraph g;
  g.n_sites = 2;
  g.n_directions = n_directions;
  g.bonds.push_back({0, 1, direction});
  g.parity = {0, 1};
  return g;
}

std::vector<std::vector<int>> BondGraph::incidence() const {
  std::vector<std::vector<int>> inc(n_sites);
  for (int i = 0; i < static_cast<int>(bonds.size()); ++i) {
    inc[bonds[i].a].push_back(i);
    inc[bonds[i].b].push_back(i);
  }
  return inc;
}

TorusGeometry::TorusGeometry(int d, int L, int B) : d_(d), L_(L), B_(B) {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (L < 2 || L % 2 != 0) throw std::invalid_argument("torus side must be even, got " + std::to_string(L));
  if (B < 1 || L % B != 0)
    throw std::invalid_argument("block side " + std::to_string(B) + " does not divide " + std::to_string(L));
  n_sites_ = 1;
  n_blocks_ = 1;
  block_volume_ = 1;
  for (int j = 0; j < d; ++j) {
    n_sites_ *= L;
    n_blocks_ *= L / B;
    block_volume_ *= B;
  }
}

TorusGeometry build_torus(int d, int L, int B) { return TorusGeometry(d, L, B); }

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

std::vector<int> unpack(int index, int base, int d) {
  std::vector<int> c(d);
  for (int j = 0; j < d; ++j) {
    c[j] = index % base;
    index /= base;
  }
  return c;
}

int pack(const std::vector<int>& c, int base) {
  int index = 0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) index = index * base + mod(c[j], base);
  return index;
}

}  // namespace

std::vector<int> TorusGeometry::site_coords(int site) const { return unpack(site, L_, d_); }
int TorusGeometry::site_index(const std::vector<int>& coords) const { return pack(coords, L_); }
std::vector<int> TorusGeometry::block_coords(int block) const { return unpack(block, L_ / B_, d_); }
int TorusGeometry::block_index(const std::vector<int>& coords) const { return pack(coords, L_ / B_); }
std::vector<int> TorusGeometry::local_coords(int local) const { return unpack(local, B_, d_); }

int TorusGeometry::neighbor_site(int site, int dir, int step) const {
  auto c = site_coords(site);
  c[dir] += step;
  return site_index(c);
}

int TorusGeometry::neighbor_block(int block, int dir, int step) const {
  auto c = block_coords(block);
  c[dir] += step;
  return block_index(c);
}

int TorusGeometry::site_parity(int site) const {
  int s = 0;
  for (int x : site_coords(site)) s += x;
  return s % 2;
}

int TorusGeometry::block_parity(int block) const {
  int s = 0;
  for (int x : block_coords(block)) s += x;
  return s % 2;
}

BondGraph TorusGeometry::bonds() const {
  BondGraph g;
  g.n_sites = n_sites_;
  g.n_directions = d_;
  for (int r = 0; r < n_sites_; ++r)
    for (int j = 0; j < d_; ++j) g.bonds.push_back({r, neighbor_site(r, j), j});
  g.parity.resize(n_sites_);
  for (int r = 0; r < n_sites_; ++r) g.parity[r] = site_parity(r);
  return g;
}

std::vector<int> block_reflection_map(const TorusGeometry& g, const std::vector<int>& t) {
  if (static_cast<int>(t.size()) != g.dim()) throw std::invalid_argument("block index has wrong dimension");
  std::vector<int> map(g.n_sites());
  const int B = g.block();
  for (int x = 0; x < g.n_sites(); ++x) {
    auto c = g.site_coords(x);
    for (int j = 0; j < g.dim(); ++j) c[j] = (t[j] % 2 != 0) ? (t[j] + 1) * B - 1 - c[j] : c[j] + B * t[j];
    map[x] = g.site_index(c);
  }
  return map;
}

std::vector<int> plane_reflection_map(const TorusGeometry& g, int dir, int plane) {
  std::vector<int> map(g.n_sites());
  for (int x = 0; x < g.n_sites(); ++x) {
    auto c = g.site_coords(x);
    c[dir] = 2 * plane - 1 - c[dir];
    map[x] = g.site_index(c);
  }
  return map;
}

ClassicalConfig apply_site_map(const std::vector<int>& map, const ClassicalConfig& config) {
  if (map.size() != config.size()) throw std::invalid_argument("site map size mismatch");
  ClassicalConfig out(config.size());
  for (std::size_t x = 0; x < config.size(); ++x) out[map[x]] = config[x];
  return out;
}

ClassicalConfig reflect(const TorusGeometry& g, const std::vector<int>& t, const ClassicalConfig& config,
                        bool conjugate) {
  auto out = apply_site_map(block_reflection_map(g, t), config);
  int parity = 0;
  for (int v : t) parity += v;
  if (conjugate && mod(parity, 2) == 1)
    for (auto& w : out) w = sigma(w);
  return out;
}

PlacedBlock PlacedBlock::origin(int d) { return {std::vector<int>(d, 0), std::vector<bool>(d, false), false}; }

PlacedBlock PlacedBlock::moved_by(const std::vector<int>& t, bool conjugate) const {
  PlacedBlock out = *this;
  int parity = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    out.position[j] += t[j];
    if (t[j] % 2 != 0) out.mirrored[j] = !out.mirrored[j];
    parity += t[j];
  }
  if (conjugate && mod(parity, 2) == 1) out.conjugated = !out.conjugated;
  return out;
}

int placed_site(const TorusGeometry& g, const PlacedBlock& p, int local) {
  const auto u = g.local_coords(local);
  std::vector<int> c(g.dim());
  for (int j = 0; j < g.dim(); ++j) c[j] = g.block() * p.position[j] + (p.mirrored[j] ? g.block() - 1 - u[j] : u[j]);
  return g.site_index(c);
}

ClassicalConfig pull_block(const TorusGeometry& g, const PlacedBlock& p, const ClassicalConfig& config) {
  ClassicalConfig out(g.block_volume());
  for (int u = 0; u < g.block_volume(); ++u) {
    const Vec3& w = config[placed_site(g, p, u)];
    out[u] = p.conjugated ? sigma(w) : w;
  }
  return out;
}

ClassicalConfig pull_window(const TorusGeometry& g, int origin_site, const ClassicalConfig& config) {
  const auto o = g.site_coords(origin_site);
  ClassicalConfig out(g.block_volume());
  for (int u = 0; u < g.block_volume(); ++u) {
    auto c = g.local_coords(u);
    for (int j = 0; j < g.dim(); ++j) c[j] += o[j];
    out[u] = config[g.site_index(c)];
  }
  return out;
}

bool blocks_connected(const TorusGeometry& g, const std::vector<char>& in_set) {
  const int n = g.n_blocks();
  int start = -1, count = 0;
  for (int i = 0; i < n; ++i)
    if (in_set[i]) {
      ++count;
      if (start < 0) start = i;
    }
  if (count == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int j = 0; j < g.dim(); ++j)
      for (int step : {-1, 1}) {
        const int w = g.neighbor_block(v, j, step);
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
  }
  return reached == count;
}

namespace {

ContourSet describe(const TorusGeometry& g, const std::vector<char>& in_set) {
  ContourSet c;
  for (int i = 0; i < g.n_blocks(); ++i)
    if (in_set[i]) c.members.push_back(i);
  c.boundary_per_dir.assign(g.dim(), 0);
  for (int x = 0; x < g.n_blocks(); ++x)
    for (int j = 0; j < g.dim(); ++j) {
      const int y = g.neighbor_block(x, j);
      if (in_set[x] == in_set[y]) continue;
      BoundaryEdge e;
      e.dir = j;
      e.inside_is_left = in_set[x];
      e.inside = in_set[x] ? x : y;
      e.outside = in_set[x] ? y : x;
      c.boundary.push_back(e);
      ++c.boundary_per_dir[j];
    }
  c.max_dir = static_cast<int>(std::max_element(c.boundary_per_dir.begin(), c.boundary_per_dir.end()) -
                               c.boundary_per_dir.begin());
  for (const auto& e : c.boundary)
    if (e.dir == c.max_dir && !e.inside_is_left) c.exterior_layer.push_back(e.outside);
  std::sort(c.exterior_layer.begin(), c.exterior_layer.end());
  c.exterior_layer.erase(std::unique(c.exterior_layer.begin(), c.exterior_layer.end()), c.exterior_layer.end());
  return c;
}

}  // namespace

std::vector<ContourSet> enumerate_contours(const TorusGeometry& g, int t1, int t2, int cap) {
  const int n = g.n_blocks();
  if (cap < 0) cap = 1 << (2 * g.dim());
  if (n > cap)
    throw std::length_error("factor torus has " + std::to_string(n) + " blocks, cap is " + std::to_string(cap));
  if (t1 < 0 || t1 >= n || t2 < 0 || t2 >= n || t1 == t2) throw std::invalid_argument("need distinct blocks t1, t2");

  std::vector<std::vector<int>> nbr(n);
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < g.dim(); ++j)
      for (int step : {-1, 1}) nbr[v].push_back(g.neighbor_block(v, j, step));
    std::sort(nbr[v].begin(), nbr[v].end());
    nbr[v].erase(std::unique(nbr[v].begin(), nbr[v].end()), nbr[v].end());
  }

  std::vector<ContourSet> out;
  std::vector<char> in_s(n, 0), banned(n, 0);
  in_s[t1] = 1;
  banned[t2] = 1;

  // Each connected set containing t1 is produced once: frontier vertices are
  // taken in order and banned for the later siblings.
  std::function<void(std::vector<int>)> grow = [&](std::vector<int> frontier) {
    std::vector<char> comp(n);
    for (int i = 0; i < n; ++i) comp[i] = !in_s[i];
    if (blocks_connected(g, comp)) out.push_back(describe(g, in_s));
    std::vector<int> newly_banned;
    std::vector<char> in_frontier(n, 0);
    for (int v : frontier) in_frontier[v] = 1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const int u = frontier[i];
      std::vector<int> next(frontier.begin() + i + 1, frontier.end());
      std::vector<char> in_next(n, 0);
      for (int v : next) in_next[v] = 1;
      for (int w : nbr[u])
        if (!in_s[w] && !banned[w] && !in_frontier[w] && !in_next[w]) {
          next.push_back(w);
          in_next[w] = 1;
        }
      in_s[u] = 1;
      grow(next);
      in_s[u] = 0;
      banned[u] = 1;
      newly_banned.push_back(u);
    }
    for (int u : newly_banned) banned[u] = 0;
  };

  std::vector<int> start;
  for (int w : nbr[t1])
    if (!banned[w]) start.push_back(w);
  grow(start);
  return out;
}

double peierls_sum(const TorusGeometry& g, int t1, int t2, double q, int cap) {
  if (q < 0.0) throw std::invalid_argument("q must be non-negative");
  double total = 0.0;
  for (const auto& c : enumerate_contours(g, t1, t2, cap))
    total += 2.0 * std::pow(4.0 * q, static_cast<double>(c.boundary.size()) / (4.0 * g.dim()));
  return total;
}

}  // namespace spinboard
