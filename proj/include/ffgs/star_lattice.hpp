// Copyright 2026 The ffgs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FFGS_STAR_LATTICE_HPP
#define FFGS_STAR_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffgs/graph.hpp"

namespace ffgs {

enum class Boundary { periodic, open };

inline const char* boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

/// Outcome / deformation label: 0, 1, 2 for x, y, z.
using Label = std::uint8_t;

inline char label_name(Label l) { return "xyz"[l]; }

/// The (3,12^2) star lattice: a honeycomb lattice with every vertex replaced
/// by a triangle. Six vertices per unit cell.
///
/// Vertex 6 * (i * L2 + j) + s. For s < 3 the vertex is corner s of the
/// A-triangle of cell (i, j), pointing along honeycomb bond s; for s >= 3 it
/// is corner s - 3 of the B-triangle. Bond 0 joins A(i,j) to B(i,j), bond 1
/// joins A(i,j) to B(i-1,j), bond 2 joins A(i,j) to B(i,j-1).
class StarLattice {
 public:
  StarLattice(int l1, int l2, Boundary boundary) : l1_(l1), l2_(l2), boundary_(boundary) {
    if (l1 < 1 || l2 < 1) throw std::invalid_argument("StarLattice: L1, L2 must be >= 1");
    const int n = 6 * l1 * l2;
    graph_ = SimpleGraph(n);
    nbr_.assign(static_cast<std::size_t>(n), {-1, -1, -1});
    degree_.assign(static_cast<std::size_t>(n), 0);
    color_.resize(static_cast<std::size_t>(n));
    cell_.resize(static_cast<std::size_t>(n));
    std::vector<Point> pos(static_cast<std::size_t>(n));

    const double s3 = std::sqrt(3.0);
    const Point a1{1.0, 0.0}, a2{0.5, s3 / 2.0};
    const Point b_off{(a1[0] + a2[0]) / 3.0, (a1[1] + a2[1]) / 3.0};
    // Unit vectors from an A site along bonds 0, 1, 2.
    const double r = 1.0 / s3;
    const std::array<Point, 3> dir{Point{b_off[0] / r, b_off[1] / r}, Point{-s3 / 2.0, 0.5}, Point{0.0, -1.0}};
    constexpr double kCorner = 0.18;

    for (int i = 0; i < l1; ++i) {
      for (int j = 0; j < l2; ++j) {
        const Point origin{i * a1[0] + j * a2[0], i * a1[1] + j * a2[1]};
        for (int d = 0; d < 3; ++d) {
          const int va = vertex(i, j, d), vb = vertex(i, j, 3 + d);
          pos[static_cast<std::size_t>(va)] = {origin[0] + kCorner * dir[d][0], origin[1] + kCorner * dir[d][1]};
          pos[static_cast<std::size_t>(vb)] = {origin[0] + b_off[0] - kCorner * dir[d][0],
                                               origin[1] + b_off[1] - kCorner * dir[d][1]};
          color_[static_cast<std::size_t>(va)] = static_cast<Label>(d);
          color_[static_cast<std::size_t>(vb)] = static_cast<Label>((d + 1) % 3);
          cell_[static_cast<std::size_t>(va)] = cell_[static_cast<std::size_t>(vb)] = {i, j};
        }
        for (int base : {0, 3}) {
          std::array<int, 3> tri{};
          for (int d = 0; d < 3; ++d) tri[static_cast<std::size_t>(d)] = vertex(i, j, base + d);
          link(tri[0], tri[1]);
          link(tri[1], tri[2]);
          link(tri[0], tri[2]);
          triangles_.push_back(tri);
        }
      }
    }
    for (int i = 0; i < l1; ++i) {
      for (int j = 0; j < l2; ++j) {
        const std::array<std::pair<int, int>, 3> b_cell{{{i, j}, {i - 1, j}, {i, j - 1}}};
        for (int d = 0; d < 3; ++d) {
          auto [bi, bj] = b_cell[static_cast<std::size_t>(d)];
          if (!wrap(bi, bj)) continue;
          link(vertex(i, j, d), vertex(bi, bj, 3 + d));
        }
      }
    }
    graph_.set_positions(std::move(pos));
    if (boundary_ == Boundary::periodic && l1 >= 2 && l2 >= 2) build_dodecagons();
  }

  int l1() const { return l1_; }
  int l2() const { return l2_; }
  Boundary boundary() const { return boundary_; }
  int num_sites() const { return graph_.num_vertices(); }
  const SimpleGraph& graph() const { return graph_; }
  const std::vector<Edge>& edges() const { return graph_.edges(); }
  const std::vector<Point>& positions() const { return graph_.positions(); }

  /// Deformation axis c_j of each site (a proper 3-colouring).
  const std::vector<Label>& coloring() const { return color_; }
  Label color(int v) const { return color_[static_cast<std::size_t>(v)]; }

  int degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
  const std::array<int, 3>& neighbors(int v) const { return nbr_[static_cast<std::size_t>(v)]; }

  /// Unit-cell coordinates (i, j) of a site.
  const std::array<int, 2>& cell(int v) const { return cell_[static_cast<std::size_t>(v)]; }

  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

  /// Each dodecagon as a closed 12-cycle of sites (periodic, L1, L2 >= 2).
  const std::vector<std::array<int, 12>>& dodecagons() const { return dodecagons_; }

  int vertex(int i, int j, int sub) const { return 6 * (i * l2_ + j) + sub; }

 private:
  bool wrap(int& i, int& j) const {
    if (boundary_ == Boundary::open) return i >= 0 && j >= 0 && i < l1_ && j < l2_;
    i = (i % l1_ + l1_) % l1_;
    j = (j % l2_ + l2_) % l2_;
    return true;
  }

  void link(int u, int v) {
    graph_.add_edge(u, v);
    nbr_[static_cast<std::size_t>(u)][static_cast<std::size_t>(degree_[static_cast<std::size_t>(u)]++)] = v;
    nbr_[static_cast<std::size_t>(v)][static_cast<std::size_t>(degree_[static_cast<std::size_t>(v)]++)] = u;
  }

  void build_dodecagons() {
    for (int i = 0; i < l1_; ++i) {
      for (int j = 0; j < l2_; ++j) {
        auto at = [&](int ci, int cj, int sub) {
          wrap(ci, cj);
          return vertex(ci, cj, sub);
        };
        // Around the hexagon A(i,j) B(i-1,j) A(i-1,j) B(i-1,j-1) A(i,j-1) B(i,j-1).
        dodecagons_.push_back({at(i, j, 1), at(i - 1, j, 4), at(i - 1, j, 3), at(i - 1, j, 0),
                               at(i - 1, j, 2), at(i - 1, j - 1, 5), at(i - 1, j - 1, 4), at(i, j - 1, 1),
                               at(i, j - 1, 0), at(i, j - 1, 3), at(i, j - 1, 5), at(i, j, 2)});
      }
    }
  }

  int l1_, l2_;
  Boundary boundary_;
  SimpleGraph graph_;
  std::vector<std::array<int, 3>> nbr_;
  std::vector<int> degree_;
  std::vector<Label> color_;
  std::vector<std::array<int, 2>> cell_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 12>> dodecagons_;
};

inline StarLattice build_star_lattice(int l1, int l2, Boundary boundary) { return StarLattice(l1, l2, boundary); }

/// Lattice for spanning measurements; open boundary with at least two cells per side.
inline StarLattice build_percolation_lattice(int l1, int l2) {
  if (l1 < 2 || l2 < 2) throw std::invalid_argument("percolation lattice needs L1, L2 >= 2");
  return StarLattice(l1, l2, Boundary::open);
}

using Config = std::vector<Label>;

/// (3 - delta^2) / (2 delta^2), the per-site bias toward the deformation axis.
inline double axis_bias(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return (3.0 - delta * delta) / (2.0 * delta * delta);
}

struct DomainDecomposition {
  std::vector<int> domain;                    // domain id per site, ordered by smallest member
  std::vector<std::vector<int>> members;      // sites per domain
  std::vector<std::pair<Edge, int>> bonds;    // (domain pair, lattice-bond multiplicity), sorted
  bool bipartite = true;                      // h(sigma)

  int num_domains() const { return static_cast<int>(members.size()); }
  int inter_domain_edges() const {
    int e = 0;
    for (const auto& b : bonds) e += b.second;
    return e;
  }
  /// L(sigma) = |V| - |E|, E counted with multiplicity.
  int loop_count() const { return num_domains() - inter_domain_edges(); }
};

inline void check_config(const StarLattice& lat, const Config& sigma) {
  if (sigma.size() != static_cast<std::size_t>(lat.num_sites())) {
    throw std::invalid_argument("configuration length does not match the lattice");
  }
  for (Label l : sigma) {
    if (l > 2) throw std::invalid_argument("configuration label outside {x, y, z}");
  }
}

inline DomainDecomposition decompose_domains(const StarLattice& lat, const Config& sigma) {
  check_config(lat, sigma);
  const int n = lat.num_sites();
  DomainDecomposition d;
  d.domain.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> side(static_cast<std::size_t>(n), 0);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    if (d.domain[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = d.num_domains();
    d.members.emplace_back();
    d.domain[static_cast<std::size_t>(s)] = id;
    queue.assign(1, s);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int u = queue[q];
      d.members.back().push_back(u);
      for (int k = 0; k < lat.degree(u); ++k) {
        const int w = lat.neighbors(u)[static_cast<std::size_t>(k)];
        if (sigma[static_cast<std::size_t>(w)] != sigma[static_cast<std::size_t>(u)]) continue;
        if (d.domain[static_cast<std::size_t>(w)] < 0) {
          d.domain[static_cast<std::size_t>(w)] = id;
          side[static_cast<std::size_t>(w)] = 1 - side[static_cast<std::size_t>(u)];
          queue.push_back(w);
        } else if (side[static_cast<std::size_t>(w)] == side[static_cast<std::size_t>(u)]) {
          d.bipartite = false;
        }
      }
    }
  }
  std::vector<Edge> pairs;
  for (const auto& [u, v] : lat.edges()) {
    const int du = d.domain[static_cast<std::size_t>(u)], dv = d.domain[static_cast<std::size_t>(v)];
    if (du != dv) pairs.emplace_back(std::min(du, dv), std::max(du, dv));
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t k = i;
    while (k < pairs.size() && pairs[k] == pairs[i]) ++k;
    d.bonds.emplace_back(pairs[i], static_cast<int>(k - i));
    i = k;
  }
  return d;
}

/// Number of sites whose outcome equals their deformation axis.
inline int axis_matches(const StarLattice& lat, const Config& sigma) {
  int m = 0;
  for (int v = 0; v < lat.num_sites(); ++v) m += sigma[static_cast<std::size_t>(v)] == lat.color(v);
  return m;
}

/// Cached weight components of a configuration.
struct WeightParts {
  bool h = true;
  int loops = 0;    // L(sigma)
  int matches = 0;  // N_m(sigma)
};

inline WeightParts weight_parts(const StarLattice& lat, const Config& sigma) {
  const auto d = decompose_domains(lat, sigma);
  return {d.bipartite, d.loop_count(), axis_matches(lat, sigma)};
}

/// log of h 2^L bias^N_m; -inf when h = 0. `with_loops = false` drops 2^L.
inline double config_log_weight(const StarLattice& lat, const Config& sigma, double delta, bool with_loops = true) {
  const double bias = axis_bias(delta);
  const auto p = weight_parts(lat, sigma);
  if (!p.h) return -INFINITY;
  return (with_loops ? p.loops * std::log(2.0) : 0.0) + p.matches * std::log(bias);
}

/// Unnormalised probability h(sigma) 2^L(sigma) bias(delta)^N_m(sigma).
inline double config_weight(const StarLattice& lat, const Config& sigma, double delta, bool with_loops = true) {
  if (!(delta > 0.0)) throw std::invalid_argument("config_weight: delta must be positive");
  return std::exp(config_log_weight(lat, sigma, delta, with_loops));
}

struct EncodedGraph {
  SimpleGraph graph;  // one vertex per domain, positions are member centroids
  std::vector<std::array<int, 2>> cell_min, cell_max;  // unit-cell extent per domain
};

inline EncodedGraph encoded_graph(const StarLattice& lat, const DomainDecomposition& d) {
  if (!d.bipartite) throw std::invalid_argument("encoded_graph: configuration has zero weight (h = 0)");
  EncodedGraph eg;
  eg.graph = SimpleGraph(d.num_domains());
  std::vector<Point> pos(static_cast<std::size_t>(d.num_domains()));
  eg.cell_min.assign(pos.size(), {1 << 30, 1 << 30});
  eg.cell_max.assign(pos.size(), {-1, -1});
  for (int k = 0; k < d.num_domains(); ++k) {
    Point c{0.0, 0.0};
    const auto& mem = d.members[static_cast<std::size_t>(k)];
    for (int v : mem) {
      const auto& p = lat.positions()[static_cast<std::size_t>(v)];
      c[0] += p[0];
      c[1] += p[1];
      for (int a = 0; a < 2; ++a) {
        eg.cell_min[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] =
            std::min(eg.cell_min[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)], lat.cell(v)[static_cast<std::size_t>(a)]);
        eg.cell_max[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] =
            std::max(eg.cell_max[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)], lat.cell(v)[static_cast<std::size_t>(a)]);
      }
    }
    pos[static_cast<std::size_t>(k)] = {c[0] / static_cast<double>(mem.size()), c[1] / static_cast<double>(mem.size())};
  }
  for (const auto& [pair, mult] : d.bonds) {
    if (mult % 2 == 1) eg.graph.add_edge(pair.first, pair.second);
  }
  eg.graph.set_positions(std::move(pos));
  return eg;
}

/// True iff one connected component of the encoded graph holds domains in
/// both the first and last row of unit cells along `dimension` (1 or 2).
inline bool has_crossing_path(const EncodedGraph& eg, const StarLattice& lat, int dimension) {
  if (dimension != 1 && dimension != 2) throw std::invalid_argument("has_crossing_path: dimension must be 1 or 2");
  const auto a = static_cast<std::size_t>(dimension - 1);
  const int last = (dimension == 1 ? lat.l1() : lat.l2()) - 1;
  std::vector<int> comp;
  const auto sizes = eg.graph.components(&comp);
  std::vector<std::uint8_t> touch(sizes.size(), 0);
  for (std::size_t k = 0; k < comp.size(); ++k) {
    auto& t = touch[static_cast<std::size_t>(comp[k])];
    if (eg.cell_min[k][a] == 0) t |= 1;
    if (eg.cell_max[k][a] == last) t |= 2;
    if (t == 3) return true;
  }
  return false;
}

struct DomainStats {
  int max_size = 0;
  double mean_size = 0.0;
  int count = 0;
};

inline DomainStats domain_stats(const DomainDecomposition& d) {
  DomainStats s;
  s.count = d.num_domains();
  std::size_t total = 0;
  for (const auto& m : d.members) {
    s.max_size = std::max(s.max_size, static_cast<int>(m.size()));
    total += m.size();
  }
  s.mean_size = s.count ? static_cast<double>(total) / s.count : 0.0;
  return s;
}

/// Heuristic probability that all twelve sites around a dodecagon agree at
/// delta = 1: three labels, each (1/3)^12, doubled by the closed loop.
inline double dodecagon_loop_heuristic() { return 2.0 * 3.0 / std::pow(3.0, 12); }

/// True iff the twelve sites of dodecagon k share one outcome.
inline bool dodecagon_matched(const StarLattice& lat, const Config& sigma, int k) {
  const auto& ring = lat.dodecagons().at(static_cast<std::size_t>(k));
  const Label first = sigma[static_cast<std::size_t>(ring[0])];
  return std::all_of(ring.begin(), ring.end(), [&](int v) { return sigma[static_cast<std::size_t>(v)] == first; });
}

}  // namespace ffgs

#endif  // FFGS_STAR_LATTICE_HPP
