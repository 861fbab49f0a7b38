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

#ifndef FFGS_GRAPH_HPP
#define FFGS_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ffgs {

using Edge = std::pair<int, int>;
using Point = std::array<double, 2>;

/// Undirected simple graph with optional vertex positions.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int n) : adj_(static_cast<std::size_t>(check_count(n))) {}

  SimpleGraph(int n, const std::vector<Edge>& edges) : SimpleGraph(n) {
    for (const auto& [u, v] : edges) add_edge(u, v);
  }

  int num_vertices() const { return static_cast<int>(adj_.size()); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  bool has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& n = adj_[static_cast<std::size_t>(u)];
    return std::find(n.begin(), n.end(), v) != n.end();
  }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("SimpleGraph: self-loop");
    if (has_edge(u, v)) throw std::invalid_argument("SimpleGraph: parallel edge");
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  bool has_positions() const { return !positions_.empty(); }
  const std::vector<Point>& positions() const { return positions_; }
  void set_positions(std::vector<Point> pos) {
    if (!pos.empty() && pos.size() != adj_.size()) throw std::invalid_argument("SimpleGraph: one position per vertex");
    positions_ = std::move(pos);
  }

  /// Sorted canonical edge set, for comparisons.
  std::set<Edge> edge_set() const { return {edges_.begin(), edges_.end()}; }

  /// Vertex count of each connected component, indexed by component id.
  std::vector<int> components(std::vector<int>* label = nullptr) const {
    std::vector<int> comp(adj_.size(), -1);
    std::vector<int> sizes;
    std::vector<int> stack;
    for (int s = 0; s < num_vertices(); ++s) {
      if (comp[static_cast<std::size_t>(s)] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      sizes.push_back(0);
      comp[static_cast<std::size_t>(s)] = id;
      stack.push_back(s);
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        ++sizes.back();
        for (int w : adj_[static_cast<std::size_t>(u)]) {
          if (comp[static_cast<std::size_t>(w)] < 0) {
            comp[static_cast<std::size_t>(w)] = id;
            stack.push_back(w);
          }
        }
      }
    }
    if (label) *label = std::move(comp);
    return sizes;
  }

 private:
  static int check_count(int n) {
    if (n < 0) throw std::invalid_argument("SimpleGraph: negative vertex count");
    return n;
  }
  void check_vertex(int v) const {
    if (v < 0 || v >= num_vertices()) throw std::out_of_range("SimpleGraph: vertex out of range");
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<Point> positions_;
};

inline SimpleGraph ring_graph(int n) {
  if (n < 3) throw std::invalid_argument("ring_graph: need at least 3 vertices");
  SimpleGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

/// G with vertex v and its edges removed; vertices above v shift down by one.
inline SimpleGraph remove_vertex(const SimpleGraph& g, int v) {
  if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("remove_vertex: vertex out of range");
  auto relabel = [v](int u) { return u > v ? u - 1 : u; };
  SimpleGraph out(g.num_vertices() - 1);
  for (const auto& [a, b] : g.edges()) {
    if (a != v && b != v) out.add_edge(relabel(a), relabel(b));
  }
  if (g.has_positions()) {
    auto pos = g.positions();
    pos.erase(pos.begin() + v);
    out.set_positions(std::move(pos));
  }
  return out;
}

namespace detail {

inline std::string fmt_coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// GraphML with x/y node attributes when positions are present.
inline void write_graphml(std::ostream& os, const SimpleGraph& g, const std::string& id = "G",
                          const std::vector<std::pair<std::string, std::string>>& comments = {}) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& [k, v] : comments) os << "<!-- " << k << ": " << v << " -->\n";
  os << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
        "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
        "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  if (g.has_positions()) {
    os << "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n";
    os << "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
  }
  os << "  <graph id=\"" << id << "\" edgedefault=\"undirected\">\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    os << "    <node id=\"n" << v << "\"";
    if (g.has_positions()) {
      const auto& p = g.positions()[static_cast<std::size_t>(v)];
      os << ">\n      <data key=\"x\">" << detail::fmt_coord(p[0]) << "</data>\n      <data key=\"y\">"
         << detail::fmt_coord(p[1]) << "</data>\n    </node>\n";
    } else {
      os << "/>\n";
    }
  }
  int e = 0;
  for (const auto& [a, b] : g.edges()) {
    os << "    <edge id=\"e" << e++ << "\" source=\"n" << a << "\" target=\"n" << b << "\"/>\n";
  }
  os << "  </graph>\n</graphml>\n";
}

/// Undirected DOT; positions become `pos="x,y!"` for neato.
inline void write_dot(std::ostream& os, const SimpleGraph& g, const std::string& name = "G",
                      const std::vector<std::pair<std::string, std::string>>& comments = {}) {
  for (const auto& [k, v] : comments) os << "// " << k << ": " << v << "\n";
  os << "graph " << name << " {\n  node [shape=point];\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    os << "  " << v;
    if (g.has_positions()) {
      const auto& p = g.positions()[static_cast<std::size_t>(v)];
      os << " [pos=\"" << detail::fmt_coord(p[0]) << "," << detail::fmt_coord(p[1]) << "!\"]";
    }
    os << ";\n";
  }
  for (const auto& [a, b] : g.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
}

}  // namespace ffgs

#endif  // FFGS_GRAPH_HPP
