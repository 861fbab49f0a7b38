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

#ifndef FFGS_GRAPH_STATE_HPP
#define FFGS_GRAPH_STATE_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ffgs/graph.hpp"
#include "ffgs/numerics.hpp"

namespace ffgs {

// Qubit q of an N-qubit basis index i is bit (N - 1 - q): qubit 0 is the
// most significant, matching kron(q0, q1, ...).

inline constexpr int kMaxGraphStateQubits = 24;

namespace detail {

inline std::uint64_t qubit_mask(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

inline void check_qubits(int n) {
  if (n > kMaxGraphStateQubits) throw std::invalid_argument("graph state: too many qubits (max 24)");
}

}  // namespace detail

/// prod_{(u,v) in E} CZ_uv |+>^N.
inline Vector graph_state(const SimpleGraph& g) {
  const int n = g.num_vertices();
  detail::check_qubits(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::uint64_t> masks;
  for (const auto& [u, v] : g.edges()) masks.push_back(detail::qubit_mask(n, u) | detail::qubit_mask(n, v));
  Vector psi(static_cast<Eigen::Index>(dim));
  const double amp = std::pow(2.0, -0.5 * n);
  for (std::uint64_t i = 0; i < dim; ++i) {
    int parity = 0;
    for (auto m : masks) parity ^= ((i & m) == m);
    psi(static_cast<Eigen::Index>(i)) = parity ? -amp : amp;
  }
  return psi;
}

/// X_v prod_{w in n(v)} Z_w applied to `psi`.
inline Vector apply_stabilizer(const SimpleGraph& g, int v, const Vector& psi) {
  const int n = g.num_vertices();
  if (psi.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("apply_stabilizer: state size mismatch");
  const std::uint64_t x = detail::qubit_mask(n, v);
  std::uint64_t z = 0;
  for (int w : g.neighbors(v)) z |= detail::qubit_mask(n, w);
  Vector out(psi.size());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(psi.size()); ++i) {
    // (X Z..)|i> = (-1)^{popcount(i & z)} |i ^ x>
    const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(i ^ x)) = sign * psi(static_cast<Eigen::Index>(i));
  }
  return out;
}

/// max_v ||K_v psi - psi||.
inline double stabilizer_defect(const SimpleGraph& g, const Vector& psi) {
  double worst = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) worst = std::max(worst, (apply_stabilizer(g, v, psi) - psi).norm());
  return worst;
}

/// Reduced density operator of qubits (i, j), basis |q_i q_j> with q_i major.
inline Matrix two_site_rdm(const Vector& psi, int n, int i, int j) {
  if (i == j) throw std::invalid_argument("two_site_rdm: sites must differ");
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("two_site_rdm: qubit out of range");
  if (psi.size() != (Eigen::Index{1} << n)) throw std::invalid_argument("two_site_rdm: state size mismatch");
  const std::uint64_t mi = detail::qubit_mask(n, i), mj = detail::qubit_mask(n, j);
  Matrix rho = Matrix::Zero(4, 4);
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & (mi | mj)) continue;  // r enumerates the environment
    std::array<cplx, 4> a;
    for (int k = 0; k < 4; ++k) {
      const std::uint64_t idx = r | ((k & 2) ? mi : 0) | ((k & 1) ? mj : 0);
      a[static_cast<std::size_t>(k)] = psi(static_cast<Eigen::Index>(idx));
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) rho(p, q) += a[static_cast<std::size_t>(p)] * std::conj(a[static_cast<std::size_t>(q)]);
    }
  }
  return rho;
}

/// Graph update for a Z measurement on v: v and its edges are deleted.
/// Byproduct Z corrections on n(v) are not tracked here.
inline SimpleGraph z_measure_delete(const SimpleGraph& g, int v) { return remove_vertex(g, v); }

/// State-level check of z_measure_delete: projects |G> onto Z_v = (-1)^s,
/// drops qubit v and compares with Z^s_{n(v)} |G \ v>. Returns the largest
/// deviation over both outcomes.
inline double z_measure_defect(const SimpleGraph& g, int v) {
  const int n = g.num_vertices();
  detail::check_qubits(n);
  const Vector psi = graph_state(g);
  const SimpleGraph rest = z_measure_delete(g, v);
  const Vector target = graph_state(rest);
  const std::uint64_t mv = detail::qubit_mask(n, v);
  std::uint64_t znb = 0;
  for (int w : g.neighbors(v)) {
    const int w2 = w > v ? w - 1 : w;
    znb |= detail::qubit_mask(n - 1, w2);
  }
  double worst = 0.0;
  for (int s = 0; s < 2; ++s) {
    Vector reduced(target.size());
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(target.size()); ++r) {
      // Insert bit s at position of qubit v.
      const std::uint64_t low = r & (mv - 1);
      const std::uint64_t high = (r & ~(mv - 1)) << 1;
      reduced(static_cast<Eigen::Index>(r)) = psi(static_cast<Eigen::Index>(high | low | (s ? mv : 0)));
    }
    reduced.normalize();
    Vector expected = target;
    if (s == 1) {
      for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(expected.size()); ++r) {
        if (std::popcount(r & znb) & 1) expected(static_cast<Eigen::Index>(r)) *= -1.0;
      }
    }
    worst = std::max(worst, (reduced - expected).norm());
  }
  return worst;
}

/// Logical basis pair for one site: (|0>_L, |1>_L) in that site's space.
using LogicalBasis = std::array<Vector, 2>;

/// Graph state carried on rank-2 subspaces: each qubit j is mapped into its
/// site by the isometry |0> -> basis[j][0], |1> -> basis[j][1].
inline Vector encoded_graph_state(const SimpleGraph& g, const std::vector<LogicalBasis>& bases) {
  const int n = g.num_vertices();
  if (bases.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("encoded_graph_state: one basis per vertex");
  std::vector<int> dims(static_cast<std::size_t>(n), 2);
  Vector psi = graph_state(g);
  for (int j = 0; j < n; ++j) {
    const auto& b = bases[static_cast<std::size_t>(j)];
    if (b[0].size() != b[1].size() || std::abs(b[0].norm() - 1.0) > 1e-12 || std::abs(b[1].norm() - 1.0) > 1e-12 ||
        std::abs(b[0].dot(b[1])) > 1e-12) {
      throw std::invalid_argument("encoded_graph_state: logical basis is not orthonormal");
    }
    Matrix iso(b[0].size(), 2);
    iso.col(0) = b[0];
    iso.col(1) = b[1];
    psi = apply_site_operator(iso, j, dims, psi);
    dims[static_cast<std::size_t>(j)] = static_cast<int>(b[0].size());
  }
  return psi;
}

}  // namespace ffgs

#endif  // FFGS_GRAPH_STATE_HPP
