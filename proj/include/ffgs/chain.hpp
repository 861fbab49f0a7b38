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

#ifndef FFGS_CHAIN_HPP
#define FFGS_CHAIN_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffgs/deform.hpp"
#include "ffgs/graph_state.hpp"
#include "ffgs/numerics.hpp"
#include "ffgs/spin.hpp"

namespace ffgs {

// Spin-1 ring with sites 0..N-1. Even sites are deformed toward S_x^2 and
// odd sites toward S_z^2; the logical basis of a site is (|+1>_b, |-1>_b).

inline const SpinSite& spin_one() {
  static const SpinSite site = spin_operators(kSpinOne);
  return site;
}

inline Axis chain_axis(int site) { return site % 2 == 0 ? Axis::x : Axis::z; }

inline const RankTwoProjector& chain_projector(int site) {
  static const std::array<RankTwoProjector, 2> p{extremal_projector(spin_one(), Axis::x),
                                                 extremal_projector(spin_one(), Axis::z)};
  return p[static_cast<std::size_t>(site % 2)];
}

/// P^{J=2} on two spin-1 sites.
inline const Matrix& aklt_bond_projector() {
  static const Matrix p = total_spin_projector(kSpinOne, kSpinOne, Spin{4});
  return p;
}

/// P^{J=2}_{01} + P^{J=2}_{12} on three sites; its range projector is the
/// undeformed three-body term.
inline Matrix aklt_three_site_sum() {
  const Matrix id = Matrix::Identity(3, 3);
  return kron(aklt_bond_projector(), id) + kron(id, aklt_bond_projector());
}

/// Encoded ring graph state on spin-1 sites.
inline Vector chain_graph_state(int n) {
  std::vector<LogicalBasis> bases;
  for (int j = 0; j < n; ++j) bases.push_back(chain_projector(j).logical);
  return encoded_graph_state(ring_graph(n), bases);
}

namespace detail {

inline std::vector<RankTwoProjector> window_projectors(int first, int len) {
  std::vector<RankTwoProjector> p;
  for (int k = 0; k < len; ++k) p.push_back(chain_projector(first + k));
  return p;
}

}  // namespace detail

/// Deformed term on sites (first, ..., first + body - 1). `delta` empty selects
/// the delta -> 0 limit.
inline Matrix chain_term(int first, int body, std::optional<double> delta) {
  if (body != 2 && body != 3) throw std::invalid_argument("chain_term: body must be 2 or 3");
  const auto p = detail::window_projectors(first, body);
  std::vector<int> sites(static_cast<std::size_t>(body));
  for (int k = 0; k < body; ++k) sites[static_cast<std::size_t>(k)] = k;
  const LocalTerm h{sites, body == 2 ? aklt_bond_projector() : aklt_three_site_sum()};
  if (!delta) {
    if (body == 2) {
      // Closed form: I - P (x) P.
      return Matrix::Identity(9, 9) - kron(p[0].matrix, p[1].matrix);
    }
    return limit_term(h, p).matrix;
  }
  return deform_term(h, p, *delta).matrix;
}

struct ChainHamiltonian {
  int n = 0;
  double delta = 0.0;  // 0 means the limit Hamiltonian
  int body = 2;
  std::vector<LocalTerm> terms;
  std::vector<int> local_dims;

  SparseOperator op() const {
    std::vector<Matrix> mats;
    std::vector<std::vector<int>> sites;
    for (const auto& t : terms) {
      mats.push_back(t.matrix);
      sites.push_back(t.sites);
    }
    return local_sum_operator(std::move(mats), std::move(sites), local_dims);
  }

  Matrix dense() const { return op().to_dense(); }
};

namespace detail {

inline ChainHamiltonian assemble_chain(int n, int body, std::optional<double> delta) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("build_chain: N must be even and >= 4");
  if (body != 2 && body != 3) throw std::invalid_argument("build_chain: body must be 2 or 3");
  ChainHamiltonian h;
  h.n = n;
  h.delta = delta.value_or(0.0);
  h.body = body;
  h.local_dims.assign(static_cast<std::size_t>(n), 3);
  // Terms only depend on the parity of their first site.
  const std::array<Matrix, 2> term{chain_term(0, body, delta), chain_term(1, body, delta)};
  for (int j = 0; j < n; ++j) {
    // Bond (j, j+1) for two-body, window (j-1, j, j+1) for three-body.
    const int first = body == 2 ? j : (j - 1 + n) % n;
    std::vector<int> sites;
    for (int k = 0; k < body; ++k) sites.push_back((first + k) % n);
    h.terms.push_back({sites, term[static_cast<std::size_t>(first % 2)]});
  }
  return h;
}

}  // namespace detail

/// Deformed periodic chain, sum of h~(delta) over all bonds (body 2) or
/// three-site windows (body 3).
inline ChainHamiltonian build_chain(double delta, int n, int body) {
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("build_chain: delta must lie in (0, 1] (use build_chain_limit)");
  return detail::assemble_chain(n, body, delta);
}

/// The delta -> 0 limit chain.
inline ChainHamiltonian build_chain_limit(int n, int body) { return detail::assemble_chain(n, body, std::nullopt); }

/// Nonzero spectral extremes of h~_{j-1,j} + h~_{j,j+1} on three sites, and
/// the kernel dimension of that sum.
struct LambdaBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int kernel_dim = 0;
};

inline LambdaBounds lambda_minmax(double delta, int centre_parity = 1) {
  const int first = (centre_parity + 1) % 2;  // parity of site j - 1
  const Matrix id = Matrix::Identity(3, 3);
  const Matrix sum = kron(chain_term(first, 2, delta), id) + kron(id, chain_term(first + 1, 2, delta));
  const RealVector w = hermitian_eigenvalues(sum);
  LambdaBounds b;
  b.lambda_min = INFINITY;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < kKernelTolerance * 2.0) {
      ++b.kernel_dim;
    } else {
      b.lambda_min = std::min(b.lambda_min, w(i));
      b.lambda_max = std::max(b.lambda_max, w(i));
    }
  }
  return b;
}

}  // namespace ffgs

#endif  // FFGS_CHAIN_HPP
