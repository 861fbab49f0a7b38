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

#ifndef FFGS_MPS_HPP
#define FFGS_MPS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ffgs/chain.hpp"
#include "ffgs/numerics.hpp"

namespace ffgs {

/// Periodic MPS with physical dimension 3 and bond dimension 2:
/// psi(m_0..m_{N-1}) = Tr(A_0^{m_0} ... A_{N-1}^{m_{N-1}}), m indexed as in
/// the S_z basis (0 <-> m = +1).
struct MPSState {
  using Tensor = std::array<Eigen::Matrix2cd, 3>;
  std::vector<Tensor> sites;

  int size() const { return static_cast<int>(sites.size()); }

  /// Dense amplitudes, site 0 most significant.
  Vector to_vector() const {
    const int n = size();
    if (n > 14) throw std::invalid_argument("MPSState::to_vector: too many sites");
    std::vector<Eigen::Matrix2cd> prefix{Eigen::Matrix2cd::Identity()};
    for (int j = 0; j < n; ++j) {
      std::vector<Eigen::Matrix2cd> next;
      next.reserve(prefix.size() * 3);
      for (const auto& m : prefix) {
        for (int d = 0; d < 3; ++d) next.push_back(m * sites[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)]);
      }
      prefix = std::move(next);
    }
    Vector psi(static_cast<Eigen::Index>(prefix.size()));
    for (std::size_t i = 0; i < prefix.size(); ++i) psi(static_cast<Eigen::Index>(i)) = prefix[i].trace();
    return psi;
  }
};

/// A^{+1} = sqrt(2/3) sigma+, A^0 = -sqrt(1/3) sigma_z, A^{-1} = -sqrt(2/3) sigma-.
inline MPSState::Tensor aklt_tensor() {
  MPSState::Tensor a;
  a[0] << 0.0, std::sqrt(2.0 / 3.0), 0.0, 0.0;
  a[1] << -std::sqrt(1.0 / 3.0), 0.0, 0.0, std::sqrt(1.0 / 3.0);
  a[2] << 0.0, 0.0, -std::sqrt(2.0 / 3.0), 0.0;
  return a;
}

inline MPSState aklt_mps(int n) {
  if (n < 2) throw std::invalid_argument("aklt_mps: need at least two sites");
  return {std::vector<MPSState::Tensor>(static_cast<std::size_t>(n), aklt_tensor())};
}

/// Applies a one-site operator to the physical index of site j.
inline void apply_physical(MPSState& s, int j, const Matrix& op) {
  const auto old = s.sites.at(static_cast<std::size_t>(j));
  auto& t = s.sites[static_cast<std::size_t>(j)];
  for (int m = 0; m < 3; ++m) {
    t[static_cast<std::size_t>(m)].setZero();
    for (int k = 0; k < 3; ++k) t[static_cast<std::size_t>(m)] += op(m, k) * old[static_cast<std::size_t>(k)];
  }
}

/// [prod_j D_j(delta)^{-1}] |AKLT> on the deformed ring (unnormalised).
inline MPSState deformed_ground_state(double delta, int n) {
  if (n % 2 != 0) throw std::invalid_argument("deformed_ground_state: N must be even");
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("deformed_ground_state: delta must lie in (0, 1]");
  auto s = aklt_mps(n);
  for (int j = 0; j < n; ++j) apply_physical(s, j, DeformationOp(chain_projector(j), delta).d_inv);
  return s;
}

/// [prod_j P_j] |AKLT>, the delta -> 0 limit (unnormalised).
inline MPSState projected_aklt(int n) {
  if (n % 2 != 0) throw std::invalid_argument("projected_aklt: N must be even");
  auto s = aklt_mps(n);
  for (int j = 0; j < n; ++j) apply_physical(s, j, chain_projector(j).matrix);
  return s;
}

/// Encoded ring graph state as a bond-dimension-2 MPS. The bond carries the
/// previous qubit's value: C^s_{a,b} = delta_{b,s} (-1)^{a s} / sqrt(2).
inline MPSState ring_graph_mps(int n) {
  if (n < 3 || n % 2 != 0) throw std::invalid_argument("ring_graph_mps: N must be even and >= 4");
  MPSState s;
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Matrix2cd, 2> c;
  c[0] << r, 0.0, r, 0.0;
  c[1] << 0.0, r, 0.0, -r;
  for (int j = 0; j < n; ++j) {
    const auto& b = chain_projector(j).logical;
    MPSState::Tensor t;
    for (int m = 0; m < 3; ++m) t[static_cast<std::size_t>(m)] = b[0](m) * c[0] + b[1](m) * c[1];
    s.sites.push_back(t);
  }
  return s;
}

/// E = sum_m conj(B^m) (x) A^m for one site.
inline Eigen::Matrix4cd transfer_matrix(const MPSState::Tensor& bra, const MPSState::Tensor& ket) {
  Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
  for (int m = 0; m < 3; ++m) {
    const auto& b = bra[static_cast<std::size_t>(m)];
    const auto& a = ket[static_cast<std::size_t>(m)];
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) e(2 * i + j, 2 * k + l) += std::conj(b(i, k)) * a(j, l);
  }
  return e;
}

/// <bra|ket> for two periodic MPS of equal length.
inline cplx overlap(const MPSState& bra, const MPSState& ket) {
  if (bra.size() != ket.size()) throw std::invalid_argument("overlap: length mismatch");
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Identity();
  for (int j = 0; j < bra.size(); ++j) {
    acc = acc * transfer_matrix(bra.sites[static_cast<std::size_t>(j)], ket.sites[static_cast<std::size_t>(j)]);
  }
  return acc.trace();
}

/// |<G|psi>|^2 / (<G|G><psi|psi>) on a finite ring.
inline double ring_fidelity(const MPSState& g, const MPSState& psi) {
  const double num = std::norm(overlap(g, psi));
  return num / (overlap(g, g).real() * overlap(psi, psi).real());
}

/// 2 / (delta^2 + 2): the per-site fidelity with the graph state.
inline double fidelity_per_site(double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("fidelity_per_site: delta must lie in (0, 1]");
  return 2.0 / (delta * delta + 2.0);
}

/// Per-site error probability 1 - 2 / (delta^2 + 2).
inline double error_per_site(double delta) { return 1.0 - fidelity_per_site(delta); }

namespace detail {

inline cplx leading_eigenvalue(const Eigen::Matrix4cd& e) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(e, false);
  cplx best = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(es.eigenvalues()(i)) > std::abs(best)) best = es.eigenvalues()(i);
  }
  return best;
}

}  // namespace detail

/// Per-site fidelity of the infinite ring from leading eigenvalues of the
/// two-site transfer matrices: (|l_GP|^2 / (l_PP l_GG))^{1/2}.
inline double contracted_fidelity_per_site(double delta) {
  const auto psi = deformed_ground_state(delta, 2);
  const auto g = ring_graph_mps(4);
  auto cell = [](const MPSState& bra, const MPSState& ket) {
    return Eigen::Matrix4cd(transfer_matrix(bra.sites[0], ket.sites[0]) * transfer_matrix(bra.sites[1], ket.sites[1]));
  };
  const cplx gp = detail::leading_eigenvalue(cell(g, psi));
  const cplx pp = detail::leading_eigenvalue(cell(psi, psi));
  const cplx gg = detail::leading_eigenvalue(cell(g, g));
  return std::sqrt(std::norm(gp) / (std::abs(pp) * std::abs(gg)));
}

struct FidelityCheck {
  double delta = 0.0;
  int n = 0;
  double contracted = 0.0;        // |<G|psi_0(delta)>|^2 on the N-site ring
  double formula = 0.0;           // (2 / (delta^2 + 2))^N
  double per_site_contracted = 0.0;  // infinite-ring transfer-matrix value
  double per_site_formula = 0.0;
};

inline FidelityCheck fidelity_check(double delta, int n) {
  FidelityCheck f;
  f.delta = delta;
  f.n = n;
  f.contracted = ring_fidelity(ring_graph_mps(n), deformed_ground_state(delta, n));
  f.per_site_formula = fidelity_per_site(delta);
  f.formula = std::pow(f.per_site_formula, n);
  f.per_site_contracted = contracted_fidelity_per_site(delta);
  return f;
}

}  // namespace ffgs

#endif  // FFGS_MPS_HPP
