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

#ifndef FFGS_DEFORM_HPP
#define FFGS_DEFORM_HPP

#include <array>
#include <cmath>
#include <sstream>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffgs/numerics.hpp"
#include "ffgs/spin.hpp"

namespace ffgs {

/// Rank-2 projector P = |a><a| + |b><b| together with its logical basis
/// (|0>_L, |1>_L) = (a, b).
struct RankTwoProjector {
  Matrix matrix;
  std::array<Vector, 2> logical;

  int dim() const { return static_cast<int>(matrix.rows()); }

  static RankTwoProjector from_basis(const Vector& zero, const Vector& one) {
    if (zero.size() != one.size()) throw std::invalid_argument("RankTwoProjector: basis size mismatch");
    if (std::abs(zero.norm() - 1.0) > 1e-12 || std::abs(one.norm() - 1.0) > 1e-12 ||
        std::abs(zero.dot(one)) > 1e-12) {
      throw std::invalid_argument("RankTwoProjector: basis is not orthonormal");
    }
    return {zero * zero.adjoint() + one * one.adjoint(), {zero, one}};
  }

  /// Isometry from the logical qubit into the site (columns |0>_L, |1>_L).
  Matrix isometry() const {
    Matrix v(matrix.rows(), 2);
    v.col(0) = logical[0];
    v.col(1) = logical[1];
    return v;
  }

  /// A qubit operator lifted onto the logical subspace (zero outside it).
  Matrix lift(const Matrix& qubit_op) const {
    const Matrix v = isometry();
    return v * qubit_op * v.adjoint();
  }
};

/// |s>_b<s| + |-s>_b<-s| for the extremal S_b eigenstates; for spin 1 this is S_b^2.
inline RankTwoProjector extremal_projector(const SpinSite& site, Axis b) {
  return RankTwoProjector::from_basis(axis_eigenstate(site, b, site.spin.twice),
                                      axis_eigenstate(site, b, -site.spin.twice));
}

/// D(delta) = delta P + (I - P) and its inverse.
struct DeformationOp {
  double delta;
  RankTwoProjector projector;
  Matrix d;
  Matrix d_inv;

  DeformationOp(const RankTwoProjector& p, double delta_) : delta(delta_), projector(p) {
    if (!(delta_ > 0.0)) throw std::invalid_argument("DeformationOp: delta must be positive");
    const Matrix id = Matrix::Identity(p.dim(), p.dim());
    d = delta_ * p.matrix + (id - p.matrix);
    d_inv = p.matrix / delta_ + (id - p.matrix);
  }
};

/// A local operator acting on an ordered list of sites.
struct LocalTerm {
  std::vector<int> sites;
  Matrix matrix;
};

namespace detail {

/// Kernel of Q(D h D) is D^{-1} ker(h). Scaling D^{-1} by delta gives
/// P + delta (I - P), which stays well conditioned down to delta = 0.
inline Matrix deformed_kernel(const Matrix& h, std::span<const RankTwoProjector> projectors, double delta) {
  std::vector<Matrix> factors;
  factors.reserve(projectors.size());
  for (const auto& p : projectors) {
    const Matrix id = Matrix::Identity(p.dim(), p.dim());
    factors.push_back(p.matrix + delta * (id - p.matrix));
  }
  const Matrix kernel = kernel_basis(range_projector(h));
  return kron_all(factors) * kernel;
}

inline void check_support(const LocalTerm& h, std::span<const RankTwoProjector> projectors) {
  if (projectors.size() != h.sites.size()) {
    throw std::invalid_argument("deform_term: one projector per site of the term is required");
  }
  Eigen::Index dim = 1;
  for (const auto& p : projectors) dim *= p.dim();
  if (dim != h.matrix.rows()) throw std::invalid_argument("deform_term: projector dimensions do not match the term");
}

}  // namespace detail

/// Q([prod D_j] h [prod D_j]) for delta > 0. Throws if the rank of the
/// deformed projector differs from rank(h).
inline LocalTerm deform_term(const LocalTerm& h, std::span<const RankTwoProjector> projectors, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("deform_term: delta must be positive (use limit_term for delta = 0)");
  detail::check_support(h, projectors);
  const Matrix mapped = detail::deformed_kernel(h.matrix, projectors, delta);
  const Matrix span = orthonormal_span(mapped);
  if (span.cols() != mapped.cols()) {
    std::ostringstream msg;
    msg << "deform_term: kernel dimension dropped from " << mapped.cols() << " to " << span.cols()
        << " at delta = " << delta;
    throw std::runtime_error(msg.str());
  }
  const auto n = h.matrix.rows();
  return {h.sites, Matrix::Identity(n, n) - span * span.adjoint()};
}

/// The delta -> 0 limit of deform_term.
inline LocalTerm limit_term(const LocalTerm& h, std::span<const RankTwoProjector> projectors) {
  detail::check_support(h, projectors);
  const auto n = h.matrix.rows();
  Matrix mapped = detail::deformed_kernel(h.matrix, projectors, 0.0);
  Matrix span = orthonormal_span(mapped);
  if (span.cols() < mapped.cols()) {
    // The projected kernel lost dimension, so the limit picks up first-order
    // directions. Resolve them at a small delta where all singular values are
    // well above round-off and snap to the nearest projector.
    constexpr double kProbe = 1e-7;
    mapped = detail::deformed_kernel(h.matrix, projectors, kProbe);
    Eigen::JacobiSVD<Matrix> svd(mapped, Eigen::ComputeThinU);
    span = svd.matrixU();
  }
  return {h.sites, Matrix::Identity(n, n) - span * span.adjoint()};
}

/// (3 - delta^2) / (2 delta^2): the relative weight of the outcome that
/// matches a site's deformation axis.
inline double outcome_bias(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("outcome_bias: delta must be positive");
  return (3.0 - delta * delta) / (2.0 * delta * delta);
}

/// F^b = sqrt(2/3)(|3/2>_b<3/2| + |-3/2>_b<-3/2|) on a spin-3/2 site, b = x, y, z.
inline std::array<Matrix, 3> reduction_povm_undeformed() {
  const auto site = spin_operators(kSpinThreeHalves);
  std::array<Matrix, 3> f;
  for (Axis b : kAxes) {
    f[static_cast<std::size_t>(b)] = std::sqrt(2.0 / 3.0) * extremal_projector(site, b).matrix;
  }
  return f;
}

/// F~^b(delta) = bias^{[b = c]/2} F^b D_c(delta) for a site deformed along c.
inline std::array<Matrix, 3> reduction_povm_deformed(Axis c, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("reduction_povm_deformed: delta must lie in (0, 1]");
  const auto site = spin_operators(kSpinThreeHalves);
  const DeformationOp d(extremal_projector(site, c), delta);
  auto f = reduction_povm_undeformed();
  const double boost = std::sqrt(outcome_bias(delta));
  for (Axis b : kAxes) {
    auto& fb = f[static_cast<std::size_t>(b)];
    fb = fb * d.d;
    if (b == c) fb *= boost;
  }
  return f;
}

}  // namespace ffgs

#endif  // FFGS_DEFORM_HPP
