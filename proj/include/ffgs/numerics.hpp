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

#ifndef FFGS_NUMERICS_HPP
#define FFGS_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffgs/rng.hpp"

namespace ffgs {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative threshold below which an eigenvalue counts as zero when forming
/// range/kernel projectors.
inline constexpr double kKernelTolerance = 1e-9;

/// Absolute tolerance on max |A - A^dagger| accepted by the Hermitian solvers
/// (scaled by max(1, max |A_ij|)).
inline constexpr double kHermiticityTolerance = 1e-12;

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are orthonormal eigenvectors
};

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& a) {
  return max_abs(a - a.adjoint());
}

inline void require_hermitian(const Matrix& a, std::string_view who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  }
  const double defect = hermiticity_defect(a);
  if (defect > kHermiticityTolerance * std::max(1.0, max_abs(a))) {
    std::ostringstream msg;
    msg << who << ": matrix is not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
}

inline EigenDecomposition hermitian_eig(const Matrix& a) {
  require_hermitian(a, "hermitian_eig");
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: tridiagonal QR did not converge", 0.0);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const Matrix& a) {
  require_hermitian(a, "hermitian_eigenvalues");
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eigenvalues: tridiagonal QR did not converge", 0.0);
  }
  return solver.eigenvalues();
}

/// Q(A): the orthogonal projector onto the range of a positive semidefinite A.
/// Eigenvalues at or below tol * max|lambda| count as zero.
inline Matrix range_projector(const Matrix& a, double tol = kKernelTolerance) {
  const auto eig = hermitian_eig(a);
  const Eigen::Index n = a.rows();
  const double scale = n == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Matrix::Zero(n, n);
  const double cut = tol * scale;
  if (eig.values(0) < -cut) {
    std::ostringstream msg;
    msg << "range_projector: matrix is not positive semidefinite (lambda_min = " << eig.values(0)
        << ")";
    throw std::invalid_argument(msg.str());
  }
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.values(i) > cut) q.noalias() += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return q;
}

/// Orthonormal basis of the kernel of a Hermitian PSD matrix.
inline Matrix kernel_basis(const Matrix& a, double tol = kKernelTolerance) {
  const auto eig = hermitian_eig(a);
  const double scale = a.rows() == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  const double cut = tol * std::max(scale, 1e-300);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (std::abs(eig.values(i)) <= cut) cols.push_back(i);
  }
  Matrix k(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) k.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(cols[c]);
  return k;
}

/// Orthonormal basis for the column span of `columns`; singular values below
/// tol * sigma_max are dropped.
inline Matrix orthonormal_span(const Matrix& columns, double tol = kKernelTolerance) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = tol * (s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline int projector_rank(const Matrix& p, double tol = 1e-6) {
  const auto w = hermitian_eigenvalues(p);
  return static_cast<int>((w.array() > tol).count());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// exp(-i * angle * G) for Hermitian G.
inline Matrix unitary_exp(const Matrix& generator, double angle) {
  const auto eig = hermitian_eig(generator);
  Vector phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(cplx(0.0, -angle * eig.values(i)));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// Applies `op` (d_out x dims[site]) to one tensor factor of `state`. The
/// returned vector lives on `dims` with dims[site] replaced by d_out.
inline Vector apply_site_operator(const Matrix& op, int site, std::span<const int> dims, const Vector& state) {
  if (site < 0 || static_cast<std::size_t>(site) >= dims.size()) {
    throw std::out_of_range("apply_site_operator: site index out of range");
  }
  const auto s = static_cast<std::size_t>(site);
  if (op.cols() != dims[s]) throw std::invalid_argument("apply_site_operator: operator does not match site");
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < s; ++i) left *= dims[i];
  for (std::size_t i = s + 1; i < dims.size(); ++i) right *= dims[i];
  if (state.size() != left * dims[s] * right) throw std::invalid_argument("apply_site_operator: state size mismatch");
  const Eigen::Index din = dims[s], dout = op.rows();
  Vector out = Vector::Zero(left * dout * right);
  for (Eigen::Index l = 0; l < left; ++l) {
    // Columns are the right index, rows the site index.
    Eigen::Map<const Matrix> in_block(state.data() + l * din * right, right, din);
    Eigen::Map<Matrix> out_block(out.data() + l * dout * right, right, dout);
    out_block.noalias() = in_block * op.transpose();
  }
  return out;
}

/// A linear operator given only through its action v -> Hv.
/// The apply function must be re-entrant.
class SparseOperator {
 public:
  using ApplyFn = std::function<void(std::span<const cplx>, std::span<cplx>)>;

  SparseOperator(std::size_t dim, ApplyFn apply) : dim_(dim), apply_(std::move(apply)) {}

  std::size_t dim() const noexcept { return dim_; }

  /// y = H x (y is overwritten).
  void apply(std::span<const cplx> x, std::span<cplx> y) const {
    if (x.size() != dim_ || y.size() != dim_) {
      throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
    }
    apply_(x, y);
  }

  Vector operator()(const Vector& x) const {
    Vector y(static_cast<Eigen::Index>(dim_));
    apply({x.data(), dim_}, {y.data(), dim_});
    return y;
  }

  Matrix to_dense() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Matrix m(n, n);
    Vector e = Vector::Zero(n);
    Vector col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      e(j) = 1.0;
      apply({e.data(), dim_}, {col.data(), dim_});
      m.col(j) = col;
      e(j) = 0.0;
    }
    return m;
  }

 private:
  std::size_t dim_;
  ApplyFn apply_;
};

namespace detail {

/// One local term embedded in a product space with mixed local dimensions.
struct EmbeddedTerm {
  Matrix matrix;
  std::vector<std::size_t> offsets;  // sub-index -> offset in the full index
  std::vector<std::size_t> bases;    // full indices with zero digits on the term sites
};

inline std::vector<std::size_t> strides_for(std::span<const int> local_dims) {
  std::vector<std::size_t> strides(local_dims.size());
  std::size_t s = 1;
  for (std::size_t i = local_dims.size(); i-- > 0;) {
    strides[i] = s;
    s *= static_cast<std::size_t>(local_dims[i]);
  }
  return strides;
}

inline EmbeddedTerm embed(const Matrix& term, std::span<const int> sites, std::span<const int> local_dims) {
  const auto strides = strides_for(local_dims);
  std::size_t sub_dim = 1;
  for (int s : sites) {
    if (s < 0 || static_cast<std::size_t>(s) >= local_dims.size()) {
      throw std::out_of_range("embed_term: site index out of range");
    }
    sub_dim *= static_cast<std::size_t>(local_dims[static_cast<std::size_t>(s)]);
  }
  for (std::size_t a = 0; a < sites.size(); ++a) {
    for (std::size_t b = a + 1; b < sites.size(); ++b) {
      if (sites[a] == sites[b]) throw std::invalid_argument("embed_term: repeated site");
    }
  }
  if (static_cast<std::size_t>(term.rows()) != sub_dim || term.rows() != term.cols()) {
    throw std::invalid_argument("embed_term: term dimension does not match its sites");
  }
  EmbeddedTerm e;
  e.matrix = term;
  e.offsets.resize(sub_dim);
  for (std::size_t c = 0; c < sub_dim; ++c) {
    std::size_t rem = c;
    std::size_t off = 0;
    for (std::size_t k = sites.size(); k-- > 0;) {
      const auto site = static_cast<std::size_t>(sites[k]);
      const auto d = static_cast<std::size_t>(local_dims[site]);
      off += (rem % d) * strides[site];
      rem /= d;
    }
    e.offsets[c] = off;
  }
  e.bases.assign(1, 0);
  for (std::size_t site = 0; site < local_dims.size(); ++site) {
    if (std::find(sites.begin(), sites.end(), static_cast<int>(site)) != sites.end()) continue;
    std::vector<std::size_t> next;
    next.reserve(e.bases.size() * static_cast<std::size_t>(local_dims[site]));
    for (std::size_t b : e.bases) {
      for (int digit = 0; digit < local_dims[site]; ++digit) {
        next.push_back(b + static_cast<std::size_t>(digit) * strides[site]);
      }
    }
    e.bases = std::move(next);
  }
  return e;
}

inline void apply_embedded(const EmbeddedTerm& e, std::span<const cplx> x, std::span<cplx> y) {
  const auto sub = static_cast<Eigen::Index>(e.offsets.size());
  Vector in(sub);
  for (std::size_t b : e.bases) {
    for (Eigen::Index c = 0; c < sub; ++c) in(c) = x[b + e.offsets[static_cast<std::size_t>(c)]];
    for (Eigen::Index r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (Eigen::Index c = 0; c < sub; ++c) acc += e.matrix(r, c) * in(c);
      y[b + e.offsets[static_cast<std::size_t>(r)]] += acc;
    }
  }
}

}  // namespace detail

/// Sum of dense local terms on a product space, applied matrix-free.
/// `sites[i]` lists the sites of term i in the tensor order of `terms[i]`.
inline SparseOperator local_sum_operator(std::vector<Matrix> terms, std::vector<std::vector<int>> sites,
                                         std::vector<int> local_dims) {
  if (terms.size() != sites.size()) throw std::invalid_argument("local_sum_operator: size mismatch");
  std::size_t dim = 1;
  for (int d : local_dims) {
    if (d < 1) throw std::invalid_argument("local_sum_operator: local dimension < 1");
    dim *= static_cast<std::size_t>(d);
  }
  auto embedded = std::make_shared<std::vector<detail::EmbeddedTerm>>();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    embedded->push_back(detail::embed(terms[i], sites[i], local_dims));
  }
  return SparseOperator(dim, [embedded](std::span<const cplx> x, std::span<cplx> y) {
    std::fill(y.begin(), y.end(), cplx(0.0));
    for (const auto& e : *embedded) detail::apply_embedded(e, x, y);
  });
}

/// Places `term` on `sites` of a chain with the given local dimensions, identity elsewhere.
inline SparseOperator embed_term(const Matrix& term, std::vector<int> sites, std::vector<int> local_dims) {
  return local_sum_operator({term}, {std::move(sites)}, std::move(local_dims));
}

struct LanczosOptions {
  double tol = 1e-10;       // residual norm ||H v - theta v|| for convergence
  int max_iter = 20000;     // total operator applications
  int krylov_dim = 0;       // 0: chosen from k
  std::uint64_t seed = 0x5eedULL;
  bool deflation_check = true;  // re-run in the complement to catch missed degenerate copies
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<Vector> vectors;
  int applications = 0;
};

namespace detail {

inline Vector random_unit(Eigen::Index n, SplitMix64& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return v.normalized();
}

inline void orthogonalize(Vector& w, const std::vector<Vector>& basis, Eigen::Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < count; ++i) {
      w -= basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(i)].dot(w);
    }
  }
}

/// Thick-restart (Krylov-Schur) Lanczos with full reorthogonalisation for the
/// `nev` lowest eigenpairs of `op` restricted to the complement of `locked`.
inline EigenPairs krylov_schur(const SparseOperator& op, int nev, const std::vector<Vector>& locked,
                               const LanczosOptions& opt, SplitMix64& rng, int& budget) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  const auto free_dim = n - static_cast<Eigen::Index>(locked.size());
  nev = static_cast<int>(std::min<Eigen::Index>(nev, free_dim));
  EigenPairs out;
  if (nev <= 0) return out;
  Eigen::Index m = opt.krylov_dim > 0 ? opt.krylov_dim : std::max(2 * nev + 20, 40);
  m = std::min(m, free_dim);
  m = std::max<Eigen::Index>(m, nev);

  std::vector<Vector> v(static_cast<std::size_t>(m + 1));
  auto fresh = [&](Eigen::Index upto) {
    Vector w = random_unit(n, rng);
    orthogonalize(w, locked, static_cast<Eigen::Index>(locked.size()));
    orthogonalize(w, v, upto);
    return Vector(w.normalized());
  };
  v[0] = fresh(0);
  Matrix t = Matrix::Zero(m, m);
  Eigen::Index kept = 0;  // columns carried over from the previous restart
  double residual_norm = 0.0;
  Vector hv(n);
  std::vector<cplx> scratch(static_cast<std::size_t>(n));
  double worst = std::numeric_limits<double>::infinity();  // no Ritz estimate yet

  while (true) {
    for (Eigen::Index j = kept; j < m; ++j) {
      if (budget <= 0) {
        std::ostringstream msg;
        msg << "lowest_eigs: no convergence within max_iter (residual " << worst << ")";
        throw ConvergenceError(msg.str(), worst);
      }
      op.apply({v[static_cast<std::size_t>(j)].data(), static_cast<std::size_t>(n)},
               {hv.data(), static_cast<std::size_t>(n)});
      --budget;
      ++out.applications;
      Vector w = hv;
      for (Eigen::Index i = 0; i <= j; ++i) {
        t(i, j) = v[static_cast<std::size_t>(i)].dot(hv);
      }
      // Both passes include the locked vectors: rounding along them would
      // otherwise be amplified by the iteration.
      for (int pass = 0; pass < 2; ++pass) {
        orthogonalize(w, locked, static_cast<Eigen::Index>(locked.size()));
        orthogonalize(w, v, j + 1);
      }
      const double beta = w.norm();
      const double scale = std::max(1.0, hv.norm());
      if (j + 1 < m) {
        if (beta <= 1e-12 * scale) {
          // Invariant subspace: continue with an independent direction.
          v[static_cast<std::size_t>(j + 1)] = fresh(j + 1);
          t(j + 1, j) = 0.0;
        } else {
          v[static_cast<std::size_t>(j + 1)] = w / beta;
          t(j + 1, j) = beta;
        }
      } else {
        residual_norm = beta;
        v[static_cast<std::size_t>(m)] = beta > 1e-300 ? Vector(w / beta) : Vector(Vector::Zero(n));
      }
    }
    // Rayleigh-Ritz on the projected matrix.
    Matrix tsym = t;
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = j + 1; i < m; ++i) tsym(i, j) = std::conj(tsym(j, i));
      tsym(j, j) = tsym(j, j).real();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> small(tsym);
    const RealVector theta = small.eigenvalues();
    const Matrix& s = small.eigenvectors();
    worst = 0.0;
    int converged = 0;
    for (int i = 0; i < nev; ++i) {
      const double r = residual_norm * std::abs(s(m - 1, i));
      worst = std::max(worst, r);
      if (r <= opt.tol) ++converged;
    }
    if (converged == nev || m == free_dim) {
      for (int i = 0; i < nev; ++i) {
        Vector y = Vector::Zero(n);
        for (Eigen::Index c = 0; c < m; ++c) y += v[static_cast<std::size_t>(c)] * s(c, i);
        out.values.push_back(theta(i));
        out.vectors.push_back(y.normalized());
      }
      return out;
    }
    // Thick restart: keep the lowest Ritz vectors plus a buffer.
    const Eigen::Index keep = std::min<Eigen::Index>(m - 1, nev + std::max<Eigen::Index>((m - nev) / 2, 1));
    std::vector<Vector> ritz(static_cast<std::size_t>(keep));
    for (Eigen::Index i = 0; i < keep; ++i) {
      Vector y = Vector::Zero(n);
      for (Eigen::Index c = 0; c < m; ++c) y += v[static_cast<std::size_t>(c)] * s(c, i);
      ritz[static_cast<std::size_t>(i)] = std::move(y);
    }
    Vector next = v[static_cast<std::size_t>(m)];
    for (Eigen::Index i = 0; i < keep; ++i) v[static_cast<std::size_t>(i)] = std::move(ritz[static_cast<std::size_t>(i)]);
    if (residual_norm <= 1e-300) {
      next = fresh(keep);
    }
    v[static_cast<std::size_t>(keep)] = next;
    t.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) {
      t(i, i) = theta(i);
      t(keep, i) = residual_norm * std::conj(s(m - 1, i));
    }
    kept = keep;
  }
}

}  // namespace detail

/// The k lowest eigenpairs of a Hermitian operator.
/// Throws ConvergenceError after opt.max_iter operator applications.
inline EigenPairs lowest_eigenpairs(const SparseOperator& op, int k, const LanczosOptions& opt = {}) {
  if (k <= 0) throw std::invalid_argument("lowest_eigs: k must be positive");
  const auto n = static_cast<int>(op.dim());
  k = std::min(k, n);
  SplitMix64 rng(opt.seed);
  int budget = opt.max_iter;
  EigenPairs result = detail::krylov_schur(op, k, {}, opt, rng, budget);
  if (opt.deflation_check) {
    // A single Krylov sequence sees one copy of each degenerate eigenvalue;
    // search the complement until nothing below the current k-th value remains.
    for (int round = 0; round < k + 1 && static_cast<int>(result.vectors.size()) < n; ++round) {
      auto probe = detail::krylov_schur(op, 1, result.vectors, opt, rng, budget);
      result.applications += probe.applications;
      const double top = *std::max_element(result.values.begin(), result.values.end());
      if (probe.values.empty() || probe.values[0] >= top - 10.0 * opt.tol) break;
      const auto worst_it = std::max_element(result.values.begin(), result.values.end());
      const auto idx = static_cast<std::size_t>(worst_it - result.values.begin());
      result.values.erase(result.values.begin() + static_cast<std::ptrdiff_t>(idx));
      result.vectors.erase(result.vectors.begin() + static_cast<std::ptrdiff_t>(idx));
      result.values.push_back(probe.values[0]);
      result.vectors.push_back(probe.vectors[0]);
    }
  }
  std::vector<std::size_t> order(result.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return result.values[a] < result.values[b]; });
  EigenPairs sorted;
  sorted.applications = result.applications;
  for (auto i : order) {
    sorted.values.push_back(result.values[i]);
    sorted.vectors.push_back(std::move(result.vectors[i]));
  }
  return sorted;
}

inline std::vector<double> lowest_eigs(const SparseOperator& op, int k, double tol = 1e-10, int max_iter = 20000) {
  LanczosOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return lowest_eigenpairs(op, k, opt).values;
}

}  // namespace ffgs

#endif  // FFGS_NUMERICS_HPP
