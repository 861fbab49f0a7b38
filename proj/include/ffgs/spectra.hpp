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

#ifndef FFGS_SPECTRA_HPP
#define FFGS_SPECTRA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "ffgs/chain.hpp"
#include "ffgs/numerics.hpp"
#include "ffgs/parallel.hpp"

namespace ffgs {

/// Z2 x Z2 sector labels. Sector b transforms like S_b: even under the
/// pi rotation about b and odd under the other two.
enum class Z2Sector : std::uint8_t { trivial = 0, x = 1, y = 2, z = 3 };

inline constexpr std::array<Z2Sector, 4> kZ2Sectors{Z2Sector::trivial, Z2Sector::x, Z2Sector::y, Z2Sector::z};

inline const char* z2_name(Z2Sector s) {
  static const char* names[] = {"1", "x", "y", "z"};
  return names[static_cast<int>(s)];
}

/// Eigenvalues (r_x, r_z) of the global pi rotations about x and z.
inline std::array<int, 2> z2_characters(Z2Sector s) {
  switch (s) {
    case Z2Sector::trivial: return {1, 1};
    case Z2Sector::x: return {1, -1};
    case Z2Sector::y: return {-1, -1};
    default: return {-1, 1};
  }
}

/// Orbit structure of the spin-1 ring basis under translations by `step`
/// sites and the global pi rotations exp(i pi S_x), exp(i pi S_z).
///
/// Every basis state s stores its orbit representative r and one group
/// element g with U_g |r> = phase |s>.
class SymmetryBasis {
 public:
  struct Element {
    int shift;  // translation count, in units of `step`
    int fx, fz;
  };

  SymmetryBasis(int n, int step) : n_(n), step_(step) {
    if (n < 2 || n > 16) throw std::invalid_argument("SymmetryBasis: N must lie in [2, 16]");
    if (step != 1 && step != 2) throw std::invalid_argument("SymmetryBasis: translation step must be 1 or 2");
    if (n % step != 0) throw std::invalid_argument("SymmetryBasis: N must be a multiple of the step");
    dim_ = 1;
    for (int i = 0; i < n; ++i) dim_ *= 3;
    top_ = dim_ / 3;
    for (int t = 0; t < n / step; ++t)
      for (int fx = 0; fx < 2; ++fx)
        for (int fz = 0; fz < 2; ++fz) elements_.push_back({t, fx, fz});
    rep_of_.assign(dim_, -1);
    elem_of_.assign(dim_, 0);
    phase_of_.assign(dim_, 1);
    for (std::size_t s = 0; s < dim_; ++s) {
      if (rep_of_[s] >= 0) continue;
      const auto id = static_cast<std::int32_t>(reps_.size());
      reps_.push_back(s);
      std::vector<std::pair<std::uint8_t, std::int8_t>> stab;
      std::uint32_t orbit = 0;
      for (std::size_t e = 0; e < elements_.size(); ++e) {
        const auto [t, phase] = apply(elements_[e], s);
        if (t == s) stab.emplace_back(static_cast<std::uint8_t>(e), phase);
        if (rep_of_[t] < 0) {
          rep_of_[t] = id;
          elem_of_[t] = static_cast<std::uint8_t>(e);
          phase_of_[t] = phase;
          ++orbit;
        }
      }
      orbit_size_.push_back(orbit);
      stabilizers_.push_back(std::move(stab));
    }
  }

  int n() const { return n_; }
  int step() const { return step_; }
  std::size_t dim() const { return dim_; }
  int num_momenta() const { return n_ / step_; }
  std::size_t num_orbits() const { return reps_.size(); }
  const std::vector<Element>& elements() const { return elements_; }

  /// (U_g |s>) = phase |t>.
  std::pair<std::size_t, std::int8_t> apply(const Element& g, std::size_t s) const {
    int sign = 1;
    if (g.fz) {
      // exp(i pi S_z) = diag(-1, 1, -1): a sign per site with m != 0.
      std::size_t x = s;
      for (int i = 0; i < n_; ++i, x /= 3) sign = (x % 3 == 1) ? sign : -sign;
    }
    if (g.fx) {
      // exp(i pi S_x) |m> = -|-m>.
      s = dim_ - 1 - s;
      if (n_ % 2) sign = -sign;
    }
    for (int k = 0; k < g.shift * step_; ++k) s = (s % 3) * top_ + s / 3;
    return {s, static_cast<std::int8_t>(sign)};
  }

  /// chi(g) for momentum index k_index and sector.
  cplx character(const Element& g, int k_index, Z2Sector sec) const {
    const auto r = z2_characters(sec);
    const double k = 2.0 * std::numbers::pi * k_index / num_momenta();
    double real = (g.fx ? r[0] : 1) * (g.fz ? r[1] : 1);
    return real * std::exp(cplx(0.0, k * g.shift));
  }

  /// True if the symmetrised state of orbit `o` survives in the sector.
  bool orbit_in_sector(std::size_t o, int k_index, Z2Sector sec) const {
    cplx sum = 0.0;
    for (const auto& [e, phase] : stabilizers_[o]) sum += std::conj(character(elements_[e], k_index, sec)) * double(phase);
    return std::abs(sum) > 0.5;
  }

  std::size_t rep(std::size_t o) const { return reps_[o]; }
  std::int32_t orbit_of(std::size_t s) const { return rep_of_[s]; }
  const Element& element_of(std::size_t s) const { return elements_[elem_of_[s]]; }
  std::int8_t phase_of(std::size_t s) const { return phase_of_[s]; }
  std::uint32_t orbit_size(std::size_t o) const { return orbit_size_[o]; }

 private:
  int n_, step_;
  std::size_t dim_ = 1, top_ = 1;
  std::vector<Element> elements_;
  std::vector<std::int32_t> rep_of_;
  std::vector<std::uint8_t> elem_of_;
  std::vector<std::int8_t> phase_of_;
  std::vector<std::size_t> reps_;
  std::vector<std::uint32_t> orbit_size_;
  std::vector<std::vector<std::pair<std::uint8_t, std::int8_t>>> stabilizers_;
};

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, std::int64_t>;

/// The chain Hamiltonian restricted to one (momentum, Z2) sector, in the
/// orthonormal basis of symmetrised orbit states.
inline SparseMatrix sector_matrix(const ChainHamiltonian& h, const SymmetryBasis& basis, int k_index, Z2Sector sec) {
  if (basis.n() != h.n) throw std::invalid_argument("sector_matrix: basis size does not match the chain");
  const int n = h.n;
  std::vector<std::size_t> pow3(static_cast<std::size_t>(n));
  pow3[static_cast<std::size_t>(n - 1)] = 1;
  for (int i = n - 1; i-- > 0;) pow3[static_cast<std::size_t>(i)] = 3 * pow3[static_cast<std::size_t>(i + 1)];

  std::vector<std::int64_t> index(basis.num_orbits(), -1);
  std::vector<std::size_t> members;
  for (std::size_t o = 0; o < basis.num_orbits(); ++o) {
    if (basis.orbit_in_sector(o, k_index, sec)) {
      index[o] = static_cast<std::int64_t>(members.size());
      members.push_back(o);
    }
  }
  const auto dim = static_cast<std::int64_t>(members.size());
  std::vector<Eigen::Triplet<cplx, std::int64_t>> trip;
  std::unordered_map<std::int64_t, cplx> column;
  for (std::int64_t c = 0; c < dim; ++c) {
    const std::size_t o = members[static_cast<std::size_t>(c)];
    const std::size_t r = basis.rep(o);
    column.clear();
    for (const auto& term : h.terms) {
      const auto& m = term.matrix;
      std::size_t sub = 0, cleared = r;
      for (int site : term.sites) {
        const std::size_t d = (r / pow3[static_cast<std::size_t>(site)]) % 3;
        sub = 3 * sub + d;
        cleared -= d * pow3[static_cast<std::size_t>(site)];
      }
      for (Eigen::Index row = 0; row < m.rows(); ++row) {
        const cplx amp = m(row, static_cast<Eigen::Index>(sub));
        if (std::abs(amp) < 1e-14) continue;
        std::size_t t = cleared, rem = static_cast<std::size_t>(row);
        for (std::size_t k = term.sites.size(); k-- > 0;) {
          t += (rem % 3) * pow3[static_cast<std::size_t>(term.sites[k])];
          rem /= 3;
        }
        const auto o2 = static_cast<std::size_t>(basis.orbit_of(t));
        const std::int64_t row_idx = index[o2];
        if (row_idx < 0) continue;
        const double ratio = std::sqrt(static_cast<double>(basis.orbit_size(o)) / basis.orbit_size(o2));
        column[row_idx] += amp * double(basis.phase_of(t)) * basis.character(basis.element_of(t), k_index, sec) * ratio;
      }
    }
    for (const auto& [row_idx, v] : column) {
      if (std::abs(v) > 1e-14) trip.emplace_back(row_idx, c, v);
    }
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

struct SectorSpectrum {
  int k_index = 0;
  int num_momenta = 1;
  int step = 2;
  Z2Sector sector = Z2Sector::trivial;
  std::size_t dim = 0;
  std::vector<double> values;

  double momentum() const { return 2.0 * std::numbers::pi * k_index / num_momenta; }
};

struct SpectrumOptions {
  int levels = 3;             // per sector; <= 0 returns every level (dense path only)
  int step = 2;               // translation step of the symmetry group
  std::size_t dense_max = 1500;
  int threads = 1;
  LanczosOptions lanczos{};
};

inline std::vector<double> sector_levels(const SparseMatrix& a, const SpectrumOptions& opt) {
  const auto dim = static_cast<std::size_t>(a.rows());
  if (dim == 0) return {};
  if (dim <= opt.dense_max || opt.levels <= 0) {
    const Matrix dense = Matrix(a);
    const RealVector w = hermitian_eigenvalues(dense);
    const std::size_t take = opt.levels <= 0 ? dim : std::min<std::size_t>(dim, static_cast<std::size_t>(opt.levels));
    return {w.data(), w.data() + take};
  }
  const SparseOperator op(dim, [&a](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Vector> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv.noalias() = a * xv;
  });
  return lowest_eigenpairs(op, opt.levels, opt.lanczos).values;
}

/// Lowest levels of every (momentum, Z2) sector.
inline std::vector<SectorSpectrum> sector_spectra(const ChainHamiltonian& h, const SpectrumOptions& opt = {}) {
  const SymmetryBasis basis(h.n, opt.step);
  std::vector<SectorSpectrum> out;
  for (int k = 0; k < basis.num_momenta(); ++k) {
    for (auto s : kZ2Sectors) out.push_back({k, basis.num_momenta(), opt.step, s, 0, {}});
  }
  parallel_for(out.size(), opt.threads, [&](std::size_t i) {
    const auto a = sector_matrix(h, basis, out[i].k_index, out[i].sector);
    out[i].dim = static_cast<std::size_t>(a.rows());
    out[i].values = sector_levels(a, opt);
  });
  return out;
}

inline std::vector<double> merged_levels(const std::vector<SectorSpectrum>& spectra) {
  std::vector<double> all;
  for (const auto& s : spectra) all.insert(all.end(), s.values.begin(), s.values.end());
  std::sort(all.begin(), all.end());
  return all;
}

/// E_1 - E_0 from sector spectra; throws if the ground state is degenerate.
inline double spectral_gap(const std::vector<SectorSpectrum>& spectra, double degeneracy_tol = 1e-8) {
  const auto all = merged_levels(spectra);
  if (all.size() < 2) throw std::invalid_argument("gap: need at least two levels");
  const double g = all[1] - all[0];
  if (g < degeneracy_tol) throw std::runtime_error("gap: ground state is degenerate, gap undefined");
  return g;
}

inline double gap(const ChainHamiltonian& h, int threads = 1) {
  SpectrumOptions opt;
  opt.levels = 2;
  opt.threads = threads;
  return spectral_gap(sector_spectra(h, opt));
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct GapFit {
  std::vector<double> deltas, gaps;
  double exponent = 0.0;
};

inline GapFit gap_scaling_fit(const std::vector<double>& deltas, int n, int body = 2, int threads = 1) {
  GapFit fit;
  fit.deltas = deltas;
  for (double d : deltas) {
    if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("gap_scaling_fit: delta must lie in (0, 1]");
    fit.gaps.push_back(gap(build_chain(d, n, body), threads));
  }
  fit.exponent = loglog_slope(fit.deltas, fit.gaps);
  return fit;
}

struct CrackionPoint {
  int k_index = 0;
  double k = 0.0;
  std::array<double, 3> energy{};  // lowest level in the x, y, z sectors
};

/// Lowest x/y/z-sector level per single-site momentum at delta = 1.
inline std::vector<CrackionPoint> crackion_dispersion(int n, int threads = 1) {
  const auto h = build_chain(1.0, n, 2);
  SpectrumOptions opt;
  opt.levels = 1;
  opt.step = 1;
  opt.threads = threads;
  const SymmetryBasis basis(n, 1);
  std::vector<CrackionPoint> out(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(3 * n), threads, [&](std::size_t task) {
    const int k = static_cast<int>(task / 3), b = static_cast<int>(task % 3);
    const auto a = sector_matrix(h, basis, k, kZ2Sectors[static_cast<std::size_t>(b + 1)]);
    const auto v = sector_levels(a, opt);
    auto& p = out[static_cast<std::size_t>(k)];
    p.k_index = k;
    p.k = 2.0 * std::numbers::pi * k / n;
    p.energy[static_cast<std::size_t>(b)] = v.empty() ? INFINITY : v[0];
  });
  return out;
}

/// Single-mode estimate (25 + 15 cos k) / 27.
inline double crackion_formula(double k) { return (25.0 + 15.0 * std::cos(k)) / 27.0; }

}  // namespace ffgs

#endif  // FFGS_SPECTRA_HPP
