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

#ifndef FFGS_SPIN_HPP
#define FFGS_SPIN_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ffgs/numerics.hpp"

namespace ffgs {

/// A spin quantum number stored as twice its value (so 3/2 is Spin{3}).
struct Spin {
  int twice = 0;

  constexpr double value() const { return twice / 2.0; }
  constexpr int dim() const { return twice + 1; }
  constexpr bool operator==(const Spin&) const = default;
};

inline constexpr Spin kSpinHalf{1};
inline constexpr Spin kSpinOne{2};
inline constexpr Spin kSpinThreeHalves{3};

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

inline Axis axis_from_char(char c) {
  switch (c) {
    case 'x': return Axis::x;
    case 'y': return Axis::y;
    case 'z': return Axis::z;
    default: throw std::invalid_argument(std::string("unknown axis '") + c + "'");
  }
}

struct SpinSite {
  Spin spin;
  Matrix sx, sy, sz;

  int dim() const { return spin.dim(); }

  const Matrix& component(Axis a) const {
    switch (a) {
      case Axis::x: return sx;
      case Axis::y: return sy;
      default: return sz;
    }
  }
};

/// Spin matrices in the S_z eigenbasis ordered m = s, s-1, ..., -s.
inline SpinSite spin_operators(Spin s) {
  if (s.twice <= 0) throw std::invalid_argument("spin_operators: spin must be positive");
  const int d = s.dim();
  const double sv = s.value();
  Matrix sz = Matrix::Zero(d, d);
  Matrix splus = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = sv - i;
    sz(i, i) = m;
    if (i > 0) {
      // <m+1| S+ |m>
      splus(i - 1, i) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
    }
  }
  const Matrix sminus = splus.adjoint();
  SpinSite site{s, 0.5 * (splus + sminus), cplx(0.0, -0.5) * (splus - sminus), sz};
  return site;
}

/// Unitary R_b with R_b S_z R_b^dagger = S_b. z->x is exp(-i pi/2 S_y),
/// z->y is exp(+i pi/2 S_x).
inline Matrix rotation_to_axis(const SpinSite& site, Axis b) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  switch (b) {
    case Axis::x: return unitary_exp(site.sy, half_pi);
    case Axis::y: return unitary_exp(site.sx, -half_pi);
    default: return Matrix::Identity(site.dim(), site.dim());
  }
}

/// |m>_b: eigenvector of S_b with eigenvalue m = twice_m / 2.
inline Vector axis_eigenstate(const SpinSite& site, Axis b, int twice_m) {
  const int index = (site.spin.twice - twice_m) / 2;
  if ((site.spin.twice - twice_m) % 2 != 0 || index < 0 || index >= site.dim()) {
    throw std::invalid_argument("axis_eigenstate: m out of range");
  }
  return rotation_to_axis(site, b).col(index);
}

/// exp(i pi S_b): the global pi rotation about axis b on one site.
inline Matrix pi_rotation(const SpinSite& site, Axis b) {
  return unitary_exp(site.component(b), -std::numbers::pi);
}

/// Projector onto total spin J of two spins.
inline Matrix total_spin_projector(Spin s1, Spin s2, Spin total) {
  const int lo = std::abs(s1.twice - s2.twice);
  const int hi = s1.twice + s2.twice;
  if (total.twice < lo || total.twice > hi || (total.twice - lo) % 2 != 0) {
    throw std::invalid_argument("total_spin_projector: J outside the triangle range");
  }
  const auto a = spin_operators(s1);
  const auto b = spin_operators(s2);
  const Matrix ia = Matrix::Identity(a.dim(), a.dim());
  const Matrix ib = Matrix::Identity(b.dim(), b.dim());
  Matrix casimir = Matrix::Zero(a.dim() * b.dim(), a.dim() * b.dim());
  for (Axis ax : kAxes) {
    const Matrix st = kron(a.component(ax), ib) + kron(ia, b.component(ax));
    casimir += st * st;
  }
  const auto eig = hermitian_eig(casimir);
  const double target = total.value() * (total.value() + 1.0);
  Matrix p = Matrix::Zero(casimir.rows(), casimir.cols());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values(i) - target) < 1e-8) p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return p;
}

}  // namespace ffgs

#endif  // FFGS_SPIN_HPP
