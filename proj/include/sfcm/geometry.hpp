// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sfcm/elements.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// An atom in Cartesian Å. `site` tracks which unit-cell site a periodic
// image came from (-1 for free clusters); descriptors that are defined
// per cell site are looked up through it.
struct CartAtom {
  std::string element;
  Vec3 pos{};
  int site = -1;
};

struct SphericalAtom {
  std::string element;
  double r = 0.0;      // Å
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
  int site = -1;
};

// Fractional -> Cartesian using the standard cell matrix (a along x,
// b in the x-y plane).
inline Vec3 frac_to_cart(const Lattice& lattice, const Vec3& frac) {
  const auto m = lattice.cell_matrix();
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    out[i] = m[0][i] * frac[0] + m[1][i] * frac[1] + m[2][i] * frac[2];
  return out;
}

// All periodic images of all sites within `radius` of the cell center
// (boundary inclusive), positions relative to the center. Fractional
// coordinates are wrapped into [0,1) first. The translation search covers
// +-(ceil(radius/h_i)+1) cells where h_i is the perpendicular height of
// the cell along lattice vector i, which covers arbitrarily skewed cells.
inline std::vector<CartAtom> expand_to_sphere(const CrystalStructure& s,
                                              double radius = 60.0) {
  const auto m = s.lattice.cell_matrix();
  const Vec3 va = m[0], vb = m[1], vc = m[2];
  const double volume = std::abs(dot(va, cross(vb, vc)));
  const double ha = volume / norm(cross(vb, vc));
  const double hb = volume / norm(cross(vc, va));
  const double hc = volume / norm(cross(va, vb));
  const int na = static_cast<int>(std::ceil(radius / ha)) + 1;
  const int nb = static_cast<int>(std::ceil(radius / hb)) + 1;
  const int nc = static_cast<int>(std::ceil(radius / hc)) + 1;

  const Vec3 center = frac_to_cart(s.lattice, {0.5, 0.5, 0.5});

  std::vector<CartAtom> out;
  for (std::size_t si = 0; si < s.sites.size(); ++si) {
    Vec3 f = s.sites[si].frac;
    for (auto& x : f) x -= std::floor(x);
    for (int ia = -na; ia <= na; ++ia)
      for (int ib = -nb; ib <= nb; ++ib)
        for (int ic = -nc; ic <= nc; ++ic) {
          const Vec3 pos =
              frac_to_cart(s.lattice, {f[0] + ia, f[1] + ib, f[2] + ic}) -
              center;
          if (norm(pos) <= radius)
            out.push_back({s.sites[si].element, pos, static_cast<int>(si)});
        }
  }
  return out;
}

namespace detail {

// Sign rule for a principal axis: flip so the mass-weighted third moment
// of the projections is non-negative; when that moment vanishes, flip so
// the largest-|projection| atom projects positively (ties broken by
// element symbol, then by position tuple).
inline void fix_axis_sign(Eigen::Vector3d& axis,
                          const std::vector<CartAtom>& atoms) {
  double third = 0.0;
  for (const auto& a : atoms) {
    const double p = axis[0] * a.pos[0] + axis[1] * a.pos[1] + axis[2] * a.pos[2];
    third += element_info(a.element).mass * p * p * p;
  }
  if (std::abs(third) >= 1e-8) {
    if (third < 0.0) axis = -axis;
    return;
  }
  const CartAtom* best = nullptr;
  double best_abs = -1.0;
  for (const auto& a : atoms) {
    const double p = axis[0] * a.pos[0] + axis[1] * a.pos[1] + axis[2] * a.pos[2];
    const double ap = std::abs(p);
    bool take = false;
    if (ap > best_abs + 1e-12) {
      take = true;
    } else if (std::abs(ap - best_abs) <= 1e-12 && best != nullptr) {
      if (a.element < best->element) take = true;
      else if (a.element == best->element && a.pos < best->pos) take = true;
    }
    if (take) {
      best = &a;
      best_abs = ap;
    }
  }
  if (best != nullptr) {
    const double p = axis[0] * best->pos[0] + axis[1] * best->pos[1] +
                     axis[2] * best->pos[2];
    if (p < 0.0) axis = -axis;
  }
}

}  // namespace detail

// Rotates a point set so its principal inertia axes (eigenvalues
// ascending) map to x, y, z. The inertia tensor is taken about the
// sphere center (the origin of the expanded coordinates) with standard
// atomic masses. Degenerate tensors fall back to a deterministic frame;
// a near-zero tensor returns the input unchanged. The applied rotation
// has determinant +1.
inline std::vector<CartAtom> inertia_align(const std::vector<CartAtom>& atoms) {
  Eigen::Matrix3d tensor = Eigen::Matrix3d::Zero();
  for (const auto& a : atoms) {
    const double mass = element_info(a.element).mass;
    const Eigen::Vector3d r(a.pos[0], a.pos[1], a.pos[2]);
    tensor += mass * (r.squaredNorm() * Eigen::Matrix3d::Identity() -
                      r * r.transpose());
  }
  if (tensor.norm() < 1e-12) return atoms;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(tensor);
  Eigen::Vector3d e1 = solver.eigenvectors().col(0);  // eigenvalues ascending
  Eigen::Vector3d e2 = solver.eigenvectors().col(1);
  Eigen::Vector3d e3 = solver.eigenvectors().col(2);
  detail::fix_axis_sign(e1, atoms);
  detail::fix_axis_sign(e2, atoms);
  e3 = e1.cross(e2);  // right-handed frame, det +1

  std::vector<CartAtom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) {
    const Eigen::Vector3d r(a.pos[0], a.pos[1], a.pos[2]);
    out.push_back({a.element, {e1.dot(r), e2.dot(r), e3.dot(r)}, a.site});
  }
  return out;
}

// r = |pos|; theta = arccos(z/r), 0 at the pole and 0 when r = 0;
// phi = atan2(y, x) wrapped into [0, 2*pi), 0 when x = y = 0.
inline SphericalAtom cart_to_spherical(const CartAtom& a) {
  SphericalAtom out;
  out.element = a.element;
  out.site = a.site;
  out.r = norm(a.pos);
  if (out.r > 0.0) {
    out.theta = std::acos(std::clamp(a.pos[2] / out.r, -1.0, 1.0));
    if (a.pos[0] != 0.0 || a.pos[1] != 0.0) {
      out.phi = std::atan2(a.pos[1], a.pos[0]);
      if (out.phi < 0.0) out.phi += 2.0 * kPi;
      if (out.phi >= 2.0 * kPi) out.phi = 0.0;
    }
  }
  return out;
}

inline std::vector<SphericalAtom> cart_to_spherical(
    const std::vector<CartAtom>& atoms) {
  std::vector<SphericalAtom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(cart_to_spherical(a));
  return out;
}

}  // namespace sfcm
