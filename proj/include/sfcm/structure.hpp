// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sfcm/errors.hpp"

namespace sfcm {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

// Unit-cell parameters: lengths in Å, angles in degrees.
struct Lattice {
  double a = 1.0, b = 1.0, c = 1.0;
  double alpha = 90.0, beta = 90.0, gamma = 90.0;

  void validate() const {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
      throw InvalidLattice("cell lengths must be positive");
    for (double ang : {alpha, beta, gamma})
      if (!(ang > 0.0 && ang < 180.0))
        throw InvalidLattice("cell angles must lie in (0, 180) degrees");
    if (!(cell_volume_factor() > 0.0))
      throw InvalidLattice("cell angles give a degenerate cell matrix");
  }

  // 1 - cos^2(a) - cos^2(b) - cos^2(g) + 2 cos(a) cos(b) cos(g); the squared
  // sine of the parallelepiped solid angle, positive for a valid cell.
  double cell_volume_factor() const {
    const double ca = std::cos(deg_to_rad(alpha));
    const double cb = std::cos(deg_to_rad(beta));
    const double cg = std::cos(deg_to_rad(gamma));
    return 1.0 - ca * ca - cb * cb - cg * cg + 2.0 * ca * cb * cg;
  }

  // Standard crystallographic cell matrix, a along x, b in the x-y plane.
  // Columns are the lattice vectors a, b, c in Cartesian Å.
  std::array<std::array<double, 3>, 3> cell_matrix() const {
    const double ca = std::cos(deg_to_rad(alpha));
    const double cb = std::cos(deg_to_rad(beta));
    const double cg = std::cos(deg_to_rad(gamma));
    const double sg = std::sin(deg_to_rad(gamma));
    const double v = std::sqrt(cell_volume_factor());
    std::array<std::array<double, 3>, 3> m{};  // m[col][component]
    m[0] = {a, 0.0, 0.0};
    m[1] = {b * cg, b * sg, 0.0};
    m[2] = {c * cb, c * (ca - cb * cg) / sg, c * v / sg};
    return m;
  }

  double volume() const { return a * b * c * std::sqrt(cell_volume_factor()); }

  bool operator==(const Lattice&) const = default;
};

struct AtomSite {
  std::string element;
  std::array<double, 3> frac{};  // fractional coordinates, may lie outside [0,1)

  bool operator==(const AtomSite&) const = default;
};

struct CrystalStructure {
  std::string id;
  Lattice lattice;
  std::vector<AtomSite> sites;

  bool operator==(const CrystalStructure&) const = default;
};

// Precomputed energy targets, one row per structure. Column order is the
// canonical multi-task order: single point, Ewald, lattice, MBD.
struct EnergyRecord {
  std::string id;
  double single_point = 0.0;
  double ewald = 0.0;
  double lattice_energy = 0.0;
  double mbd = 0.0;

  std::array<double, 4> values() const {
    return {single_point, ewald, lattice_energy, mbd};
  }

  bool operator==(const EnergyRecord&) const = default;
};

inline constexpr std::array<const char*, 4> kTaskNames = {
    "single_point", "ewald", "lattice", "mbd"};

}  // namespace sfcm
