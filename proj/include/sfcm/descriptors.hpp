// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sfcm/elements.hpp"
#include "sfcm/errors.hpp"
#include "sfcm/geometry.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

enum class VariantTag { M1, M2, M3 };

inline VariantTag parse_variant_tag(const std::string& s) {
  if (s == "m1" || s == "M1") return VariantTag::M1;
  if (s == "m2" || s == "M2") return VariantTag::M2;
  if (s == "m3" || s == "M3") return VariantTag::M3;
  throw InvalidConfig("unknown variant '" + s + "' (expected m1|m2|m3)");
}

inline const char* variant_name(VariantTag tag) {
  switch (tag) {
    case VariantTag::M1: return "m1";
    case VariantTag::M2: return "m2";
    default: return "m3";
  }
}

// Which quantity fills the descriptor axis, and the upper bound of that
// axis for binning. Values above range_max clamp to the top bin, so
// encoding stays total.
struct DescriptorVariant {
  VariantTag tag = VariantTag::M1;
  double range_max = 16.0;
};

inline DescriptorVariant variant_m1() { return {VariantTag::M1, 16.0}; }
inline DescriptorVariant variant_m2() { return {VariantTag::M2, 16.0}; }
inline DescriptorVariant variant_m3(double range_max) {
  return {VariantTag::M3, range_max};
}

struct DescribedAtom {
  SphericalAtom spherical;
  double descriptor = 0.0;
};

// Atomic number.
inline double descriptor_m1(const std::string& element) {
  return atomic_number(element);
}

inline constexpr double kBondToleranceFactor = 1.2;

// Per-atom coordination numbers. Atoms i, j are bonded iff their distance
// is at most 1.2 * (r_cov(i) + r_cov(j)). Uses a uniform spatial grid so
// large sphere expansions stay O(n).
inline std::vector<int> detect_bonds(const std::vector<CartAtom>& atoms) {
  std::vector<int> coordination(atoms.size(), 0);
  if (atoms.size() < 2) return coordination;

  double max_radius = 0.0;
  for (const auto& a : atoms)
    max_radius = std::max(max_radius, element_info(a.element).covalent_radius);
  const double cutoff = kBondToleranceFactor * 2.0 * max_radius;
  const double cell = std::max(cutoff, 1e-3);

  const auto key = [&](const Vec3& p) {
    const auto gx = static_cast<std::int64_t>(std::floor(p[0] / cell));
    const auto gy = static_cast<std::int64_t>(std::floor(p[1] / cell));
    const auto gz = static_cast<std::int64_t>(std::floor(p[2] / cell));
    return (static_cast<std::uint64_t>(gx) & 0x1fffff) |
           ((static_cast<std::uint64_t>(gy) & 0x1fffff) << 21) |
           ((static_cast<std::uint64_t>(gz) & 0x1fffff) << 42);
  };

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  grid.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    grid[key(atoms[i].pos)].push_back(i);

  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& ai = atoms[i];
    const double ri = element_info(ai.element).covalent_radius;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          const Vec3 probe = {ai.pos[0] + dx * cell, ai.pos[1] + dy * cell,
                              ai.pos[2] + dz * cell};
          const auto it = grid.find(key(probe));
          if (it == grid.end()) continue;
          for (const std::size_t j : it->second) {
            if (j <= i) continue;
            const auto& aj = atoms[j];
            const double limit =
                kBondToleranceFactor *
                (ri + element_info(aj.element).covalent_radius);
            if (norm(ai.pos - aj.pos) <= limit) {
              ++coordination[i];
              ++coordination[j];
            }
          }
        }
  }
  return coordination;
}

// Atomic number plus coordination count.
inline double descriptor_m2(const std::string& element, int coordination) {
  return atomic_number(element) + coordination;
}

// Coulombic charge C_a = sum_{b != a} Z_a Z_b / r_ab over the other sites
// of the unit cell (no periodic images), in e^2/Å.
inline double descriptor_m3(std::size_t alpha, const CrystalStructure& cell) {
  if (cell.sites.empty() || alpha >= cell.sites.size())
    throw std::out_of_range("descriptor_m3: site index out of range");
  std::vector<Vec3> cart;
  cart.reserve(cell.sites.size());
  for (const auto& site : cell.sites)
    cart.push_back(frac_to_cart(cell.lattice, site.frac));

  const double za = atomic_number(cell.sites[alpha].element);
  double sum = 0.0;
  for (std::size_t b = 0; b < cell.sites.size(); ++b) {
    if (b == alpha) continue;
    const double r = norm(cart[alpha] - cart[b]);
    if (r < 1e-6)
      throw CoincidentAtoms("sites " + std::to_string(alpha) + " and " +
                            std::to_string(b) + " are " + std::to_string(r) +
                            " Å apart");
    sum += za * atomic_number(cell.sites[b].element) / r;
  }
  return sum;
}

inline std::vector<double> descriptor_m3_all(const CrystalStructure& cell) {
  std::vector<double> out(cell.sites.size());
  for (std::size_t i = 0; i < cell.sites.size(); ++i)
    out[i] = descriptor_m3(i, cell);
  return out;
}

// Evaluates the descriptor axis for every sphere atom and converts the
// positions to spherical coordinates. M1/M2 are computed per sphere atom
// (M2 coordination from bonds within the sphere); M3 is computed once per
// unit-cell site and inherited by each periodic image.
inline std::vector<DescribedAtom> describe(const std::vector<CartAtom>& atoms,
                                           const CrystalStructure& cell,
                                           const DescriptorVariant& variant) {
  std::vector<DescribedAtom> out;
  out.reserve(atoms.size());
  switch (variant.tag) {
    case VariantTag::M1:
      for (const auto& a : atoms)
        out.push_back({cart_to_spherical(a), descriptor_m1(a.element)});
      break;
    case VariantTag::M2: {
      const auto coordination = detect_bonds(atoms);
      for (std::size_t i = 0; i < atoms.size(); ++i)
        out.push_back({cart_to_spherical(atoms[i]),
                       descriptor_m2(atoms[i].element, coordination[i])});
      break;
    }
    case VariantTag::M3: {
      const auto charges = descriptor_m3_all(cell);
      for (const auto& a : atoms) {
        if (a.site < 0 || static_cast<std::size_t>(a.site) >= charges.size())
          throw std::out_of_range("describe: sphere atom without a cell site");
        out.push_back({cart_to_spherical(a), charges[static_cast<std::size_t>(a.site)]});
      }
      break;
    }
  }
  return out;
}

}  // namespace sfcm
