// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sfcm/descriptors.hpp"
#include "sfcm/errors.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

// One cell of the 4-D grid: descriptor, radius, theta, phi axes, each in
// [0, 2^bits).
struct GridCoord {
  std::uint32_t d = 0, r = 0, t = 0, p = 0;

  bool operator==(const GridCoord&) const = default;
};

inline constexpr int kDefaultBits = 4;

inline std::uint64_t vector_length(int bits) { return 1ULL << (4 * bits); }

// Length-2^(4*bits) count vector stored sparsely as sorted (index, count)
// pairs; one per structure.
struct SparseVector {
  std::uint64_t length = vector_length(kDefaultBits);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // ascending index

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (const auto& [idx, cnt] : entries) n += cnt;
    return n;
  }

  bool operator==(const SparseVector&) const = default;
};

// Linear binning with half-open bins [lo, hi) and the top bin closed:
// bin = min(floor(value / width), 2^bits - 1). Clamping makes the mapping
// total for descriptor values above range_max.
inline std::uint32_t bin_value(double value, double range, int bits) {
  const auto nbins = static_cast<std::uint32_t>(1u << bits);
  if (!(value > 0.0)) return 0;
  const double width = range / nbins;
  const auto bin = static_cast<std::int64_t>(std::floor(value / width));
  return static_cast<std::uint32_t>(
      std::clamp<std::int64_t>(bin, 0, static_cast<std::int64_t>(nbins) - 1));
}

inline GridCoord discretize(const DescribedAtom& atom,
                            const DescriptorVariant& variant, int bits,
                            double sphere_radius) {
  GridCoord g;
  g.d = bin_value(atom.descriptor, variant.range_max, bits);
  g.r = bin_value(atom.spherical.r, sphere_radius, bits);
  g.t = bin_value(atom.spherical.theta, kPi, bits);
  g.p = bin_value(atom.spherical.phi, 2.0 * kPi, bits);
  return g;
}

// Interleaves the four axis values into a Z-order index. Bit level b of
// the output carries, from least significant: phi (bit 4b), theta
// (4b + 1), r (4b + 2), descriptor (4b + 3) — descriptor most significant
// within each group.
inline std::uint64_t morton_encode(const GridCoord& g, int bits = kDefaultBits) {
  std::uint64_t index = 0;
  for (int b = 0; b < bits; ++b) {
    index |= ((static_cast<std::uint64_t>(g.p) >> b) & 1u) << (4 * b);
    index |= ((static_cast<std::uint64_t>(g.t) >> b) & 1u) << (4 * b + 1);
    index |= ((static_cast<std::uint64_t>(g.r) >> b) & 1u) << (4 * b + 2);
    index |= ((static_cast<std::uint64_t>(g.d) >> b) & 1u) << (4 * b + 3);
  }
  return index;
}

// Exact inverse of morton_encode.
inline GridCoord morton_decode(std::uint64_t index, int bits = kDefaultBits) {
  if (index >= vector_length(bits))
    throw IndexOutOfRange("index " + std::to_string(index) +
                          " exceeds vector length " +
                          std::to_string(vector_length(bits)));
  GridCoord g;
  for (int b = 0; b < bits; ++b) {
    g.p |= static_cast<std::uint32_t>((index >> (4 * b)) & 1u) << b;
    g.t |= static_cast<std::uint32_t>((index >> (4 * b + 1)) & 1u) << b;
    g.r |= static_cast<std::uint32_t>((index >> (4 * b + 2)) & 1u) << b;
    g.d |= static_cast<std::uint32_t>((index >> (4 * b + 3)) & 1u) << b;
  }
  return g;
}

// Accumulates bin counts over the Morton curve: every atom increments the
// index of its grid cell. Output is sorted and independent of atom order.
inline SparseVector encode_structure(const std::vector<DescribedAtom>& atoms,
                                     const DescriptorVariant& variant,
                                     int bits = kDefaultBits,
                                     double sphere_radius = 60.0) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const auto& atom : atoms) {
    const auto index = static_cast<std::uint32_t>(
        morton_encode(discretize(atom, variant, bits, sphere_radius), bits));
    ++counts[index];
  }
  SparseVector out;
  out.length = vector_length(bits);
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

}  // namespace sfcm
