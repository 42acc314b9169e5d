// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <vector>

#include "sfcm/descriptors.hpp"
#include "sfcm/geometry.hpp"
#include "sfcm/morton.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

// Featurization knobs shared by the CLI and the evaluation harness.
// range_max of 0 means "resolve per variant": 16 for M1/M2, and for M3
// the training-set maximum Coulombic charge times 1.05 (computed by
// m3_range_max and persisted with the manifest/model).
struct FeaturizeParams {
  VariantTag variant = VariantTag::M1;
  int bits = kDefaultBits;
  double sphere_radius = 60.0;
  double range_max = 0.0;

  DescriptorVariant descriptor() const {
    DescriptorVariant v{variant, range_max};
    if (v.range_max <= 0.0) {
      if (variant == VariantTag::M3)
        throw InvalidConfig("m3 featurization needs an explicit range_max");
      v.range_max = 16.0;
    }
    return v;
  }
};

// Upper bound for the M3 descriptor axis over a dataset.
inline double m3_range_max(const std::vector<CrystalStructure>& structures) {
  double max_charge = 0.0;
  for (const auto& s : structures)
    for (const double c : descriptor_m3_all(s))
      max_charge = std::max(max_charge, c);
  return max_charge * 1.05;
}

// Full encoding pipeline for one structure: tile the cell into the
// sphere, align to principal inertia axes, attach descriptors, and
// accumulate the Morton count vector.
inline SparseVector featurize_structure(const CrystalStructure& s,
                                        const FeaturizeParams& params) {
  const auto sphere = expand_to_sphere(s, params.sphere_radius);
  const auto aligned = inertia_align(sphere);
  const auto described = describe(aligned, s, params.descriptor());
  return encode_structure(described, params.descriptor(), params.bits,
                          params.sphere_radius);
}

}  // namespace sfcm
