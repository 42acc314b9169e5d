// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sfcm/elements.hpp"
#include "sfcm/geometry.hpp"
#include "sfcm/rng.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

// Minimum-image distance between two fractional positions.
inline double min_image_distance(const Lattice& lattice, const Vec3& fa,
                                 const Vec3& fb) {
  double best = std::numeric_limits<double>::infinity();
  for (int ia = -1; ia <= 1; ++ia)
    for (int ib = -1; ib <= 1; ++ib)
      for (int ic = -1; ic <= 1; ++ic) {
        const Vec3 d = frac_to_cart(
            lattice, {fa[0] - fb[0] + ia, fa[1] - fb[1] + ib, fa[2] - fb[2] + ic});
        best = std::min(best, norm(d));
      }
  return best;
}

// Deterministic synthetic dataset. Structures are random orthogonal-ish
// cells with C/H/N/O sites at least 0.8 Å apart (minimum-image); energies
// are analytic functions of composition and geometry, so downstream
// models have a learnable target:
//   single_point = -(sum Z_i + 0.05 * sum_{i<j} Z_i Z_j / r_ij)
//   ewald        = -0.5 * sum_{i<j} Z_i Z_j / r_ij
//   lattice      = -(sum Z_i)^2 / V
//   mbd          = -sum Z_i^(3/2)
inline std::vector<std::pair<CrystalStructure, EnergyRecord>>
generate_synthetic(std::uint64_t seed, int n_structures, int sites_per_cell) {
  if (n_structures < 1)
    throw std::invalid_argument("generate_synthetic: n_structures must be >= 1");
  if (sites_per_cell < 1 || sites_per_cell > 64)
    throw std::invalid_argument(
        "generate_synthetic: sites_per_cell must be in [1, 64]");

  Rng rng(sub_seed(seed, "synth"));
  const std::vector<std::string> elements = {"C", "H", "N", "O"};

  std::vector<std::pair<CrystalStructure, EnergyRecord>> out;
  out.reserve(static_cast<std::size_t>(n_structures));
  for (int si = 0; si < n_structures; ++si) {
    CrystalStructure s;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "synth-%04d", si);
    s.id = idbuf;
    s.lattice.a = rng.uniform(7.5, 11.5);
    s.lattice.b = rng.uniform(7.5, 11.5);
    s.lattice.c = rng.uniform(7.5, 11.5);
    s.lattice.alpha = rng.uniform(80.0, 100.0);
    s.lattice.beta = rng.uniform(80.0, 100.0);
    s.lattice.gamma = rng.uniform(80.0, 100.0);

    for (int a = 0; a < sites_per_cell; ++a) {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 10000)
          throw std::logic_error("generate_synthetic: placement failed");
        const Vec3 f = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        bool ok = true;
        for (const auto& other : s.sites)
          if (min_image_distance(s.lattice, f, other.frac) < 0.8) {
            ok = false;
            break;
          }
        if (ok) {
          AtomSite site;
          site.element = elements[static_cast<std::size_t>(rng.uniform_int(0, 3))];
          site.frac = f;
          s.sites.push_back(std::move(site));
          break;
        }
      }
    }

    double z_sum = 0.0, pair_sum = 0.0, mbd_sum = 0.0;
    for (std::size_t i = 0; i < s.sites.size(); ++i) {
      const double zi = atomic_number(s.sites[i].element);
      z_sum += zi;
      mbd_sum += std::pow(zi, 1.5);
      for (std::size_t j = i + 1; j < s.sites.size(); ++j) {
        const double zj = atomic_number(s.sites[j].element);
        pair_sum += zi * zj /
                    min_image_distance(s.lattice, s.sites[i].frac, s.sites[j].frac);
      }
    }
    EnergyRecord r;
    r.id = s.id;
    r.single_point = -(z_sum + 0.05 * pair_sum);
    r.ewald = -0.5 * pair_sum;
    r.lattice_energy = -(z_sum * z_sum) / s.lattice.volume();
    r.mbd = -mbd_sum;
    out.emplace_back(std::move(s), std::move(r));
  }
  return out;
}

}  // namespace sfcm
