// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sfcm/cif.hpp"
#include "sfcm/errors.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

inline constexpr const char* kTargetsHeader = "id,single_point,ewald,lattice,mbd";

// Loads the precomputed energy-targets CSV. Header must match
// kTargetsHeader exactly; row order is preserved.
inline std::vector<EnergyRecord> load_targets(const std::string& text) {
  std::istringstream iss(text);
  std::string line;
  if (!std::getline(iss, line))
    throw HeaderMismatch("empty targets file");
  if (detail::trim(line) != kTargetsHeader)
    throw HeaderMismatch("expected '" + std::string(kTargetsHeader) +
                         "', got '" + detail::trim(line) + "'");

  std::vector<EnergyRecord> records;
  std::set<std::string> seen;
  int line_no = 1;
  while (std::getline(iss, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 5)
      throw NonNumericField("line " + std::to_string(line_no) +
                            ": expected 5 fields, got " +
                            std::to_string(fields.size()));
    EnergyRecord r;
    r.id = fields[0];
    if (!seen.insert(r.id).second)
      throw DuplicateId("'" + r.id + "' at line " + std::to_string(line_no));
    const auto num = [&](const std::string& s, const char* col) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw NonNumericField(std::string(col) + " '" + s + "' at line " +
                              std::to_string(line_no));
      return v;
    };
    r.single_point = num(fields[1], "single_point");
    r.ewald = num(fields[2], "ewald");
    r.lattice_energy = num(fields[3], "lattice");
    r.mbd = num(fields[4], "mbd");
    records.push_back(std::move(r));
  }
  return records;
}

// Inverse of load_targets; fields round-trip exactly.
inline std::string write_targets(const std::vector<EnergyRecord>& records) {
  std::ostringstream os;
  os << kTargetsHeader << "\n";
  for (const auto& r : records) {
    os << r.id << "," << detail::format_double(r.single_point) << ","
       << detail::format_double(r.ewald) << ","
       << detail::format_double(r.lattice_energy) << ","
       << detail::format_double(r.mbd) << "\n";
  }
  return os.str();
}

}  // namespace sfcm
