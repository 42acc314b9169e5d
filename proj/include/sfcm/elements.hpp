// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sfcm/errors.hpp"

namespace sfcm {

struct ElementInfo {
  const char* symbol;
  int atomic_number;
  double mass;             // standard atomic mass, u
  double covalent_radius;  // Å
};

// Organic-crystal element set. The allowed set is configurable at the
// parser level; this table is the lookup behind it.
inline const std::vector<ElementInfo>& element_table() {
  static const std::vector<ElementInfo> table = {
      {"H", 1, 1.008, 0.31},
      {"C", 6, 12.011, 0.76},
      {"N", 7, 14.007, 0.71},
      {"O", 8, 15.999, 0.66},
  };
  return table;
}

inline const ElementInfo& element_info(const std::string& symbol) {
  for (const auto& e : element_table()) {
    if (symbol == e.symbol) return e;
  }
  throw UnknownElement("element '" + symbol + "' is not in the allowed set");
}

inline int atomic_number(const std::string& symbol) {
  return element_info(symbol).atomic_number;
}

inline bool is_known_element(const std::string& symbol) {
  for (const auto& e : element_table()) {
    if (symbol == e.symbol) return true;
  }
  return false;
}

inline std::vector<std::string> default_allowed_elements() {
  return {"C", "H", "N", "O"};
}

}  // namespace sfcm
