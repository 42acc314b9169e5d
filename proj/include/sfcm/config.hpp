// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sfcm/cif.hpp"
#include "sfcm/descriptors.hpp"
#include "sfcm/errors.hpp"

namespace sfcm {

// Flat `key = value` configuration text. Blank lines and '#' comments are
// ignored; unknown keys are rejected so typos fail loudly. CLI flags
// override file values.
inline std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  static const std::vector<std::string> known = {
      "input_dir",   "targets",    "variant",    "bits",
      "sphere_radius", "k",        "threshold",  "preset",
      "hidden_sizes", "learn_rate", "batch_size", "epochs",
      "folds",       "seed",       "out_dir",    "recall_pct",
      "k_list",      "range_max",  "vectors",    "count",
      "sites_per_cell"};
  std::map<std::string, std::string> out;
  std::istringstream iss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(iss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("line " + std::to_string(line_no) +
                          " is not 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidConfig("unknown key '" + key + "' at line " +
                          std::to_string(line_no));
    out[key] = value;
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream iss(s);
  std::string tok;
  while (std::getline(iss, tok, ',')) {
    tok = detail::trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InvalidConfig("bad integer '" + tok + "' in list");
    }
  }
  return out;
}

}  // namespace sfcm
