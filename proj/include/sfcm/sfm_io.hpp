// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "sfcm/errors.hpp"
#include "sfcm/morton.hpp"

namespace sfcm {

// Sparse-vector file format, one structure per line:
//   id,bits,idx:count idx:count ...
// with pairs space-separated and indices strictly ascending. The third
// field is empty for a structure with no occupied bins.
struct NamedVector {
  std::string id;
  int bits = kDefaultBits;
  SparseVector vec;
};

inline std::string write_sfm_line(const std::string& id, int bits,
                                  const SparseVector& v) {
  std::ostringstream os;
  os << id << "," << bits << ",";
  bool first = true;
  for (const auto& [idx, cnt] : v.entries) {
    if (!first) os << " ";
    os << idx << ":" << cnt;
    first = false;
  }
  return os.str();
}

inline std::string write_sfm(const std::vector<NamedVector>& vectors) {
  std::ostringstream os;
  for (const auto& nv : vectors)
    os << write_sfm_line(nv.id, nv.bits, nv.vec) << "\n";
  return os.str();
}

inline std::vector<NamedVector> read_sfm(const std::string& text) {
  std::vector<NamedVector> out;
  std::istringstream iss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(iss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = " at line " + std::to_string(line_no);

    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                   : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw MalformedNumber("sfm line needs id,bits,pairs" + where);
    NamedVector nv;
    nv.id = line.substr(0, c1);
    try {
      nv.bits = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
      throw MalformedNumber("bits field" + where);
    }
    if (nv.bits < 1 || nv.bits > 8)
      throw MalformedNumber("bits must be in [1, 8]" + where);
    nv.vec.length = vector_length(nv.bits);

    std::istringstream pairs(line.substr(c2 + 1));
    std::string tok;
    std::int64_t prev = -1;
    while (pairs >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        throw MalformedNumber("pair '" + tok + "'" + where);
      std::uint64_t idx = 0, cnt = 0;
      try {
        idx = std::stoull(tok.substr(0, colon));
        cnt = std::stoull(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw MalformedNumber("pair '" + tok + "'" + where);
      }
      if (idx >= nv.vec.length)
        throw IndexOutOfRange("index " + std::to_string(idx) + where);
      if (static_cast<std::int64_t>(idx) <= prev)
        throw MalformedNumber("indices must be strictly ascending" + where);
      if (cnt == 0) throw MalformedNumber("zero count" + where);
      prev = static_cast<std::int64_t>(idx);
      nv.vec.entries.emplace_back(static_cast<std::uint32_t>(idx),
                                  static_cast<std::uint32_t>(cnt));
    }
    out.push_back(std::move(nv));
  }
  return out;
}

}  // namespace sfcm
