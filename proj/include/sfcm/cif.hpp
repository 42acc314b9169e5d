// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sfcm/elements.hpp"
#include "sfcm/errors.hpp"
#include "sfcm/structure.hpp"

namespace sfcm {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

// Parses a CIF numeric value, stripping a parenthesized standard
// uncertainty ("1.234(5)" -> 1.234). `where` names the tag or line for
// the error message.
inline double parse_cif_number(const std::string& raw, const std::string& where) {
  std::string s = raw;
  const std::size_t paren = s.find('(');
  if (paren != std::string::npos) {
    const std::size_t close = s.find(')', paren);
    if (close == std::string::npos || close + 1 != s.size())
      throw MalformedNumber("'" + raw + "' at " + where);
    s = s.substr(0, paren);
  }
  if (s.empty()) throw MalformedNumber("'" + raw + "' at " + where);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw MalformedNumber("'" + raw + "' at " + where);
  return v;
}

// "C1" -> "C"; strips any trailing digits from an atom-site label.
inline std::string strip_label_digits(const std::string& label) {
  std::size_t e = label.size();
  while (e > 0 && std::isdigit(static_cast<unsigned char>(label[e - 1]))) --e;
  return label.substr(0, e);
}

}  // namespace detail

// Minimal CIF subset parser. Recognizes the six cell tags and one
// atom_site loop with an element column (_atom_site_type_symbol, or
// _atom_site_label with trailing digits stripped) and fractional x/y/z.
// Symmetry operations are not expanded; the structure is taken as P1.
inline CrystalStructure parse_cif(
    const std::string& text,
    const std::vector<std::string>& allowed_elements = default_allowed_elements()) {
  std::vector<std::string> lines;
  {
    std::istringstream iss(text);
    std::string line;
    while (std::getline(iss, line)) lines.push_back(detail::trim(line));
  }

  CrystalStructure out;
  std::map<std::string, std::string> cell_tags;
  bool found_atom_loop = false;

  const auto is_tag_line = [](const std::string& l) {
    return !l.empty() && l[0] == '_';
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty() || line[0] == '#') continue;

    if (line.rfind("data_", 0) == 0) {
      out.id = line.substr(5);
      continue;
    }

    if (line == "loop_") {
      // collect column headers
      std::vector<std::string> cols;
      std::size_t lj = li + 1;
      for (; lj < lines.size() && is_tag_line(lines[lj]); ++lj)
        cols.push_back(detail::split_ws(lines[lj])[0]);

      const auto col_of = [&](const std::string& name) -> int {
        const auto it = std::find(cols.begin(), cols.end(), name);
        return it == cols.end() ? -1
                                : static_cast<int>(it - cols.begin());
      };
      const int c_sym = col_of("_atom_site_type_symbol");
      const int c_lab = col_of("_atom_site_label");
      const int c_x = col_of("_atom_site_fract_x");
      const int c_y = col_of("_atom_site_fract_y");
      const int c_z = col_of("_atom_site_fract_z");
      const bool atom_loop =
          (c_sym >= 0 || c_lab >= 0) && c_x >= 0 && c_y >= 0 && c_z >= 0;

      // consume data rows up to the next tag / loop / data block
      for (; lj < lines.size(); ++lj) {
        const std::string& row = lines[lj];
        if (row.empty() || row[0] == '#') break;
        if (is_tag_line(row) || row == "loop_" || row.rfind("data_", 0) == 0)
          break;
        if (!atom_loop) continue;
        const auto fields = detail::split_ws(row);
        if (fields.size() < cols.size())
          throw MalformedNumber("atom_site row '" + row +
                                "' has fewer fields than loop columns");
        std::string symbol = c_sym >= 0
                                 ? fields[c_sym]
                                 : detail::strip_label_digits(fields[c_lab]);
        if (std::find(allowed_elements.begin(), allowed_elements.end(),
                      symbol) == allowed_elements.end())
          throw UnknownElement("'" + symbol + "' in atom_site row '" + row + "'");
        AtomSite site;
        site.element = symbol;
        site.frac = {detail::parse_cif_number(fields[c_x], "_atom_site_fract_x"),
                     detail::parse_cif_number(fields[c_y], "_atom_site_fract_y"),
                     detail::parse_cif_number(fields[c_z], "_atom_site_fract_z")};
        out.sites.push_back(std::move(site));
      }
      if (atom_loop) found_atom_loop = true;
      li = lj - 1;
      continue;
    }

    if (is_tag_line(line)) {
      const auto fields = detail::split_ws(line);
      if (fields.size() >= 2) cell_tags[fields[0]] = fields[1];
      continue;
    }
  }

  const auto cell_value = [&](const std::string& tag) {
    const auto it = cell_tags.find(tag);
    if (it == cell_tags.end()) throw MissingCellParameter(tag);
    return detail::parse_cif_number(it->second, tag);
  };
  out.lattice.a = cell_value("_cell_length_a");
  out.lattice.b = cell_value("_cell_length_b");
  out.lattice.c = cell_value("_cell_length_c");
  out.lattice.alpha = cell_value("_cell_angle_alpha");
  out.lattice.beta = cell_value("_cell_angle_beta");
  out.lattice.gamma = cell_value("_cell_angle_gamma");
  out.lattice.validate();

  if (!found_atom_loop)
    throw MissingAtomLoop("no atom_site loop with element and fract_x/y/z columns");
  return out;
}

namespace detail {

// shortest exact decimal representation (round-trips through strtod)
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

}  // namespace detail

// Serializes a structure into the CIF subset understood by parse_cif.
// Numbers round-trip exactly.
inline std::string to_cif(const CrystalStructure& s) {
  std::ostringstream os;
  os << "data_" << s.id << "\n";
  os << "_cell_length_a " << detail::format_double(s.lattice.a) << "\n";
  os << "_cell_length_b " << detail::format_double(s.lattice.b) << "\n";
  os << "_cell_length_c " << detail::format_double(s.lattice.c) << "\n";
  os << "_cell_angle_alpha " << detail::format_double(s.lattice.alpha) << "\n";
  os << "_cell_angle_beta " << detail::format_double(s.lattice.beta) << "\n";
  os << "_cell_angle_gamma " << detail::format_double(s.lattice.gamma) << "\n";
  os << "loop_\n";
  os << "_atom_site_type_symbol\n";
  os << "_atom_site_fract_x\n";
  os << "_atom_site_fract_y\n";
  os << "_atom_site_fract_z\n";
  for (const auto& site : s.sites) {
    os << site.element << " " << detail::format_double(site.frac[0]) << " "
       << detail::format_double(site.frac[1]) << " "
       << detail::format_double(site.frac[2]) << "\n";
  }
  return os.str();
}

}  // namespace sfcm
