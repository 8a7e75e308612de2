// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "satprec/common.hpp"

namespace satprec {

/// Complex matrix CSV form shared by channel and precoding matrices:
/// a "rows,cols" header line, then one line per row with interleaved
/// "re,im" cell pairs, row-major, full double precision.
inline void write_complex_matrix_csv(const CMat& m, std::ostream& os) {
  os.precision(17);
  os << m.rows() << ',' << m.cols() << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c).real() << ',' << m(r, c).imag();
    }
    os << '\n';
  }
}

inline void write_complex_matrix_csv(const CMat& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw config_error("write_complex_matrix_csv: cannot open " + path);
  write_complex_matrix_csv(m, os);
}

inline CMat read_complex_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw config_error("read_complex_matrix_csv: empty input");
  int rows = 0, cols = 0;
  {
    std::istringstream hdr(line);
    char comma;
    if (!(hdr >> rows >> comma >> cols) || rows < 0 || cols < 0)
      throw config_error("read_complex_matrix_csv: bad header line: " + line);
  }
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(is, line))
      throw config_error("read_complex_matrix_csv: truncated after row " +
                         std::to_string(r));
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      if (!std::getline(ls, cell, ',')) throw config_error("read_complex_matrix_csv: short row");
      re = std::stod(cell);
      if (!std::getline(ls, cell, ',')) throw config_error("read_complex_matrix_csv: short row");
      im = std::stod(cell);
      m(r, c) = cxd(re, im);
    }
  }
  return m;
}

inline CMat read_complex_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("read_complex_matrix_csv: cannot open " + path);
  return read_complex_matrix_csv(is);
}

/// 64-bit FNV-1a over arbitrary bytes; used for channel checksums and the
/// config hash in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_matrix(const CMat& m) {
  return fnv1a64(m.data(), sizeof(cxd) * m.size());
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace satprec
