/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// FCIDUMP ingestion, serialization and frozen-core reduction.
//
// File indices are 1-based; everything in memory is 0-based. Two-electron
// integrals are held in chemists' notation (pq|rs) with all eight symmetric
// images populated.

#include "compass/errors.hpp"
#include "compass/tensor.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace compass::fcidump {

struct MoleculeIntegrals {
  std::size_t n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  Matrix2 h1;
  Tensor4 h2;
  double e_core = 0.0;
  std::string source_label;

  MoleculeIntegrals() = default;
  explicit MoleculeIntegrals(std::size_t n)
      : n_spatial(n), h1(n), h2(n) {}
};

/// Writes `value` into all eight chemists'-notation images of (pq|rs).
inline void set_eri(Tensor4 &eri, std::size_t p, std::size_t q, std::size_t r,
                    std::size_t s, double value) {
  eri(p, q, r, s) = value;
  eri(q, p, r, s) = value;
  eri(p, q, s, r) = value;
  eri(q, p, s, r) = value;
  eri(r, s, p, q) = value;
  eri(s, r, p, q) = value;
  eri(r, s, q, p) = value;
  eri(s, r, q, p) = value;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline bool is_comment(std::string_view line) {
  auto t = trim(line);
  return !t.empty() && (t.front() == '#' || t.front() == '!');
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto &c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<long> to_long(std::string_view s) {
  s = trim(s);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

inline std::optional<double> to_double(std::string token) {
  // Fortran writers may emit 1.0D-03.
  for (auto &c : token)
    if (c == 'D' || c == 'd')
      c = 'E';
  char *end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(v))
    return std::nullopt;
  return v;
}

/// Stores a value while rejecting conflicting duplicates.
class SlotTable {
public:
  explicit SlotTable(std::size_t size)
      : values_(size, std::numeric_limits<double>::quiet_NaN()) {}

  void put(std::size_t slot, double value, std::size_t line) {
    double &cur = values_[slot];
    if (std::isnan(cur)) {
      cur = value;
    } else if (std::abs(cur - value) > 1e-10) {
      throw ParseError(line, "conflicting duplicate integral (" +
                                 std::to_string(cur) + " vs " +
                                 std::to_string(value) + ")");
    }
  }
  double get(std::size_t slot) const {
    return std::isnan(values_[slot]) ? 0.0 : values_[slot];
  }

private:
  std::vector<double> values_;
};

struct Header {
  std::map<std::string, std::vector<std::string>> fields;
  std::map<std::string, std::size_t> line_of; // 1-based line of each key
};

/// Parses the namelist starting at `lines[first]`. Returns the index of the
/// first body line.
inline std::size_t parse_header(const std::vector<std::string> &lines,
                                std::size_t first, Header &header) {
  std::string key;
  bool started = false;
  for (std::size_t ln = first; ln < lines.size(); ++ln) {
    if (is_comment(lines[ln]))
      continue;
    std::string text(lines[ln]);
    for (auto &c : text)
      if (c == ',')
        c = ' ';
    // Split "KEY=VALUE" into separate tokens.
    std::string spaced;
    for (char c : text) {
      if (c == '=') {
        spaced += " = ";
      } else {
        spaced += c;
      }
    }
    std::istringstream in(spaced);
    std::string tok;
    std::string pending_key;
    while (in >> tok) {
      const std::string up = upper(tok);
      if (!started) {
        if (up.rfind("&FCI", 0) != 0)
          throw ParseError(ln + 1, "expected '&FCI' namelist header");
        started = true;
        if (up.size() > 4)
          throw ParseError(ln + 1, "unexpected text after '&FCI'");
        continue;
      }
      if (up == "&END" || up == "/" || up == "$END" || up == "$") {
        if (!pending_key.empty()) {
          if (key.empty())
            throw ParseError(ln + 1, "value before any key: " + pending_key);
          header.fields[key].push_back(pending_key);
        }
        return ln + 1;
      }
      if (tok == "=") {
        if (pending_key.empty())
          throw ParseError(ln + 1, "'=' without a key in header");
        key = pending_key;
        pending_key.clear();
        header.fields[key];
        header.line_of.emplace(key, ln + 1);
        continue;
      }
      if (!pending_key.empty()) {
        // Previous token was a value, not a key.
        if (key.empty())
          throw ParseError(ln + 1, "value before any key: " + pending_key);
        header.fields[key].push_back(pending_key);
      }
      pending_key = up;
    }
    if (!pending_key.empty()) {
      if (key.empty())
        throw ParseError(ln + 1, "value before any key: " + pending_key);
      header.fields[key].push_back(pending_key);
    }
  }
  throw ParseError(lines.size(), started ? "unterminated namelist header"
                                         : "missing '&FCI' header");
}

inline long header_int(const Header &h, const std::string &key,
                       std::size_t line, std::optional<long> fallback) {
  auto it = h.fields.find(key);
  if (it == h.fields.end()) {
    if (fallback)
      return *fallback;
    throw ParseError(line, "header lacks " + key);
  }
  if (auto at = h.line_of.find(key); at != h.line_of.end())
    line = at->second;
  if (it->second.size() != 1)
    throw ParseError(line, "header field " + key + " must be a single integer");
  auto v = to_long(it->second.front());
  if (!v)
    throw ParseError(line, "header field " + key +
                               " is not an integer: " + it->second.front());
  return *v;
}

} // namespace detail

/// Parses FCIDUMP text. Lines whose first non-blank character is '#' or '!'
/// are comments; their text (joined with "; ") becomes `source_label`.
inline MoleculeIntegrals parse_fcidump(std::istream &in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    lines.push_back(std::move(line));

  std::vector<std::string> comments;
  std::size_t first = 0;
  while (first < lines.size() &&
         (detail::is_comment(lines[first]) || detail::trim(lines[first]).empty())) {
    if (detail::is_comment(lines[first])) {
      auto t = detail::trim(lines[first]);
      t.remove_prefix(1);
      comments.emplace_back(detail::trim(t));
    }
    ++first;
  }
  if (first == lines.size())
    throw ParseError(lines.empty() ? 1 : lines.size(), "missing '&FCI' header");

  detail::Header header;
  const std::size_t body = detail::parse_header(lines, first, header);
  const std::size_t header_line = first + 1;
  const long norb = detail::header_int(header, "NORB", header_line, std::nullopt);
  const long nelec = detail::header_int(header, "NELEC", header_line, std::nullopt);
  const long ms2 = detail::header_int(header, "MS2", header_line, 0L);
  if (norb <= 0)
    throw ParseError(header_line, "NORB must be positive");
  if (nelec < 0 || nelec > 2 * norb)
    throw ParseError(header_line, "NELEC out of range [0, 2*NORB]");

  const auto n = static_cast<std::size_t>(norb);
  MoleculeIntegrals out(n);
  out.n_electrons = static_cast<int>(nelec);
  out.ms2 = static_cast<int>(ms2);

  detail::SlotTable h1(n * n), h2(n * n * n * n), core(1);
  auto h2_slot = [n](std::size_t p, std::size_t q, std::size_t r,
                     std::size_t s) { return ((p * n + q) * n + r) * n + s; };

  for (std::size_t ln = body; ln < lines.size(); ++ln) {
    const std::size_t lineno = ln + 1;
    if (detail::is_comment(lines[ln]) || detail::trim(lines[ln]).empty())
      continue;
    std::istringstream fields(lines[ln]);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;)
      tok.push_back(t);
    if (tok.size() != 5)
      throw ParseError(lineno, "expected 'value i j k l', got " +
                                   std::to_string(tok.size()) + " fields");
    auto value = detail::to_double(tok[0]);
    if (!value)
      throw ParseError(lineno, "bad integral value '" + tok[0] + "'");
    std::array<long, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      auto v = detail::to_long(tok[k + 1]);
      if (!v)
        throw ParseError(lineno, "bad index '" + tok[k + 1] + "'");
      if (*v < 0 || *v > norb)
        throw ParseError(lineno, "index " + tok[k + 1] + " outside [0, NORB]");
      idx[k] = *v;
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      core.put(0, *value, lineno);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const auto p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      h1.put(p * n + q, *value, lineno);
      h1.put(q * n + p, *value, lineno);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energy; carries no Hamiltonian information.
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      const auto p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1),
                 r = static_cast<std::size_t>(k - 1), s = static_cast<std::size_t>(l - 1);
      for (auto [a, b, c, d] :
           {std::array{p, q, r, s}, std::array{q, p, r, s}, std::array{p, q, s, r},
            std::array{q, p, s, r}, std::array{r, s, p, q}, std::array{s, r, p, q},
            std::array{r, s, q, p}, std::array{s, r, q, p}})
        h2.put(h2_slot(a, b, c, d), *value, lineno);
    } else {
      throw ParseError(lineno, "unrecognized index pattern");
    }
  }

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      out.h1(p, q) = h1.get(p * n + q);
  for (std::size_t s = 0; s < n * n * n * n; ++s)
    out.h2.data()[s] = h2.get(s);
  out.e_core = core.get(0);

  for (std::size_t c = 0; c < comments.size(); ++c)
    out.source_label += (c ? "; " : "") + comments[c];
  return out;
}

inline MoleculeIntegrals parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

inline MoleculeIntegrals read_fcidump(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DomainError("cannot open FCIDUMP file: " + path);
  return parse_fcidump(in);
}

/// Writes the unique symmetry images at full double precision.
inline void write_fcidump(std::ostream &os, const MoleculeIntegrals &m) {
  const std::size_t n = m.n_spatial;
  if (!m.source_label.empty())
    os << "# " << m.source_label << '\n';
  os << " &FCI NORB=" << n << ",NELEC=" << m.n_electrons << ",MS2=" << m.ms2
     << ",\n  ORBSYM=";
  for (std::size_t i = 0; i < n; ++i)
    os << "1,";
  os << "\n  ISYM=1,\n &END\n";
  char buf[96];
  auto line = [&](double v, std::size_t i, std::size_t j, std::size_t k,
                  std::size_t l) {
    std::snprintf(buf, sizeof buf, "% .17e %4zu %4zu %4zu %4zu\n", v, i, j, k, l);
    os << buf;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l)
            continue;
          const double v = m.h2(i, j, k, l);
          if (v != 0.0)
            line(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (m.h1(i, j) != 0.0)
        line(m.h1(i, j), i + 1, j + 1, 0, 0);
  line(m.e_core, 0, 0, 0, 0);
}

inline std::string to_fcidump_string(const MoleculeIntegrals &m) {
  std::ostringstream os;
  write_fcidump(os, m);
  return os.str();
}

/// Restricted closed-shell determinant energy with the listed spatial
/// orbitals doubly occupied.
inline double determinant_energy(const MoleculeIntegrals &m,
                                 const std::vector<std::size_t> &doubly_occupied) {
  double e = m.e_core;
  for (auto i : doubly_occupied) {
    e += 2.0 * m.h1(i, i);
    for (auto j : doubly_occupied)
      e += 2.0 * m.h2(i, i, j, j) - m.h2(i, j, j, i);
  }
  return e;
}

/// Folds the listed doubly occupied spatial orbitals into e_core and the
/// one-electron integrals, returning integrals over the remaining orbitals.
inline MoleculeIntegrals apply_frozen_core(const MoleculeIntegrals &raw,
                                           const std::vector<std::size_t> &frozen) {
  if (frozen.empty())
    return raw;
  std::set<std::size_t> frozen_set(frozen.begin(), frozen.end());
  if (frozen_set.size() != frozen.size())
    throw DomainError("frozen orbital indices must be distinct");
  for (auto f : frozen)
    if (f >= raw.n_spatial)
      throw DomainError("frozen orbital " + std::to_string(f) + " out of range");
  const int remaining = raw.n_electrons - 2 * static_cast<int>(frozen.size());
  if (remaining < 0)
    throw DomainError("freezing leaves a negative electron count");

  std::vector<std::size_t> active;
  for (std::size_t p = 0; p < raw.n_spatial; ++p)
    if (!frozen_set.count(p))
      active.push_back(p);

  MoleculeIntegrals out(active.size());
  out.n_electrons = remaining;
  out.ms2 = raw.ms2;
  out.source_label = raw.source_label;

  out.e_core = raw.e_core;
  for (auto f : frozen) {
    out.e_core += 2.0 * raw.h1(f, f);
    for (auto g : frozen)
      out.e_core += 2.0 * raw.h2(f, f, g, g) - raw.h2(f, g, g, f);
  }
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t b = 0; b < active.size(); ++b) {
      const auto p = active[a], q = active[b];
      double v = raw.h1(p, q);
      for (auto f : frozen)
        v += 2.0 * raw.h2(p, q, f, f) - raw.h2(p, f, f, q);
      out.h1(a, b) = v;
    }
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t b = 0; b < active.size(); ++b)
      for (std::size_t c = 0; c < active.size(); ++c)
        for (std::size_t d = 0; d < active.size(); ++d)
          out.h2(a, b, c, d) = raw.h2(active[a], active[b], active[c], active[d]);
  return out;
}

/// Largest violation of the h1/h2 permutational symmetries.
inline double symmetry_violation(const MoleculeIntegrals &m) {
  const std::size_t n = m.n_spatial;
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      worst = std::max(worst, std::abs(m.h1(p, q) - m.h1(q, p)));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = m.h2(p, q, r, s);
          for (double w : {m.h2(q, p, r, s), m.h2(p, q, s, r), m.h2(q, p, s, r),
                           m.h2(r, s, p, q), m.h2(s, r, p, q), m.h2(r, s, q, p),
                           m.h2(s, r, q, p)})
            worst = std::max(worst, std::abs(v - w));
        }
    }
  return worst;
}

} // namespace compass::fcidump
