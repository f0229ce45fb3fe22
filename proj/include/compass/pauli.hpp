/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Pauli strings as (x, z) bit masks. A mask pair denotes the hermitian string
// P(x, z) = i^{|x & z|} X^x Z^z, so x = z = 1 on a qubit reads as Y.

#include "compass/errors.hpp"

#include <bit>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace compass::pauli {

using complex = std::complex<double>;

inline constexpr std::size_t max_qubits = 24;

struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend constexpr auto operator<=>(const PauliKey &, const PauliKey &) = default;
};

/// i^k for k mod 4.
inline complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

/// A phase-tracked Pauli string: i^phase * P(key).
struct PauliString {
  std::size_t n_qubits = 0;
  PauliKey key;
  int phase = 0;

  static PauliString identity(std::size_t n) { return {n, {}, 0}; }

  /// Parses letters written from qubit n-1 (left) down to qubit 0 (right).
  static PauliString from_letters(const std::string &letters) {
    PauliString p;
    p.n_qubits = letters.size();
    if (p.n_qubits > max_qubits)
      throw DomainError("Pauli string exceeds " + std::to_string(max_qubits) + " qubits");
    for (std::size_t k = 0; k < letters.size(); ++k) {
      const std::uint64_t bit = std::uint64_t{1} << (letters.size() - 1 - k);
      switch (letters[k]) {
      case 'I': break;
      case 'X': p.key.x |= bit; break;
      case 'Z': p.key.z |= bit; break;
      case 'Y': p.key.x |= bit; p.key.z |= bit; break;
      default: throw DomainError(std::string("bad Pauli letter '") + letters[k] + "'");
      }
    }
    return p;
  }

  char letter(std::size_t q) const {
    const bool xb = (key.x >> q) & 1U, zb = (key.z >> q) & 1U;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  std::string letters() const {
    std::string s;
    for (std::size_t k = n_qubits; k-- > 0;)
      s += letter(k);
    return s;
  }

  complex phase_factor() const { return i_pow(phase); }

  friend PauliString operator*(const PauliString &a, const PauliString &b) {
    PauliString c;
    c.n_qubits = std::max(a.n_qubits, b.n_qubits);
    c.key = {a.key.x ^ b.key.x, a.key.z ^ b.key.z};
    const int pa = std::popcount(a.key.x & a.key.z);
    const int pb = std::popcount(b.key.x & b.key.z);
    const int pc = std::popcount(c.key.x & c.key.z);
    const int anti = std::popcount(a.key.z & b.key.x);
    c.phase = (((a.phase + b.phase + pa + pb + 2 * anti - pc) % 4) + 4) % 4;
    return c;
  }

  friend bool operator==(const PauliString &, const PauliString &) = default;
};

/// <row| P(key) |col>; zero unless row == col ^ key.x.
inline complex matrix_element(const PauliKey &key, std::uint64_t col) {
  const int sign = std::popcount(key.z & col) & 1 ? 2 : 0;
  return i_pow(std::popcount(key.x & key.z) + sign);
}

/// Weighted sum of phase-free Pauli strings.
class PauliOperator {
public:
  using TermMap = std::map<PauliKey, complex>;

  PauliOperator() = default;
  explicit PauliOperator(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > max_qubits)
      throw DomainError("operator exceeds " + std::to_string(max_qubits) + " qubits");
  }

  static PauliOperator identity(std::size_t n, complex c = 1.0) {
    PauliOperator op(n);
    op.add(PauliKey{}, c);
    return op;
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const TermMap &terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  void add(const PauliKey &key, complex c) { terms_[key] += c; }
  void add(const PauliString &p, complex c) { terms_[p.key] += c * p.phase_factor(); }

  complex coefficient(const PauliKey &key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? complex{} : it->second;
  }
  complex coefficient(const std::string &letters) const {
    auto p = PauliString::from_letters(letters);
    return coefficient(p.key) * p.phase_factor();
  }

  /// Drops terms with |c| below `threshold`.
  PauliOperator &simplify(double threshold = 1e-14) {
    std::erase_if(terms_, [threshold](const auto &kv) { return std::abs(kv.second) < threshold; });
    return *this;
  }

  PauliOperator adjoint() const {
    PauliOperator out(n_qubits_);
    for (const auto &[k, c] : terms_)
      out.terms_[k] = std::conj(c);
    return out;
  }

  /// Hermitian iff every coefficient is real (phase-free strings are hermitian).
  bool is_hermitian(double tol = 1e-12) const {
    for (const auto &[k, c] : terms_)
      if (std::abs(c.imag()) > tol)
        return false;
    return true;
  }

  double one_norm() const {
    double s = 0.0;
    for (const auto &[k, c] : terms_)
      s += std::abs(c);
    return s;
  }

  PauliOperator &operator+=(const PauliOperator &o) {
    n_qubits_ = std::max(n_qubits_, o.n_qubits_);
    for (const auto &[k, c] : o.terms_)
      terms_[k] += c;
    return *this;
  }
  PauliOperator &operator-=(const PauliOperator &o) { return *this += o * complex(-1.0); }
  PauliOperator &operator*=(complex s) {
    for (auto &[k, c] : terms_)
      c *= s;
    return *this;
  }

  friend PauliOperator operator+(PauliOperator a, const PauliOperator &b) { return a += b; }
  friend PauliOperator operator-(PauliOperator a, const PauliOperator &b) { return a -= b; }
  friend PauliOperator operator*(PauliOperator a, complex s) { return a *= s; }
  friend PauliOperator operator*(complex s, PauliOperator a) { return a *= s; }

  friend PauliOperator operator*(const PauliOperator &a, const PauliOperator &b) {
    PauliOperator out(std::max(a.n_qubits_, b.n_qubits_));
    for (const auto &[ka, ca] : a.terms_) {
      const PauliString pa{out.n_qubits_, ka, 0};
      for (const auto &[kb, cb] : b.terms_) {
        const auto prod = pa * PauliString{out.n_qubits_, kb, 0};
        out.terms_[prod.key] += ca * cb * prod.phase_factor();
      }
    }
    return out;
  }

  /// Commutator [a, b] = ab - ba.
  friend PauliOperator commutator(const PauliOperator &a, const PauliOperator &b) {
    auto c = a * b - b * a;
    c.simplify();
    return c;
  }

  /// One line per term: `<re>[+/-<im>j] <letters>`, qubit n-1 leftmost.
  void dump(std::ostream &os) const {
    std::ostringstream line;
    for (const auto &[k, c] : terms_) {
      line.str("");
      line << std::setprecision(17) << c.real();
      if (c.imag() != 0.0)
        line << std::showpos << c.imag() << std::noshowpos << 'j';
      os << line.str() << ' ' << PauliString{n_qubits_, k, 0}.letters() << '\n';
    }
  }

  std::string to_text() const {
    std::ostringstream os;
    dump(os);
    return os.str();
  }

private:
  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

} // namespace compass::pauli
