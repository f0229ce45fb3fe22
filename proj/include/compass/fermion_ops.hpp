/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Cluster operators (tau) and scatterers (sigma) as anti-hermitian
// second-quantized generators.
//
// Qubit convention: spins are interleaved, qubit = 2 * spatial + spin with
// alpha = 0 and beta = 1. The closed-shell Hartree-Fock reference occupies the
// n_electrons lowest qubits.

#include "compass/errors.hpp"

#include <algorithm>
#include <compare>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace compass::fermion {

enum class Spin : std::uint8_t { alpha = 0, beta = 1 };

struct SpinOrbital {
  std::size_t spatial = 0;
  Spin spin = Spin::alpha;

  constexpr std::size_t qubit() const noexcept {
    return 2 * spatial + static_cast<std::size_t>(spin);
  }
  static constexpr SpinOrbital from_qubit(std::size_t q) noexcept {
    return {q / 2, (q % 2) ? Spin::beta : Spin::alpha};
  }

  friend constexpr bool operator==(SpinOrbital a, SpinOrbital b) noexcept {
    return a.qubit() == b.qubit();
  }
  friend constexpr auto operator<=>(SpinOrbital a, SpinOrbital b) noexcept {
    return a.qubit() <=> b.qubit();
  }
};

constexpr SpinOrbital alpha(std::size_t spatial) { return {spatial, Spin::alpha}; }
constexpr SpinOrbital beta(std::size_t spatial) { return {spatial, Spin::beta}; }

inline std::vector<std::size_t> qubits_of(const std::vector<SpinOrbital> &orbs) {
  std::vector<std::size_t> q;
  q.reserve(orbs.size());
  for (auto o : orbs)
    q.push_back(o.qubit());
  return q;
}

inline int spin_sum(const std::vector<SpinOrbital> &orbs) {
  int s = 0;
  for (auto o : orbs)
    s += o.spin == Spin::alpha ? 1 : -1;
  return s;
}

/// tau_I: holes -> particles, each list sorted by qubit index.
struct Excitation {
  std::vector<SpinOrbital> holes;
  std::vector<SpinOrbital> particles;

  std::size_t rank() const noexcept { return holes.size(); }

  friend bool operator==(const Excitation &, const Excitation &) = default;
  friend auto operator<=>(const Excitation &a, const Excitation &b) {
    if (auto c = qubits_of(a.holes) <=> qubits_of(b.holes); c != 0)
      return c;
    return qubits_of(a.particles) <=> qubits_of(b.particles);
  }
};

enum class ScattererKind : std::uint8_t { hole = 0, particle = 1 };
enum class Sector : std::uint8_t { OP = 0, PP = 1 };

inline std::string to_string(Sector s) { return s == Sector::OP ? "OP" : "PP"; }
inline std::string to_string(ScattererKind k) {
  return k == ScattererKind::hole ? "hole" : "particle";
}
inline Sector sector_from_string(const std::string &s) {
  if (s == "OP" || s == "op")
    return Sector::OP;
  if (s == "PP" || s == "pp")
    return Sector::PP;
  throw DomainError("unknown scatterer sector '" + s + "' (expected OP or PP)");
}

/// sigma: hole-type a+ m+ j i (m a hole-space CSO orbital) or particle-type
/// a+ b+ e i (e a particle-space CSO orbital). `create`/`destroy` are sorted
/// by qubit index.
struct Scatterer {
  ScattererKind kind = ScattererKind::hole;
  SpinOrbital cso_orbital;
  std::vector<SpinOrbital> create;
  std::vector<SpinOrbital> destroy;
  Sector sector = Sector::OP;

  friend bool operator==(const Scatterer &a, const Scatterer &b) {
    return a.kind == b.kind && a.cso_orbital == b.cso_orbital &&
           a.create == b.create && a.destroy == b.destroy;
  }
  friend auto operator<=>(const Scatterer &a, const Scatterer &b) {
    if (auto c = a.kind <=> b.kind; c != 0)
      return c;
    if (auto c = qubits_of(a.destroy) <=> qubits_of(b.destroy); c != 0)
      return c;
    return qubits_of(a.create) <=> qubits_of(b.create);
  }
};

/// Contractible set of orbitals, as spatial indices: hole-space orbitals (u)
/// and particle-space orbitals (v).
struct CsoSpec {
  std::vector<std::size_t> holes;
  std::vector<std::size_t> particles;
  bool operator==(const CsoSpec &) const = default;
};

/// Frontier default: highest occupied and lowest virtual spatial orbital.
inline CsoSpec default_cso(std::size_t n_spatial, int n_electrons) {
  CsoSpec cso;
  const auto n_occ = static_cast<std::size_t>(n_electrons / 2);
  if (n_occ > 0)
    cso.holes.push_back(n_occ - 1);
  if (n_occ < n_spatial)
    cso.particles.push_back(n_occ);
  return cso;
}

struct LadderOp {
  SpinOrbital orbital;
  bool create = false;
  bool operator==(const LadderOp &) const = default;
};

struct FermionTerm {
  double coefficient = 0.0;
  std::vector<LadderOp> ops; // applied right to left
  bool operator==(const FermionTerm &) const = default;
};

/// G = T - T^dagger with unit coefficients, in canonical normal order.
struct FermionGenerator {
  std::vector<FermionTerm> terms;
  std::variant<Excitation, Scatterer> source;
};

namespace detail {

inline void require_closed_shell(std::size_t n_spatial, int n_electrons) {
  if (n_electrons < 0 || static_cast<std::size_t>(n_electrons) > 2 * n_spatial)
    throw DomainError("electron count outside [0, 2*n_spatial]");
  if (n_electrons % 2 != 0)
    throw DomainError("odd electron count: open-shell references are unsupported");
}

/// Sorts `orbs` descending by qubit. Returns the permutation parity sign, or 0
/// if an orbital repeats.
inline int sort_descending(std::vector<SpinOrbital> &orbs) {
  int sign = 1;
  for (std::size_t i = 1; i < orbs.size(); ++i)
    for (std::size_t j = i; j > 0 && orbs[j - 1].qubit() <= orbs[j].qubit(); --j) {
      if (orbs[j - 1].qubit() == orbs[j].qubit())
        return 0;
      std::swap(orbs[j - 1], orbs[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < orbs.size(); ++i)
    if (orbs[i - 1].qubit() == orbs[i].qubit())
      return 0;
  return sign;
}

/// coefficient * (prod creations)(prod annihilations), with each half brought
/// to descending qubit order.
inline std::optional<FermionTerm> canonical_term(double coefficient,
                                                 std::vector<SpinOrbital> creations,
                                                 std::vector<SpinOrbital> annihilations) {
  const int s1 = sort_descending(creations);
  const int s2 = sort_descending(annihilations);
  if (s1 == 0 || s2 == 0)
    return std::nullopt;
  FermionTerm t;
  t.coefficient = coefficient * s1 * s2;
  for (auto o : creations)
    t.ops.push_back({o, true});
  for (auto o : annihilations)
    t.ops.push_back({o, false});
  return t;
}

inline FermionGenerator anti_hermitian(const std::vector<SpinOrbital> &create,
                                       const std::vector<SpinOrbital> &destroy) {
  FermionGenerator g;
  // T = c_1+ c_2+ ... d_1 d_2 ... in descending order; its adjoint reverses the
  // string and swaps roles, which canonical_term re-sorts with sign.
  auto t = canonical_term(1.0, create, destroy);
  if (t)
    g.terms.push_back(*t);
  if (t) {
    // Reversal of the daggered string: creations were (d_k ... d_1) order.
    std::vector<SpinOrbital> dc, dd;
    for (auto it = t->ops.rbegin(); it != t->ops.rend(); ++it) {
      if (!it->create)
        dc.push_back(it->orbital);
      else
        dd.push_back(it->orbital);
    }
    auto td = canonical_term(-t->coefficient, dc, dd);
    if (td)
      g.terms.push_back(*td);
  }
  return g;
}

} // namespace detail

inline std::vector<Excitation> enumerate_singles(std::size_t n_spatial, int n_electrons) {
  detail::require_closed_shell(n_spatial, n_electrons);
  const auto n_occ_q = static_cast<std::size_t>(n_electrons);
  const std::size_t n_q = 2 * n_spatial;
  std::vector<Excitation> out;
  for (std::size_t i = 0; i < n_occ_q; ++i)
    for (std::size_t a = n_occ_q; a < n_q; ++a)
      if (i % 2 == a % 2)
        out.push_back({{SpinOrbital::from_qubit(i)}, {SpinOrbital::from_qubit(a)}});
  std::sort(out.begin(), out.end());
  return out;
}

/// All Sz-preserving doubles; spin-complemented pairs stay independent.
inline std::vector<Excitation> enumerate_doubles(std::size_t n_spatial, int n_electrons) {
  detail::require_closed_shell(n_spatial, n_electrons);
  const auto n_occ_q = static_cast<std::size_t>(n_electrons);
  const std::size_t n_q = 2 * n_spatial;
  std::vector<Excitation> out;
  for (std::size_t i = 0; i < n_occ_q; ++i)
    for (std::size_t j = i + 1; j < n_occ_q; ++j)
      for (std::size_t a = n_occ_q; a < n_q; ++a)
        for (std::size_t b = a + 1; b < n_q; ++b) {
          if ((i % 2) + (j % 2) != (a % 2) + (b % 2))
            continue;
          out.push_back({{SpinOrbital::from_qubit(i), SpinOrbital::from_qubit(j)},
                         {SpinOrbital::from_qubit(a), SpinOrbital::from_qubit(b)}});
        }
  std::sort(out.begin(), out.end());
  return out;
}

/// Scatterer bath for the OP or PP sector over the given CSO.
///
/// OP, hole-type:      a_s u_t <- i_s j_t   (s != t, j != u)
/// OP, particle-type:  a_s b_t <- i_s v_t   (s != t, b != v)
/// PP, hole-type:      a_s u_t <- i_s i_t   (s != t, i != u)
/// PP, particle-type:  a_s a_t <- i_s v_t   (s != t, a != v)
inline std::vector<Scatterer> enumerate_scatterers(std::size_t n_spatial, int n_electrons,
                                                   const CsoSpec &cso, Sector sector) {
  detail::require_closed_shell(n_spatial, n_electrons);
  const auto n_occ = static_cast<std::size_t>(n_electrons / 2);
  for (auto u : cso.holes)
    if (u >= n_occ)
      throw DomainError("CSO hole orbital " + std::to_string(u) +
                        " is not occupied in the reference");
  for (auto v : cso.particles)
    if (v < n_occ || v >= n_spatial)
      throw DomainError("CSO particle orbital " + std::to_string(v) +
                        " is not a virtual orbital");

  std::vector<Scatterer> out;
  auto so = [](std::size_t p, Spin s) { return SpinOrbital{p, s}; };
  for (auto [s, t] : {std::pair{Spin::alpha, Spin::beta}, std::pair{Spin::beta, Spin::alpha}}) {
    for (auto u : cso.holes)
      for (std::size_t i = 0; i < n_occ; ++i)
        for (std::size_t j = 0; j < n_occ; ++j) {
          if (j == u)
            continue;
          if (sector == Sector::PP && j != i)
            continue;
          for (std::size_t a = n_occ; a < n_spatial; ++a) {
            Scatterer sc;
            sc.kind = ScattererKind::hole;
            sc.sector = sector;
            sc.cso_orbital = so(u, t);
            sc.create = {so(a, s), so(u, t)};
            sc.destroy = {so(i, s), so(j, t)};
            out.push_back(std::move(sc));
          }
        }
    for (auto v : cso.particles)
      for (std::size_t i = 0; i < n_occ; ++i)
        for (std::size_t a = n_occ; a < n_spatial; ++a)
          for (std::size_t b = n_occ; b < n_spatial; ++b) {
            if (b == v)
              continue;
            if (sector == Sector::PP && b != a)
              continue;
            Scatterer sc;
            sc.kind = ScattererKind::particle;
            sc.sector = sector;
            sc.cso_orbital = so(v, t);
            sc.create = {so(a, s), so(b, t)};
            sc.destroy = {so(i, s), so(v, t)};
            out.push_back(std::move(sc));
          }
  }
  for (auto &sc : out) {
    std::sort(sc.create.begin(), sc.create.end());
    std::sort(sc.destroy.begin(), sc.destroy.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline FermionGenerator build_generator(const Excitation &x) {
  auto g = detail::anti_hermitian(x.particles, x.holes);
  g.source = x;
  return g;
}

inline FermionGenerator build_generator(const Scatterer &s) {
  auto g = detail::anti_hermitian(s.create, s.destroy);
  g.source = s;
  return g;
}

/// True iff tau vacates the orbital that sigma refills (hole-type) or fills
/// the orbital that sigma empties (particle-type).
inline bool shares_cso(const Excitation &t, const Scatterer &s) {
  const auto &pool = s.kind == ScattererKind::hole ? t.holes : t.particles;
  return std::find(pool.begin(), pool.end(), s.cso_orbital) != pool.end();
}

/// Hole-particle rank of sigma * tau |HF>, or 0 when sigma annihilates
/// tau |HF>. Requires shares_cso(t, s).
inline std::size_t connected_rank(const Excitation &t, const Scatterer &s) {
  if (!shares_cso(t, s))
    throw DomainError("connected_rank requires a shared CSO orbital");
  // Occupancy of tau|HF> relative to HF: emptied holes, filled particles.
  std::set<std::size_t> holes, particles;
  for (auto o : t.holes)
    holes.insert(o.qubit());
  for (auto o : t.particles)
    particles.insert(o.qubit());

  // Which of sigma's orbitals are occupied in HF follows from its kind.
  auto hf_occupied_destroy = [&](SpinOrbital o) {
    return s.kind == ScattererKind::hole || !(o == s.cso_orbital);
  };
  auto hf_occupied_create = [&](SpinOrbital o) {
    return s.kind == ScattererKind::hole && o == s.cso_orbital;
  };

  for (auto o : s.destroy) {
    const auto q = o.qubit();
    if (hf_occupied_destroy(o)) {
      if (!holes.insert(q).second)
        return 0; // already empty
    } else if (particles.erase(q) == 0) {
      return 0; // virtual not populated
    }
  }
  for (auto o : s.create) {
    const auto q = o.qubit();
    if (hf_occupied_create(o)) {
      if (holes.erase(q) == 0)
        return 0; // still occupied
    } else if (!particles.insert(q).second) {
      return 0; // already populated
    }
  }
  return holes.size();
}

/// Admissible for a block: shares a CSO orbital and reaches rank >= 3.
inline bool admissible(const Excitation &t, const Scatterer &s) {
  return shares_cso(t, s) && connected_rank(t, s) >= 3;
}

inline std::string describe(const std::vector<SpinOrbital> &orbs) {
  std::string out;
  for (std::size_t k = 0; k < orbs.size(); ++k)
    out += (k ? "," : "") + std::to_string(orbs[k].qubit());
  return out;
}

inline std::string describe(const Excitation &x) {
  return "tau[" + describe(x.holes) + "->" + describe(x.particles) + "]";
}

inline std::string describe(const Scatterer &s) {
  return std::string("sigma_") + (s.kind == ScattererKind::hole ? "h" : "p") + "[" +
         describe(s.destroy) + "->" + describe(s.create) + "|cso " +
         std::to_string(s.cso_orbital.qubit()) + "]";
}

} // namespace compass::fermion
