/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Jordan-Wigner encoding. The parity string on a_p covers qubits 0..p-1:
//   a_p^+ -> (X_p - iY_p)/2 Z_{p-1}...Z_0,   a_p -> (X_p + iY_p)/2 Z_{p-1}...Z_0

#include "compass/fcidump.hpp"
#include "compass/fermion_ops.hpp"
#include "compass/pauli.hpp"

#include <vector>

namespace compass::jw {

using pauli::complex;
using pauli::PauliKey;
using pauli::PauliOperator;

inline PauliOperator ladder(std::size_t qubit, bool create, std::size_t n_qubits) {
  if (qubit >= n_qubits)
    throw DomainError("spin orbital " + std::to_string(qubit) + " exceeds " +
                      std::to_string(n_qubits) + " qubits");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const std::uint64_t parity = bit - 1;
  PauliOperator op(n_qubits);
  op.add(PauliKey{bit, parity}, 0.5);
  op.add(PauliKey{bit, parity | bit}, create ? complex(0.0, -0.5) : complex(0.0, 0.5));
  return op;
}

inline PauliOperator jw_transform(const fermion::FermionTerm &term, std::size_t n_qubits) {
  auto out = PauliOperator::identity(n_qubits, term.coefficient);
  for (const auto &op : term.ops)
    out = out * ladder(op.orbital.qubit(), op.create, n_qubits);
  return out;
}

inline PauliOperator jw_transform(const fermion::FermionGenerator &g, std::size_t n_qubits) {
  PauliOperator out(n_qubits);
  for (const auto &t : g.terms)
    out += jw_transform(t, n_qubits);
  out.simplify();
  return out;
}

/// H = e_core + sum h_pq a+_p a_q + 1/2 sum <pq|rs> a+_p a+_q a_s a_r over spin
/// orbitals, with <pq|rs> = (PR|QS) for matching spins.
inline PauliOperator build_qubit_hamiltonian(const fcidump::MoleculeIntegrals &m) {
  const std::size_t n_spatial = m.n_spatial;
  const std::size_t nq = 2 * n_spatial;
  if (nq > pauli::max_qubits)
    throw DomainError("Hamiltonian exceeds the qubit cap");

  std::vector<PauliOperator> cr, an;
  for (std::size_t p = 0; p < nq; ++p) {
    cr.push_back(ladder(p, true, nq));
    an.push_back(ladder(p, false, nq));
  }

  PauliOperator h = PauliOperator::identity(nq, m.e_core);
  for (std::size_t p = 0; p < nq; ++p)
    for (std::size_t q = 0; q < nq; ++q) {
      if (p % 2 != q % 2)
        continue;
      const double v = m.h1(p / 2, q / 2);
      if (v != 0.0)
        h += (cr[p] * an[q]) * complex(v);
    }

  // Pair products a+_p a+_q and a_s a_r are reused across the quartic sum.
  std::vector<PauliOperator> cc(nq * nq), aa(nq * nq);
  for (std::size_t p = 0; p < nq; ++p)
    for (std::size_t q = 0; q < nq; ++q) {
      if (p == q)
        continue;
      cc[p * nq + q] = cr[p] * cr[q];
      aa[p * nq + q] = an[p] * an[q];
    }
  for (std::size_t p = 0; p < nq; ++p)
    for (std::size_t q = 0; q < nq; ++q) {
      if (p == q)
        continue;
      for (std::size_t r = 0; r < nq; ++r) {
        if (r % 2 != p % 2)
          continue;
        for (std::size_t s = 0; s < nq; ++s) {
          if (s == r || s % 2 != q % 2)
            continue;
          const double v = m.h2(p / 2, r / 2, q / 2, s / 2);
          if (v == 0.0)
            continue;
          h += (cc[p * nq + q] * aa[s * nq + r]) * complex(0.5 * v);
        }
      }
    }
  h.simplify();
  return h;
}

/// Total number operator sum_p n_p.
inline PauliOperator number_operator(std::size_t n_qubits) {
  PauliOperator n(n_qubits);
  for (std::size_t p = 0; p < n_qubits; ++p)
    n += ladder(p, true, n_qubits) * ladder(p, false, n_qubits);
  n.simplify();
  return n;
}

/// S_z = 1/2 sum_P (n_{P,alpha} - n_{P,beta}).
inline PauliOperator sz_operator(std::size_t n_qubits) {
  PauliOperator s(n_qubits);
  for (std::size_t p = 0; p < n_qubits; ++p)
    s += (ladder(p, true, n_qubits) * ladder(p, false, n_qubits)) *
         complex(p % 2 == 0 ? 0.5 : -0.5);
  s.simplify();
  return s;
}

} // namespace compass::jw
