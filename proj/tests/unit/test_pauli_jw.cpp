/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "compass/jordan_wigner.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace compass;
using namespace compass::pauli;
namespace t = compass::testing;

namespace {

const std::complex<double> I{0.0, 1.0};

fermion::FermionGenerator single_generator(std::size_t from, std::size_t to) {
  return fermion::build_generator(fermion::Excitation{{fermion::SpinOrbital::from_qubit(from)},
                                                      {fermion::SpinOrbital::from_qubit(to)}});
}

std::string random_letters(std::size_t n, std::mt19937_64 &rng) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k)
    s += "IXYZ"[rng() % 4];
  return s;
}

} // namespace

TEST(PauliString, SingleQubitMultiplicationTable) {
  for (char a : std::string("IXYZ"))
    for (char b : std::string("IXYZ")) {
      const auto pa = PauliString::from_letters(std::string(1, a));
      const auto pb = PauliString::from_letters(std::string(1, b));
      const auto pc = pa * pb;
      const t::Dense expect = t::letters_matrix({a}) * t::letters_matrix({b});
      const t::Dense got = pc.phase_factor() * t::letters_matrix(pc.letters());
      EXPECT_LT((expect - got).norm(), 1e-15) << a << b;
    }
}

TEST(PauliString, ProductsMatchKroneckerAndAssociate) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto la = random_letters(4, rng), lb = random_letters(4, rng), lc = random_letters(4, rng);
    const auto a = PauliString::from_letters(la), b = PauliString::from_letters(lb),
               c = PauliString::from_letters(lc);
    const auto ab = a * b;
    const t::Dense m = t::letters_matrix(la) * t::letters_matrix(lb);
    EXPECT_LT((ab.phase_factor() * t::letters_matrix(ab.letters()) - m).norm(), 1e-14);
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST(PauliString, LettersRoundTrip) {
  const auto p = PauliString::from_letters("XIYZ");
  EXPECT_EQ(p.letters(), "XIYZ");
  EXPECT_EQ(p.letter(0), 'Z');
  EXPECT_EQ(p.letter(3), 'X');
  EXPECT_THROW(PauliString::from_letters("XQ"), DomainError);
}

TEST(PauliOperator, SimplifyDropsTinyTerms) {
  PauliOperator op(2);
  op.add(PauliString::from_letters("XX"), 1e-15);
  op.add(PauliString::from_letters("ZZ"), 0.5);
  op.simplify();
  EXPECT_EQ(op.size(), 1u);
  EXPECT_TRUE(op.is_hermitian());
}

TEST(PauliOperator, DumpFormat) {
  PauliOperator op(2);
  op.add(PauliString::from_letters("XY"), std::complex<double>(0.0, -0.5));
  op.add(PauliString::from_letters("II"), 1.25);
  EXPECT_EQ(op.to_text(), "1.25 II\n0-0.5j XY\n");
}

TEST(JordanWigner, CreationMinusAnnihilationOnOneQubit) {
  fermion::FermionGenerator g;
  g.terms.push_back({1.0, {{fermion::SpinOrbital::from_qubit(0), true}}});
  g.terms.push_back({-1.0, {{fermion::SpinOrbital::from_qubit(0), false}}});
  const auto op = jw::jw_transform(g, 1);
  ASSERT_EQ(op.size(), 1u);
  EXPECT_LT(std::abs(op.coefficient("Y") - (-I)), 1e-15);
}

TEST(JordanWigner, SingleExcitationOnFourQubits) {
  const auto op = jw::jw_transform(single_generator(0, 2), 4);
  EXPECT_EQ(op.size(), 2u);
  EXPECT_LT(std::abs(op.coefficient("IXZY") - 0.5 * I), 1e-15);
  EXPECT_LT(std::abs(op.coefficient("IYZX") + 0.5 * I), 1e-15);

  const t::Dense expect =
      0.5 * I * (t::letters_matrix("IXZY") - t::letters_matrix("IYZX"));
  EXPECT_LT((t::pauli_matrix(op) - expect).norm(), 1e-14);
  EXPECT_LT((t::pauli_matrix(op) - t::generator_matrix(single_generator(0, 2), 4)).norm(), 1e-14);
}

TEST(JordanWigner, MappedGeneratorsMatchFermionicMatrices) {
  const std::size_t n_spatial = 5, nq = 10;
  const int ne = 4;
  std::vector<fermion::FermionGenerator> gens;
  const auto doubles = fermion::enumerate_doubles(n_spatial, ne);
  for (std::size_t k = 0; k < doubles.size(); k += 7)
    gens.push_back(fermion::build_generator(doubles[k]));
  for (const auto &x : fermion::enumerate_singles(n_spatial, ne))
    gens.push_back(fermion::build_generator(x));
  const auto bath =
      fermion::enumerate_scatterers(n_spatial, ne, fermion::CsoSpec{{1}, {2}}, fermion::Sector::OP);
  for (std::size_t k = 0; k < bath.size(); k += 5)
    gens.push_back(fermion::build_generator(bath[k]));
  for (const auto &g : gens) {
    const auto op = jw::jw_transform(g, nq);
    for (const auto &[key, c] : op.terms())
      EXPECT_LT(std::abs(c.real()), 1e-15);
    EXPECT_LT((t::pauli_matrix(op) - t::generator_matrix(g, nq)).norm(), 1e-13);
  }
}

TEST(JordanWigner, Anticommutation) {
  const std::size_t n = 5;
  const t::Dense id = t::Dense::Identity(1 << n, 1 << n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const auto a = t::pauli_matrix(jw::ladder(p, false, n));
      const auto ad = t::pauli_matrix(jw::ladder(q, true, n));
      const t::Dense anti = a * ad + ad * a;
      EXPECT_LT((anti - (p == q ? id : t::Dense::Zero(1 << n, 1 << n))).norm(), 1e-13);
      const auto b = t::pauli_matrix(jw::ladder(q, false, n));
      EXPECT_LT((a * b + b * a).norm(), 1e-13);
    }
}

TEST(JordanWigner, LadderIndexOverflow) {
  EXPECT_THROW(jw::ladder(4, true, 4), DomainError);
  EXPECT_THROW(jw::jw_transform(single_generator(0, 6), 4), DomainError);
}

TEST(QubitHamiltonian, CoreOnly) {
  fcidump::MoleculeIntegrals m(2);
  m.n_electrons = 2;
  m.e_core = 1.75;
  const auto h = jw::build_qubit_hamiltonian(m);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_DOUBLE_EQ(h.coefficient(PauliKey{}).real(), 1.75);
}

TEST(QubitHamiltonian, DiagonalOneBody) {
  fcidump::MoleculeIntegrals m(3);
  m.n_electrons = 2;
  m.e_core = 0.1;
  m.h1(0, 0) = -1.0;
  m.h1(1, 1) = -0.4;
  m.h1(2, 2) = 0.3;
  const auto h = jw::build_qubit_hamiltonian(m);
  for (const auto &[key, c] : h.terms())
    EXPECT_EQ(key.x, 0u);
  const auto mat = t::pauli_matrix(h);
  EXPECT_NEAR(mat(0b11, 0b11).real(), 2 * -1.0 + 0.1, 1e-14);
  EXPECT_NEAR(mat(0b110000, 0b110000).real(), 2 * 0.3 + 0.1, 1e-14);
}

TEST(QubitHamiltonian, MatchesFermionicMatrixAndConservesSymmetries) {
  for (std::uint64_t seed : {3u, 4u}) {
    const auto m = t::random_integrals(4, 4, seed);
    const auto h = jw::build_qubit_hamiltonian(m);
    EXPECT_TRUE(h.is_hermitian(1e-12));
    const auto hp = t::pauli_matrix(h);
    EXPECT_LT((hp - t::hamiltonian_matrix(m)).norm(), 1e-12);
    const auto n = t::pauli_matrix(jw::number_operator(8));
    const auto sz = t::pauli_matrix(jw::sz_operator(8));
    EXPECT_LT((hp * n - n * hp).norm(), 1e-12);
    EXPECT_LT((hp * sz - sz * hp).norm(), 1e-12);
    EXPECT_LT((n - t::number_matrix(8)).norm(), 1e-14);
    EXPECT_LT((sz - t::sz_matrix(8)).norm(), 1e-14);
  }
}

TEST(QubitHamiltonian, HydrogenGroundStateMatchesDenseFci) {
  const auto m = fcidump::read_fcidump(std::string(COMPASS_FIXTURE_DIR) + "/h2_sto3g_74.fcidump");
  const auto h = jw::build_qubit_hamiltonian(m);
  const double from_pauli = t::sector_ground_energy(t::pauli_matrix(h), 4, 2);
  const double from_fermions = t::sector_ground_energy(t::hamiltonian_matrix(m), 4, 2);
  EXPECT_NEAR(from_pauli, from_fermions, 1e-10);
  EXPECT_LT(from_pauli, t::rhf_energy(m));
}
