/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "compass/protocol.hpp"
#include "compass/simulator.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace compass;
using namespace compass::sim;
namespace t = compass::testing;
using fermion::Excitation;
using fermion::SpinOrbital;

namespace {

Excitation make_excitation(std::vector<std::size_t> holes, std::vector<std::size_t> particles) {
  Excitation x;
  for (auto q : holes)
    x.holes.push_back(SpinOrbital::from_qubit(q));
  for (auto q : particles)
    x.particles.push_back(SpinOrbital::from_qubit(q));
  return x;
}

t::Vec to_vec(const StateVector &s) {
  t::Vec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

StateVector from_vec(const t::Vec &v, std::size_t n) {
  StateVector s(n);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = v[static_cast<Eigen::Index>(i)];
  return s;
}

double distance(const StateVector &a, const StateVector &b) {
  return (to_vec(a) - to_vec(b)).norm();
}

/// Every generator the library can build for four spatial orbitals, four electrons.
std::vector<fermion::FermionGenerator> all_generators() {
  std::vector<fermion::FermionGenerator> out;
  for (const auto &x : fermion::enumerate_doubles(4, 4))
    out.push_back(fermion::build_generator(x));
  for (const auto &x : fermion::enumerate_singles(4, 4))
    out.push_back(fermion::build_generator(x));
  for (auto sector : {fermion::Sector::OP, fermion::Sector::PP})
    for (const auto &s : fermion::enumerate_scatterers(4, 4, fermion::CsoSpec{{0, 1}, {2, 3}}, sector))
      out.push_back(fermion::build_generator(s));
  return out;
}

const std::string h2_fixture = std::string(COMPASS_FIXTURE_DIR) + "/h2_sto3g_74.fcidump";

} // namespace

TEST(HfState, Examples) {
  const auto s = hf_state(4, 2);
  EXPECT_EQ(s[0b0011], complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_EQ(hf_state(4, 0)[0], complex(1.0));
  EXPECT_EQ(hf_state(4, 4)[0b1111], complex(1.0));
  EXPECT_THROW(hf_state(4, 5), DomainError);
  EXPECT_THROW(StateVector(25), DomainError);
  EXPECT_THROW(StateVector::basis_state(2, 4), DomainError);
}

TEST(HfState, EnergyEqualsClassicalRhf) {
  const auto m = fcidump::read_fcidump(h2_fixture);
  const auto h = jw::build_qubit_hamiltonian(m);
  EXPECT_NEAR(expectation(hf_state(4, 2), h), t::rhf_energy(m), 1e-10);
}

TEST(Expectation, IdentityAndDiagonal) {
  std::mt19937_64 rng(1);
  const auto psi = from_vec(t::random_state(16, rng), 4);
  EXPECT_NEAR(expectation(psi, PauliOperator::identity(4, 2.5)), 2.5, 1e-14);

  fcidump::MoleculeIntegrals m(2);
  m.n_electrons = 2;
  m.e_core = 0.3;
  m.h1(0, 0) = -1.1;
  m.h1(1, 1) = 0.4;
  EXPECT_NEAR(expectation(hf_state(4, 2), jw::build_qubit_hamiltonian(m)), 2 * -1.1 + 0.3, 1e-14);
}

TEST(Expectation, MatchesDenseContraction) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto m = t::random_integrals(5, 4, seed);
    const auto h = jw::build_qubit_hamiltonian(m);
    const t::Vec v = t::random_state(1024, rng);
    const double dense = (v.adjoint() * t::hamiltonian_matrix(m) * v)(0, 0).real();
    const auto psi = from_vec(v, 10);
    EXPECT_NEAR(expectation(psi, h), dense, 1e-12);
    EXPECT_NEAR(expectation(psi, SparseOperator(h)), dense, 1e-12);
  }
}

TEST(Expectation, NonHermitianIsRejected) {
  PauliOperator op(1);
  op.add(pauli::PauliKey{0, 1}, complex(0.0, 1.0));
  EXPECT_THROW(expectation(hf_state(1, 0), op), NumericalError);
  EXPECT_THROW(expectation(hf_state(2, 0), op), DomainError);
}

TEST(ExpGenerator, ZeroAngleIsIdentity) {
  std::mt19937_64 rng(3);
  const auto psi = from_vec(t::random_state(256, rng), 8);
  for (const auto &g : all_generators()) {
    const GeneratorCache cache(g, 8);
    EXPECT_EQ(apply_exp_generator(psi, cache, 0.0), psi);
  }
}

TEST(ExpGenerator, QuarterTurnTransfersSingleExcitation) {
  const GeneratorCache cache(fermion::build_generator(make_excitation({0}, {2})), 4);
  const auto out = apply_exp_generator(hf_state(4, 2), cache, std::numbers::pi / 2);
  EXPECT_LT(std::abs(out[0b0011]), 1e-12);
  EXPECT_NEAR(std::abs(out[0b0110]), 1.0, 1e-12);
}

TEST(ExpGenerator, Unitarity) {
  std::mt19937_64 rng(4);
  const auto gens = all_generators();
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const GeneratorCache cache(gens[rng() % gens.size()], 8);
    const double theta = angle(rng);
    const auto psi = from_vec(t::random_state(256, rng), 8);
    const auto fwd = apply_exp_generator(psi, cache, theta);
    EXPECT_NEAR(fwd.norm(), 1.0, 1e-12);
    EXPECT_LT(distance(apply_exp_generator(fwd, cache, -theta), psi), 1e-12);
  }
}

TEST(ExpGenerator, MatchesDenseExponential) {
  std::mt19937_64 rng(5);
  const auto gens = all_generators();
  for (std::size_t k = 0; k < gens.size(); k += 3) {
    const GeneratorCache cache(gens[k], 8);
    const t::Vec v = t::random_state(256, rng);
    const t::Vec expect = t::dense_exp(t::generator_matrix(gens[k], 8), 0.7) * v;
    EXPECT_LT((to_vec(apply_exp_generator(from_vec(v, 8), cache, 0.7)) - expect).norm(), 1e-12);
  }
}

TEST(ExpGenerator, ClosedFormAgreesWithTaylor) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  std::size_t checked = 0;
  for (const auto &g : all_generators()) {
    const GeneratorCache cache(g, 8);
    if (!cache.closed_form_valid())
      continue;
    ++checked;
    std::vector<complex> a(cache.support().size());
    for (auto &z : a)
      z = {normal(rng), normal(rng)};
    auto b = a;
    cache.exp_compact(a, 1.3);
    cache.exp_compact(b, 1.3, true);
    double diff = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
      diff = std::max(diff, std::abs(a[r] - b[r]));
    EXPECT_LT(diff, 1e-12);
  }
  EXPECT_GT(checked, 0u);
}

TEST(ExpGenerator, ErrorPaths) {
  const GeneratorCache cache(fermion::build_generator(make_excitation({0}, {2})), 4);
  auto psi = hf_state(4, 2);
  EXPECT_THROW(apply_exp_generator_inplace(psi, cache, std::nan("")), DomainError);
  EXPECT_THROW(apply_exp_generator_inplace(psi, cache, INFINITY), DomainError);
  auto wrong = hf_state(6, 2);
  EXPECT_THROW(apply_exp_generator_inplace(wrong, cache, 0.1), DomainError);
  EXPECT_THROW(GeneratorCache(PauliOperator::identity(2), 2), DomainError);
  EXPECT_THROW(GeneratorCache(fermion::build_generator(make_excitation({0}, {2})), 2), DomainError);
}

TEST(ApplyAnsatz, ZeroParametersReturnReference) {
  const auto ansatz = make_uccsd_ansatz(4, 4);
  const std::vector<double> zeros(ansatz.parameter_count(), 0.0);
  const auto ref = hf_state(8, 4);
  EXPECT_EQ(apply_ansatz(ref, ansatz, zeros), ref);
  EXPECT_THROW(apply_ansatz(ref, ansatz, std::vector<double>(3)), DomainError);
}

TEST(ApplyAnsatz, SingleDoubleScanMatchesDenseExponential) {
  const auto m = fcidump::read_fcidump(h2_fixture);
  const auto h = jw::build_qubit_hamiltonian(m);
  const auto x = make_excitation({0, 1}, {2, 3});
  Ansatz a;
  a.n_qubits = 4;
  a.n_electrons = 2;
  a.blocks.push_back({ScreenedDouble{x}, {}, 1});

  const t::Dense hd = t::hamiltonian_matrix(m);
  const t::Dense g = t::generator_matrix(fermion::build_generator(x), 4);
  const t::Vec ref = to_vec(hf_state(4, 2));
  double worst = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double theta = -std::numbers::pi + k * std::numbers::pi / 10;
    const t::Vec v = t::dense_exp(g, theta) * ref;
    const double dense = (v.adjoint() * hd * v)(0, 0).real();
    const double sim = expectation(apply_ansatz(hf_state(4, 2), a, std::vector{theta}), h);
    worst = std::max(worst, std::abs(dense - sim));
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(ApplyAnsatz, ConservesNumberAndSpin) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto ansatz = make_uccsd_ansatz(4, 4);
  std::vector<double> params(ansatz.parameter_count());
  for (auto &p : params)
    p = u(rng);
  const auto psi = apply_ansatz(hf_state(8, 4), ansatz, params);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
  EXPECT_NEAR(expectation(psi, jw::number_operator(8)), 4.0, 1e-10);
  EXPECT_NEAR(expectation(psi, jw::sz_operator(8)), 0.0, 1e-10);
}

TEST(BlockProduct, SharedCsoScattererReachesTriples) {
  // Six electrons in five spatial orbitals; CSO hole 2, particle 3.
  const fermion::CsoSpec cso{{2}, {3}};
  const auto tau = make_excitation({4, 5}, {6, 7});
  const auto bath = fermion::enumerate_scatterers(5, 6, cso, fermion::Sector::OP);
  const auto it = std::find_if(bath.begin(), bath.end(),
                               [&](const auto &s) { return fermion::admissible(tau, s); });
  ASSERT_NE(it, bath.end());

  const GeneratorCache gt(fermion::build_generator(tau), 10), gs(fermion::build_generator(*it), 10);
  const auto block = apply_exp_generator(apply_exp_generator(hf_state(10, 6), gt, 0.3), gs, 0.4);
  EXPECT_GT(t::level_weight(block.amplitudes(), 6, 3), 1e-4);

  // Swapping the order changes the state.
  const auto swapped = apply_exp_generator(apply_exp_generator(hf_state(10, 6), gs, 0.4), gt, 0.3);
  EXPECT_GT(distance(block, swapped), 1e-3);
}

TEST(BlockProduct, UnsharedScattererMakesNoTriples) {
  const fermion::CsoSpec cso{{2}, {3}};
  const auto tau = make_excitation({0, 1}, {8, 9});
  const GeneratorCache gt(fermion::build_generator(tau), 10);
  std::size_t checked = 0;
  for (const auto &s : fermion::enumerate_scatterers(5, 6, cso, fermion::Sector::OP)) {
    ASSERT_FALSE(fermion::shares_cso(tau, s));
    const GeneratorCache gs(fermion::build_generator(s), 10);
    const auto out = apply_exp_generator(apply_exp_generator(hf_state(10, 6), gt, 0.3), gs, 0.4);
    EXPECT_LT(t::level_weight(out.amplitudes(), 6, 3), 1e-24) << fermion::describe(s);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}
