/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Ansatz construction: energy screening of the doubles, CSO-prescreened
// scatterer attachment per block, and assembly with the singles tail.

#include "compass/ansatz.hpp"
#include "compass/fcidump.hpp"
#include "compass/parallel.hpp"
#include "compass/simulator.hpp"
#include "compass/vqe.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

namespace compass {

struct CompassConfig {
  double eps1 = 1e-5;
  double eps2 = 1e-7;
  fermion::Sector sector = fermion::Sector::OP;
  std::optional<fermion::CsoSpec> cso; ///< frontier orbitals when unset

  void validate() const {
    if (!(eps1 > 0.0) || !(eps2 > 0.0))
      throw DomainError("screening thresholds must be positive");
  }

  /// "COMPASS(a,b)-OP" with a = -log10 eps1, b = -log10 eps2.
  std::string label() const {
    auto exponent = [](double e) {
      std::ostringstream os;
      const double a = -std::log10(e);
      if (std::abs(a - std::round(a)) < 1e-9)
        os << static_cast<long>(std::round(a));
      else
        os << a;
      return os.str();
    };
    return "COMPASS(" + exponent(eps1) + "," + exponent(eps2) + ")-" + fermion::to_string(sector);
  }
};

/// Shared inputs for every screening evaluation.
struct ScreeningContext {
  std::shared_ptr<const sim::SparseOperator> hamiltonian;
  sim::StateVector reference;
  std::shared_ptr<sim::GeneratorPool> pool;
  vqe::Settings settings = screening_settings();
  std::size_t threads = 1;

  static vqe::Settings screening_settings() {
    vqe::Settings s;
    s.optimizer.ftol = 1e-10;
    return s;
  }

  ScreeningContext(std::shared_ptr<const sim::SparseOperator> h, sim::StateVector ref,
                   std::size_t n_threads = 1)
      : hamiltonian(std::move(h)), reference(std::move(ref)),
        pool(std::make_shared<sim::GeneratorPool>(reference.n_qubits())), threads(n_threads) {}

  double reference_energy() const { return sim::expectation(reference, *hamiltonian); }
};

inline constexpr std::array<double, 5> screening_starts{0.0, 0.05, -0.05, 0.2, -0.2};

/// One-parameter optimum of E_I for every double, without thresholding.
inline std::vector<ScreenedDouble> evaluate_doubles(const ScreeningContext &ctx,
                                                    const std::vector<Excitation> &doubles) {
  const double e_hf = ctx.reference_energy();
  return parallel_map<ScreenedDouble>(doubles.size(), ctx.threads, [&](std::size_t k) {
    const auto &x = doubles[k];
    sim::EnergyModel model(ctx.hamiltonian, ctx.reference, {ctx.pool->get(Operator{x})});
    std::vector<vqe::VqeResult> runs;
    for (double start : screening_starts)
      runs.push_back(vqe::minimize(model, {start}, ctx.settings));
    // Lowest energy wins; within rounding, a converged run is preferred.
    double e_min = runs.front().energy;
    for (const auto &r : runs)
      e_min = std::min(e_min, r.energy);
    const vqe::VqeResult *best = nullptr;
    for (const auto &r : runs) {
      if (r.energy > e_min + 1e-12)
        continue;
      if (!best || (r.converged && !best->converged))
        best = &r;
    }
    if (!best->converged)
      throw ScreeningError("one-parameter screening did not converge for " +
                           fermion::describe(x));
    return ScreenedDouble{x, best->params[0], best->energy, std::abs(best->energy - e_hf)};
  });
}

/// Keeps delta_e > eps1, ordered by delta_e descending then lexically.
inline std::vector<ScreenedDouble> select_doubles(std::vector<ScreenedDouble> evaluated,
                                                  double eps1) {
  std::erase_if(evaluated, [eps1](const ScreenedDouble &s) { return !(s.delta_e > eps1); });
  std::stable_sort(evaluated.begin(), evaluated.end(), [](const auto &a, const auto &b) {
    if (a.delta_e != b.delta_e)
      return a.delta_e > b.delta_e;
    return a.excitation < b.excitation;
  });
  return evaluated;
}

inline std::vector<ScreenedDouble> screen_doubles(const ScreeningContext &ctx,
                                                  const std::vector<Excitation> &doubles,
                                                  double eps1) {
  if (std::isinf(eps1) && eps1 > 0)
    return {};
  return select_doubles(evaluate_doubles(ctx, doubles), eps1);
}

/// Two-parameter optimum of E_{I mu} for every admissible candidate.
inline std::vector<AttachedScatterer> evaluate_scatterers(const ScreeningContext &ctx,
                                                          const ScreenedDouble &tau,
                                                          const std::vector<Scatterer> &pool) {
  std::vector<Scatterer> candidates;
  for (const auto &s : pool)
    if (fermion::admissible(tau.excitation, s))
      candidates.push_back(s);
  const auto g_tau = ctx.pool->get(Operator{tau.excitation});
  return parallel_map<AttachedScatterer>(candidates.size(), ctx.threads, [&](std::size_t k) {
    const auto &s = candidates[k];
    sim::EnergyModel model(ctx.hamiltonian, ctx.reference, {g_tau, ctx.pool->get(Operator{s})});
    auto r = vqe::minimize(model, {tau.theta_opt, 0.0}, ctx.settings);
    if (!r.converged)
      throw ScreeningError("two-parameter screening did not converge for " +
                           fermion::describe(tau.excitation) + " with " + fermion::describe(s));
    return AttachedScatterer{s, r.params[1], r.params[0], r.energy, tau.energy - r.energy};
  });
}

/// Attaches candidates lowering E_I by more than eps2, strongest first.
inline OperatorBlock select_scatterers(const ScreenedDouble &tau,
                                       std::vector<AttachedScatterer> evaluated, double eps2,
                                       std::size_t index = 0) {
  std::erase_if(evaluated, [eps2](const AttachedScatterer &a) { return !(a.delta_e > eps2); });
  std::stable_sort(evaluated.begin(), evaluated.end(), [](const auto &a, const auto &b) {
    if (a.delta_e != b.delta_e)
      return a.delta_e > b.delta_e;
    return a.scatterer < b.scatterer;
  });
  return OperatorBlock{tau, std::move(evaluated), index};
}

inline OperatorBlock screen_scatterers(const ScreeningContext &ctx, const ScreenedDouble &tau,
                                       const std::vector<Scatterer> &pool, double eps2,
                                       std::size_t index = 0) {
  if (std::isinf(eps2) && eps2 > 0)
    return OperatorBlock{tau, {}, index};
  return select_scatterers(tau, evaluate_scatterers(ctx, tau, pool), eps2, index);
}

/// Weaves blocks and the singles tail into an ansatz with its initial
/// parameter vector.
inline Ansatz build_ansatz(const std::vector<ScreenedDouble> &screened,
                           std::vector<OperatorBlock> blocks, std::vector<Excitation> singles,
                           std::string label, std::size_t n_qubits, int n_electrons) {
  if (blocks.size() != screened.size())
    throw ConstructionError("block count does not match the screened doubles");
  std::set<Excitation> seen;
  Ansatz a;
  a.label = std::move(label);
  a.n_qubits = n_qubits;
  a.n_electrons = n_electrons;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    auto &b = blocks[k];
    if (!(b.tau.excitation == screened[k].excitation))
      throw ConstructionError("block " + std::to_string(k + 1) +
                              " is out of step with the screened order");
    if (!seen.insert(b.tau.excitation).second)
      throw ConstructionError("duplicate excitation " + fermion::describe(b.tau.excitation));
    b.index = k + 1;
    a.initial_parameters.push_back(b.scatterers.empty() ? b.tau.theta_opt
                                                        : b.scatterers.front().theta_tau);
    for (const auto &s : b.scatterers)
      a.initial_parameters.push_back(s.theta);
  }
  std::sort(singles.begin(), singles.end());
  for (const auto &s : singles)
    if (!seen.insert(s).second)
      throw ConstructionError("duplicate excitation " + fermion::describe(s));
  a.initial_parameters.insert(a.initial_parameters.end(), singles.size(), 0.0);
  a.blocks = std::move(blocks);
  a.singles = std::move(singles);
  return a;
}

/// Per-stage record of a construction run, for reporting.
struct CompassReport {
  Ansatz ansatz;
  std::vector<ScreenedDouble> evaluated; ///< every double, pool order
  std::vector<ScreenedDouble> screened;  ///< survivors, energy order
  std::vector<std::size_t> candidates;   ///< admissible scatterers per block
  std::size_t bath_size = 0;
};

inline CompassReport construct_compass_ansatz(const ScreeningContext &ctx, std::size_t n_spatial,
                                              int n_electrons, const CompassConfig &cfg) {
  cfg.validate();
  CompassReport rep;
  const auto doubles = fermion::enumerate_doubles(n_spatial, n_electrons);
  const auto cso = cfg.cso.value_or(fermion::default_cso(n_spatial, n_electrons));
  const auto bath = fermion::enumerate_scatterers(n_spatial, n_electrons, cso, cfg.sector);
  rep.bath_size = bath.size();
  rep.evaluated = evaluate_doubles(ctx, doubles);
  rep.screened = select_doubles(rep.evaluated, cfg.eps1);

  std::vector<OperatorBlock> blocks;
  for (std::size_t k = 0; k < rep.screened.size(); ++k) {
    const auto &tau = rep.screened[k];
    std::size_t n_adm = 0;
    for (const auto &s : bath)
      n_adm += fermion::admissible(tau.excitation, s);
    rep.candidates.push_back(n_adm);
    blocks.push_back(screen_scatterers(ctx, tau, bath, cfg.eps2, k + 1));
  }
  rep.ansatz = build_ansatz(rep.screened, std::move(blocks),
                            fermion::enumerate_singles(n_spatial, n_electrons), cfg.label(),
                            2 * n_spatial, n_electrons);
  return rep;
}

/// All doubles as scatterer-free blocks in lexical order, then the singles;
/// every parameter starts at zero.
inline Ansatz make_uccsd_ansatz(std::size_t n_spatial, int n_electrons) {
  Ansatz a;
  a.label = "UCCSD";
  a.n_qubits = 2 * n_spatial;
  a.n_electrons = n_electrons;
  std::size_t idx = 0;
  for (auto &x : fermion::enumerate_doubles(n_spatial, n_electrons))
    a.blocks.push_back(OperatorBlock{ScreenedDouble{std::move(x), 0.0, 0.0, 0.0}, {}, ++idx});
  a.singles = fermion::enumerate_singles(n_spatial, n_electrons);
  a.initial_parameters.assign(a.parameter_count(), 0.0);
  return a;
}

} // namespace compass
