/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "compass/ansatz.hpp"
#include "compass/optimizer.hpp"
#include "compass/simulator.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace compass::vqe {

enum class GradientMode { adjoint, finite_difference };

inline std::string to_string(GradientMode m) {
  return m == GradientMode::adjoint ? "adjoint" : "finite_difference";
}

inline GradientMode gradient_mode_from_string(const std::string &s) {
  if (s == "adjoint")
    return GradientMode::adjoint;
  if (s == "finite_difference" || s == "fd")
    return GradientMode::finite_difference;
  throw DomainError("unknown gradient mode '" + s + "'");
}

struct Settings {
  opt::Settings optimizer;
  GradientMode gradient = GradientMode::adjoint;
  double fd_step = 1e-5;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> params;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// [-pi, pi] on closed-form rotation generators, unbounded otherwise.
inline std::pair<std::vector<double>, std::vector<double>>
parameter_bounds(const sim::EnergyModel &model) {
  std::vector<double> lo, hi;
  for (const auto &g : model.operators()) {
    const bool rot = g->closed_form_valid();
    lo.push_back(rot ? -std::numbers::pi : -opt::inf);
    hi.push_back(rot ? std::numbers::pi : opt::inf);
  }
  return {lo, hi};
}

inline std::vector<double> gradient(const sim::EnergyModel &model, std::span<const double> params,
                                    const Settings &s = {}) {
  if (params.size() != model.parameter_count())
    throw DomainError("parameter vector length does not match the ansatz");
  return s.gradient == GradientMode::adjoint ? model.gradient(params)
                                             : model.finite_difference_gradient(params, s.fd_step);
}

inline VqeResult minimize(const sim::EnergyModel &model, std::vector<double> init,
                          const Settings &s = {}) {
  if (init.size() != model.parameter_count())
    throw DomainError("initial parameter vector length does not match the ansatz");
  opt::Objective f = [&](std::span<const double> x, std::span<double> g) {
    if (s.gradient == GradientMode::adjoint)
      return model.energy_and_gradient(x, g);
    const auto fd = model.finite_difference_gradient(x, s.fd_step);
    std::copy(fd.begin(), fd.end(), g.begin());
    return model.energy(x);
  };
  auto [lo, hi] = parameter_bounds(model);
  auto r = opt::minimize(f, std::move(init), std::move(lo), std::move(hi), s.optimizer);
  VqeResult out;
  out.params = std::move(r.x);
  // Re-evaluate so the reported energy is exactly E(params).
  out.energy = model.energy(out.params);
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.converged = r.converged;
  out.history = std::move(r.history);
  return out;
}

/// Full VQE on an ansatz: compiles the generators, then minimizes.
inline VqeResult minimize(std::shared_ptr<const sim::SparseOperator> h,
                          const sim::StateVector &reference, const Ansatz &ansatz,
                          std::vector<double> init, const Settings &s = {},
                          sim::GeneratorPool *pool = nullptr) {
  if (init.size() != ansatz.parameter_count())
    throw DomainError("initial parameter vector length does not match the ansatz");
  sim::GeneratorPool local(reference.n_qubits());
  auto &p = pool ? *pool : local;
  sim::EnergyModel model(std::move(h), reference, p.compile(ansatz));
  return minimize(model, std::move(init), s);
}

} // namespace compass::vqe
