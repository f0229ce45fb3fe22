/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Gaussian parameter-noise study of a converged ansatz.
//
// Noisy vectors are drawn coordinate-wise as theta ~ Normal(theta_opt, sd)
// from std::mt19937_64 seeded with the study seed. Sample k uses the k-th
// block of draws, so the sample set depends only on (seed, sd, size).

#include "compass/errors.hpp"
#include "compass/parallel.hpp"
#include "compass/simulator.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace compass::noise {

struct NoiseStudy {
  double sd = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> energies;
  double mean = 0.0;
  double std = 0.0; ///< sample standard deviation (n - 1 denominator)
};

inline std::vector<std::vector<double>> sample_noisy_params(const std::vector<double> &theta_opt,
                                                            double sd, std::size_t n_samples,
                                                            std::uint64_t seed) {
  if (!(sd > 0.0) || !std::isfinite(sd))
    throw DomainError("noise standard deviation must be positive and finite");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> out(n_samples, theta_opt);
  for (auto &v : out)
    for (auto &x : v)
      x += sd * normal(rng);
  return out;
}

inline void summarize(NoiseStudy &s) {
  const auto n = static_cast<double>(s.energies.size());
  s.mean = std::accumulate(s.energies.begin(), s.energies.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : s.energies)
    ss += (e - s.mean) * (e - s.mean);
  s.std = s.energies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

inline NoiseStudy noise_study(const sim::EnergyModel &model, const std::vector<double> &theta_opt,
                              double sd, std::size_t n_samples, std::uint64_t seed,
                              std::size_t threads = 1) {
  if (n_samples == 0)
    throw DomainError("noise study needs at least one sample");
  if (theta_opt.size() != model.parameter_count())
    throw DomainError("parameter vector length does not match the ansatz");
  const auto samples = sample_noisy_params(theta_opt, sd, n_samples, seed);
  NoiseStudy s;
  s.sd = sd;
  s.n_samples = n_samples;
  s.seed = seed;
  s.energies = parallel_map<double>(n_samples, threads, [&](std::size_t k) {
    try {
      return model.energy(samples[k]);
    } catch (const Error &e) {
      throw NumericalError("noise sample " + std::to_string(k) + ": " + e.what());
    }
  });
  summarize(s);
  return s;
}

} // namespace compass::noise
