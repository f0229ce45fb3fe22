/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Exact ground energies in a fixed (N, Sz) sector and scan error metrics.

#include "compass/errors.hpp"
#include "compass/pauli.hpp"
#include "compass/simulator.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace compass::oracle {

using pauli::complex;

inline constexpr double hartree_to_kcal = 627.5094740631;
inline constexpr double chemical_accuracy = 1.5936e-3; ///< 1 kcal/mol in Hartree

enum class FciMethod { automatic, dense, lanczos };

inline constexpr std::size_t dense_limit = 4096;

struct FciResult {
  double energy = 0.0;
  sim::StateVector state; ///< ground vector embedded in the full register
  std::size_t sector_dim = 0;
  FciMethod method = FciMethod::dense;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Basis states with `n_electrons` set bits and (n_alpha - n_beta) == ms2,
/// alpha on even qubits.
inline std::vector<std::uint64_t> sector_basis(std::size_t n_qubits, int n_electrons, int ms2) {
  if (n_qubits > sim::max_qubits)
    throw DomainError("sector exceeds the qubit cap");
  std::uint64_t even = 0;
  for (std::size_t q = 0; q < n_qubits; q += 2)
    even |= std::uint64_t{1} << q;
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (std::popcount(b) != n_electrons)
      continue;
    const int na = std::popcount(b & even);
    if (na - (n_electrons - na) == ms2)
      out.push_back(b);
  }
  return out;
}

/// Sector-restricted sparse matrix of H in CSR form.
struct SectorMatrix {
  std::vector<std::uint64_t> basis;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> cols;
  std::vector<complex> vals;

  std::size_t dim() const noexcept { return basis.size(); }

  void apply(const Eigen::VectorXcd &x, Eigen::VectorXcd &y) const {
    y.setZero(static_cast<Eigen::Index>(dim()));
    for (std::size_t r = 0; r < dim(); ++r) {
      complex acc{};
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        acc += vals[k] * x[cols[k]];
      y[static_cast<Eigen::Index>(r)] = acc;
    }
  }
};

inline SectorMatrix sector_matrix(const pauli::PauliOperator &h, int n_electrons, int ms2) {
  SectorMatrix m;
  m.basis = sector_basis(h.n_qubits(), n_electrons, ms2);
  if (m.basis.empty())
    throw DomainError("empty sector: N=" + std::to_string(n_electrons) +
                      " 2Sz=" + std::to_string(ms2) + " on " + std::to_string(h.n_qubits()) +
                      " qubits");
  std::vector<std::int32_t> pos(std::size_t{1} << h.n_qubits(), -1);
  for (std::size_t k = 0; k < m.basis.size(); ++k)
    pos[m.basis[k]] = static_cast<std::int32_t>(k);
  m.row_ptr.push_back(0);
  std::vector<complex> row(m.basis.size());
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < m.basis.size(); ++r) {
    const std::uint64_t br = m.basis[r];
    for (const auto &[key, c] : h.terms()) {
      const std::uint64_t bc = br ^ key.x;
      const auto p = pos[bc];
      if (p < 0)
        continue;
      if (row[p] == complex{})
        touched.push_back(static_cast<std::uint32_t>(p));
      row[p] += c * pauli::matrix_element(key, bc);
    }
    std::sort(touched.begin(), touched.end());
    for (auto p : touched) {
      if (std::abs(row[p]) > 1e-15) {
        m.cols.push_back(p);
        m.vals.push_back(row[p]);
      }
      row[p] = complex{};
    }
    touched.clear();
    m.row_ptr.push_back(m.cols.size());
  }
  return m;
}

namespace detail {

inline sim::StateVector embed(const SectorMatrix &m, std::size_t n_qubits,
                              const Eigen::VectorXcd &v) {
  sim::StateVector s(n_qubits);
  // Fix the global phase so the largest component is real and positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const complex phase = std::abs(v[imax]) > 0 ? std::conj(v[imax]) / std::abs(v[imax]) : 1.0;
  for (std::size_t k = 0; k < m.dim(); ++k)
    s[m.basis[k]] = phase * v[static_cast<Eigen::Index>(k)];
  return s;
}

inline FciResult dense(const SectorMatrix &m, std::size_t n_qubits) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      a(static_cast<Eigen::Index>(r), m.cols[k]) = m.vals[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed");
  FciResult r;
  r.energy = es.eigenvalues()[0];
  r.state = embed(m, n_qubits, es.eigenvectors().col(0));
  r.sector_dim = m.dim();
  r.method = FciMethod::dense;
  Eigen::VectorXcd hv;
  m.apply(es.eigenvectors().col(0), hv);
  r.residual = (hv - r.energy * es.eigenvectors().col(0)).norm();
  return r;
}

/// Lanczos with full reorthogonalization, stopped on a Ritz residual below tol.
inline FciResult lanczos(const SectorMatrix &m, std::size_t n_qubits, double tol = 1e-10,
                         std::size_t max_steps = 600) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const auto cap = static_cast<Eigen::Index>(std::min<std::size_t>(max_steps, m.dim()));
  Eigen::MatrixXcd V(n, cap);
  std::vector<double> alpha, beta;

  // Deterministic start vector with weight on every basis state.
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k)
    v[k] = 1.0 + 0.01 * static_cast<double>((k * 7919) % 101);
  v.normalize();

  Eigen::VectorXcd w;
  FciResult r;
  r.sector_dim = m.dim();
  r.method = FciMethod::lanczos;
  for (Eigen::Index j = 0; j < cap; ++j) {
    V.col(j) = v;
    m.apply(v, w);
    const double a = (v.adjoint() * w)(0).real();
    alpha.push_back(a);
    // Two passes of Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
    const double b = w.norm();

    const bool check = (j + 1) % 5 == 0 || j + 1 == cap || b < 1e-14;
    if (check) {
      const auto k = static_cast<Eigen::Index>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < k)
          T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      const double res = std::abs(b * es.eigenvectors()(k - 1, 0));
      if (res < tol || j + 1 == cap || b < 1e-14) {
        Eigen::VectorXcd y = V.leftCols(k) * es.eigenvectors().col(0).cast<complex>();
        y.normalize();
        Eigen::VectorXcd hy;
        m.apply(y, hy);
        r.energy = es.eigenvalues()[0];
        r.residual = (hy - r.energy * y).norm();
        r.state = embed(m, n_qubits, y);
        r.iterations = static_cast<std::size_t>(k);
        if (r.residual >= tol && b >= 1e-14 && j + 1 < n)
          throw NumericalError("Lanczos stopped at the step cap with residual " +
                               std::to_string(r.residual));
        return r;
      }
    }
    beta.push_back(b);
    v = w / b;
  }
  throw NumericalError("Lanczos did not run");
}

} // namespace detail

inline FciResult fci_ground_state(const pauli::PauliOperator &h, int n_electrons, int ms2 = 0,
                                  FciMethod method = FciMethod::automatic) {
  const auto m = sector_matrix(h, n_electrons, ms2);
  if (method == FciMethod::automatic)
    method = m.dim() <= dense_limit ? FciMethod::dense : FciMethod::lanczos;
  return method == FciMethod::dense ? detail::dense(m, h.n_qubits())
                                    : detail::lanczos(m, h.n_qubits());
}

/// Lowest eigenvalue of H in the (N, Sz) sector; sz is the spin projection.
inline double fci_ground_energy(const pauli::PauliOperator &h, int n_electrons, double sz = 0.0,
                                FciMethod method = FciMethod::automatic) {
  const double twice = 2.0 * sz;
  if (std::abs(twice - std::round(twice)) > 1e-12)
    throw DomainError("Sz must be a multiple of 1/2");
  return fci_ground_state(h, n_electrons, static_cast<int>(std::lround(twice)), method).energy;
}

struct ErrorMetrics {
  double npe_hartree = 0.0;
  double avg_hartree = 0.0;
  double max_abs_hartree = 0.0;
  double npe_kcal() const { return npe_hartree * hartree_to_kcal; }
  double avg_kcal() const { return avg_hartree * hartree_to_kcal; }
  double max_abs_kcal() const { return max_abs_hartree * hartree_to_kcal; }
};

/// NPE = max - min of signed errors; avg = mean |error|. Units follow input.
inline ErrorMetrics error_metrics(const std::vector<double> &errors) {
  if (errors.empty())
    throw DomainError("error_metrics needs at least one value");
  ErrorMetrics m;
  double lo = errors.front(), hi = errors.front(), sum = 0.0;
  for (double e : errors) {
    if (!std::isfinite(e))
      throw DomainError("non-finite error value");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    sum += std::abs(e);
    m.max_abs_hartree = std::max(m.max_abs_hartree, std::abs(e));
  }
  m.npe_hartree = hi - lo;
  m.avg_hartree = sum / static_cast<double>(errors.size());
  return m;
}

inline std::string to_string(FciMethod m) {
  switch (m) {
  case FciMethod::dense: return "dense";
  case FciMethod::lanczos: return "lanczos";
  default: return "automatic";
  }
}

} // namespace compass::oracle
