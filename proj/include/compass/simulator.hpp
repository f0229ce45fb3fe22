/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Dense statevector engine.
//
// Operators are compiled once from their Pauli form into sparse action plans:
// the Hamiltonian into a CSR matrix over the full 2^n basis, each generator
// into a compact plan over the basis states it touches. No 2^n x 2^n dense
// matrix is ever formed here.

#include "compass/ansatz.hpp"
#include "compass/errors.hpp"
#include "compass/fermion_ops.hpp"
#include "compass/jordan_wigner.hpp"
#include "compass/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace compass::sim {

using pauli::complex;
using pauli::PauliOperator;

inline constexpr std::size_t max_qubits = 24;

class StateVector {
public:
  StateVector() = default;
  explicit StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > max_qubits)
      throw DomainError("state exceeds the " + std::to_string(max_qubits) + "-qubit cap");
    amps_.assign(std::size_t{1} << n_qubits, complex{});
  }

  static StateVector basis_state(std::size_t n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.size())
      throw DomainError("basis index out of range");
    s.amps_[index] = 1.0;
    return s;
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  complex &operator[](std::size_t i) noexcept { return amps_[i]; }
  const complex &operator[](std::size_t i) const noexcept { return amps_[i]; }
  std::span<complex> amplitudes() noexcept { return amps_; }
  std::span<const complex> amplitudes() const noexcept { return amps_; }

  double norm() const {
    double s = 0.0;
    for (const auto &a : amps_)
      s += std::norm(a);
    return std::sqrt(s);
  }

  complex inner(const StateVector &o) const {
    complex s{};
    for (std::size_t i = 0; i < amps_.size(); ++i)
      s += std::conj(amps_[i]) * o.amps_[i];
    return s;
  }

  bool operator==(const StateVector &) const = default;

private:
  std::size_t n_qubits_ = 0;
  std::vector<complex> amps_;
};

/// Closed-shell reference: the n_electrons lowest qubits occupied.
inline StateVector hf_state(std::size_t n_qubits, int n_electrons) {
  if (n_electrons < 0 || static_cast<std::size_t>(n_electrons) > n_qubits)
    throw DomainError("cannot place " + std::to_string(n_electrons) + " electrons in " +
                      std::to_string(n_qubits) + " qubits");
  const std::uint64_t index = (std::uint64_t{1} << n_electrons) - 1;
  return StateVector::basis_state(n_qubits, index);
}

/// CSR form of a Pauli operator over the full computational basis.
class SparseOperator {
public:
  SparseOperator() = default;

  explicit SparseOperator(const PauliOperator &op, double threshold = 1e-14)
      : n_qubits_(op.n_qubits()) {
    if (n_qubits_ > max_qubits)
      throw DomainError("operator exceeds the qubit cap");
    // Terms sharing an X mask map each basis state to the same partner.
    std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, complex>>> groups;
    for (const auto &[key, c] : op.terms())
      groups[key.x].emplace_back(key.z, c * pauli::i_pow(std::popcount(key.x & key.z)));

    const std::size_t dim = std::size_t{1} << n_qubits_;
    row_ptr_.reserve(dim + 1);
    row_ptr_.push_back(0);
    for (std::uint64_t r = 0; r < dim; ++r) {
      for (const auto &[x, terms] : groups) {
        const std::uint64_t c = r ^ x;
        complex v{};
        for (const auto &[z, coef] : terms)
          v += (std::popcount(z & c) & 1) ? -coef : coef;
        if (std::abs(v) > threshold) {
          cols_.push_back(static_cast<std::uint32_t>(c));
          vals_.push_back(v);
        }
      }
      row_ptr_.push_back(cols_.size());
    }
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return vals_.size(); }

  template <typename F> void for_each_in_row(std::uint64_t r, F &&f) const {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      f(static_cast<std::uint64_t>(cols_[k]), vals_[k]);
  }

  /// <psi|A|psi>, skipping rows where psi vanishes.
  complex expectation_complex(std::span<const complex> psi) const {
    check_dim(psi.size());
    complex s{};
    for (std::size_t r = 0; r < psi.size(); ++r) {
      if (psi[r] == complex{})
        continue;
      complex acc{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        acc += vals_[k] * psi[cols_[k]];
      s += std::conj(psi[r]) * acc;
    }
    return s;
  }

  /// out = A psi, row by row.
  void apply(std::span<const complex> psi, std::span<complex> out) const {
    check_dim(psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r) {
      complex acc{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        acc += vals_[k] * psi[cols_[k]];
      out[r] = acc;
    }
  }

  /// out = A psi for hermitian A, scattering from the nonzero entries of psi.
  void apply_hermitian(std::span<const complex> psi, std::span<complex> out) const {
    check_dim(psi.size());
    std::fill(out.begin(), out.end(), complex{});
    for (std::size_t c = 0; c < psi.size(); ++c) {
      if (psi[c] == complex{})
        continue;
      for (std::size_t k = row_ptr_[c]; k < row_ptr_[c + 1]; ++k)
        out[cols_[k]] += std::conj(vals_[k]) * psi[c];
    }
  }

private:
  void check_dim(std::size_t n) const {
    if (n != dim())
      throw DomainError("state dimension does not match operator");
  }

  std::size_t n_qubits_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<complex> vals_;
};

/// Real part of <psi|H|psi>. Fails on an imaginary residue >= 1e-10.
inline double expectation(const StateVector &psi, const SparseOperator &h) {
  if (psi.n_qubits() != h.n_qubits())
    throw DomainError("state and operator qubit counts differ");
  const complex e = h.expectation_complex(psi.amplitudes());
  if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
    throw NumericalError("non-finite expectation value");
  if (std::abs(e.imag()) >= 1e-10)
    throw NumericalError("expectation has imaginary residue " + std::to_string(e.imag()));
  return e.real();
}

/// Term-by-term evaluation straight from the Pauli form.
inline double expectation(const StateVector &psi, const PauliOperator &h) {
  if (psi.n_qubits() != h.n_qubits())
    throw DomainError("state and operator qubit counts differ");
  complex e{};
  for (const auto &[key, c] : h.terms()) {
    complex t{};
    for (std::uint64_t col = 0; col < psi.size(); ++col) {
      if (psi[col] == complex{})
        continue;
      t += std::conj(psi[col ^ key.x]) * pauli::matrix_element(key, col) * psi[col];
    }
    e += c * t;
  }
  if (std::abs(e.imag()) >= 1e-10)
    throw NumericalError("expectation has imaginary residue " + std::to_string(e.imag()));
  return e.real();
}

/// Compiled anti-hermitian generator G with its exponential action plan.
///
/// The plan lists the basis states G touches (`support`) and, per support row,
/// the entries of G as positions into `support`. G maps span(support) onto
/// itself, so exp(theta G) only ever reads and writes those amplitudes.
class GeneratorCache {
public:
  GeneratorCache(PauliOperator pauli, std::size_t n_qubits)
      : pauli_(std::move(pauli)), n_qubits_(n_qubits) {
    if (pauli_.n_qubits() > n_qubits)
      throw DomainError("generator acts on more qubits than the register");
    for (const auto &[k, c] : pauli_.terms())
      if (std::abs(c.real()) > 1e-12)
        throw DomainError("generator is not anti-hermitian");
    norm_bound_ = pauli_.one_norm();
    build_plan();
    closed_form_valid_ = probe_closed_form();
  }

  GeneratorCache(const fermion::FermionGenerator &g, std::size_t n_qubits)
      : GeneratorCache(jw::jw_transform(g, n_qubits), n_qubits) {}

  const PauliOperator &pauli() const noexcept { return pauli_; }
  std::size_t n_qubits() const noexcept { return n_qubits_; }
  bool closed_form_valid() const noexcept { return closed_form_valid_; }
  double norm_bound() const noexcept { return norm_bound_; }
  std::span<const std::uint32_t> support() const noexcept { return support_; }

  /// out = G in, both indexed by support position.
  void apply_compact(std::span<const complex> in, std::span<complex> out) const {
    for (std::size_t r = 0; r < support_.size(); ++r) {
      complex acc{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        acc += vals_[k] * in[col_pos_[k]];
      out[r] = acc;
    }
  }

  void gather(std::span<const complex> psi, std::span<complex> out) const {
    for (std::size_t r = 0; r < support_.size(); ++r)
      out[r] = psi[support_[r]];
  }

  void scatter(std::span<const complex> in, std::span<complex> psi) const {
    for (std::size_t r = 0; r < support_.size(); ++r)
      psi[support_[r]] = in[r];
  }

  /// ||G^3 v + G v|| / ||v|| for a compact vector v.
  double closed_form_residual(std::span<const complex> v) const {
    const std::size_t m = support_.size();
    std::vector<complex> g1(m), g2(m), g3(m);
    apply_compact(v, g1);
    apply_compact(g1, g2);
    apply_compact(g2, g3);
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      num += std::norm(g3[r] + g1[r]);
      den += std::norm(v[r]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
  }

  /// exp(theta G) on the compact vector v, in place. `taylor` forces the
  /// series path.
  void exp_compact(std::span<complex> v, double theta, bool taylor = false) const {
    const std::size_t m = support_.size();
    thread_local std::vector<complex> g1, g2;
    if (g1.size() < m) {
      g1.resize(m);
      g2.resize(m);
    }
    if (closed_form_valid_ && !taylor) {
      apply_compact(v, std::span(g1).first(m));
      apply_compact(std::span<const complex>(g1).first(m), std::span(g2).first(m));
      const double s = std::sin(theta), c1 = 1.0 - std::cos(theta);
      for (std::size_t r = 0; r < m; ++r)
        v[r] += s * g1[r] + c1 * g2[r];
      return;
    }
    // Split into substeps with |step| * ||G|| <= 1, then sum the series until
    // the appended term drops below 1e-14.
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::abs(theta) * norm_bound_)));
    const double h = theta / static_cast<double>(steps);
    std::vector<complex> term(m), next(m);
    for (std::size_t s = 0; s < steps; ++s) {
      std::copy(v.begin(), v.end(), term.begin());
      for (int k = 1; k < 200; ++k) {
        apply_compact(term, next);
        double tn = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          next[r] *= h / k;
          v[r] += next[r];
          tn += std::norm(next[r]);
        }
        term.swap(next);
        if (std::sqrt(tn) < 1e-14)
          break;
      }
    }
  }

private:
  void build_plan() {
    const SparseOperator sparse(pauli_);
    const std::size_t dim = std::size_t{1} << n_qubits_;
    std::vector<std::uint32_t> position(dim, UINT32_MAX);
    for (std::uint64_t r = 0; r < dim; ++r) {
      bool touched = false;
      sparse.for_each_in_row(r, [&](std::uint64_t, complex) { touched = true; });
      if (touched) {
        position[r] = static_cast<std::uint32_t>(support_.size());
        support_.push_back(static_cast<std::uint32_t>(r));
      }
    }
    row_ptr_.push_back(0);
    for (auto r : support_) {
      sparse.for_each_in_row(r, [&](std::uint64_t c, complex v) {
        if (position[c] == UINT32_MAX)
          throw DomainError("generator does not map its support onto itself");
        col_pos_.push_back(position[c]);
        vals_.push_back(v);
      });
      row_ptr_.push_back(col_pos_.size());
    }
  }

  bool probe_closed_form() const {
    if (support_.empty())
      return true;
    std::mt19937_64 rng(0x5eedc0ffeeULL ^ support_.size());
    std::normal_distribution<double> normal;
    std::vector<complex> v(support_.size());
    for (int probe = 0; probe < 3; ++probe) {
      for (auto &a : v)
        a = {normal(rng), normal(rng)};
      if (closed_form_residual(v) >= 1e-12)
        return false;
    }
    return true;
  }

  PauliOperator pauli_;
  std::size_t n_qubits_ = 0;
  double norm_bound_ = 0.0;
  bool closed_form_valid_ = false;
  std::vector<std::uint32_t> support_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_pos_;
  std::vector<complex> vals_;
};

using GeneratorPtr = std::shared_ptr<const GeneratorCache>;

namespace detail {
inline thread_local std::vector<complex> compact_scratch;
inline thread_local std::vector<complex> compact_scratch2;

inline std::span<complex> scratch(std::vector<complex> &buf, std::size_t m) {
  if (buf.size() < m)
    buf.resize(m);
  return std::span(buf).first(m);
}
} // namespace detail

/// psi <- exp(theta G) psi.
inline void apply_exp_generator_inplace(StateVector &psi, const GeneratorCache &g, double theta) {
  if (!std::isfinite(theta))
    throw DomainError("non-finite generator parameter");
  if (psi.n_qubits() != g.n_qubits())
    throw DomainError("generator built for a different register size");
  if (theta == 0.0)
    return;
  auto v = detail::scratch(detail::compact_scratch, g.support().size());
  g.gather(psi.amplitudes(), v);
  if (std::all_of(v.begin(), v.end(), [](const complex &a) { return a == complex{}; }))
    return;
  g.exp_compact(v, theta);
  g.scatter(v, psi.amplitudes());
}

inline StateVector apply_exp_generator(StateVector psi, const GeneratorCache &g, double theta) {
  apply_exp_generator_inplace(psi, g, theta);
  return psi;
}

/// Shared, thread-safe cache of compiled generators keyed by operator.
class GeneratorPool {
public:
  explicit GeneratorPool(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const noexcept { return n_qubits_; }

  GeneratorPtr get(const Operator &op) {
    const auto key = key_of(op);
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    }
    auto g = std::visit(
        [&](const auto &x) {
          return std::make_shared<const GeneratorCache>(fermion::build_generator(x), n_qubits_);
        },
        op);
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(g)).first->second;
  }

  std::vector<GeneratorPtr> compile(const Ansatz &ansatz) {
    std::vector<GeneratorPtr> out;
    for (const auto &op : ansatz.operators())
      out.push_back(get(op));
    return out;
  }

private:
  static std::pair<std::vector<std::size_t>, std::vector<std::size_t>> key_of(const Operator &op) {
    return std::visit(
        [](const auto &x) {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Excitation>)
            return std::pair{fermion::qubits_of(x.particles), fermion::qubits_of(x.holes)};
          else
            return std::pair{fermion::qubits_of(x.create), fermion::qubits_of(x.destroy)};
        },
        op);
  }

  std::size_t n_qubits_;
  std::mutex mutex_;
  std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, GeneratorPtr> cache_;
};

/// Applies the generators in order: ops[0] acts first on `ref`.
inline StateVector apply_sequence(StateVector psi, std::span<const GeneratorPtr> ops,
                                  std::span<const double> params) {
  if (params.size() != ops.size())
    throw DomainError("parameter vector length " + std::to_string(params.size()) +
                      " does not match " + std::to_string(ops.size()) + " operators");
  for (std::size_t k = 0; k < ops.size(); ++k)
    apply_exp_generator_inplace(psi, *ops[k], params[k]);
  return psi;
}

inline StateVector apply_ansatz(const StateVector &ref, const Ansatz &ansatz,
                                std::span<const double> params) {
  if (params.size() != ansatz.parameter_count())
    throw DomainError("parameter vector length does not match the ansatz");
  GeneratorPool pool(ref.n_qubits());
  const auto ops = pool.compile(ansatz);
  return apply_sequence(ref, ops, params);
}

/// E(theta) = <ref| U(theta)^+ H U(theta) |ref> for a fixed operator sequence,
/// with adjoint-mode and finite-difference gradients.
class EnergyModel {
public:
  EnergyModel(std::shared_ptr<const SparseOperator> hamiltonian, StateVector reference,
              std::vector<GeneratorPtr> ops)
      : h_(std::move(hamiltonian)), ref_(std::move(reference)), ops_(std::move(ops)) {
    if (h_->n_qubits() != ref_.n_qubits())
      throw DomainError("reference and Hamiltonian qubit counts differ");
  }

  std::size_t parameter_count() const noexcept { return ops_.size(); }
  const StateVector &reference() const noexcept { return ref_; }
  const SparseOperator &hamiltonian() const noexcept { return *h_; }
  std::span<const GeneratorPtr> operators() const noexcept { return ops_; }

  StateVector prepare(std::span<const double> params) const {
    return apply_sequence(ref_, ops_, params);
  }

  double energy(std::span<const double> params) const {
    return expectation(prepare(params), *h_);
  }

  /// Energy plus exact gradient by reverse sweep:
  /// dE/dtheta_k = 2 Re <lambda_k| G_k |psi_k>.
  double energy_and_gradient(std::span<const double> params, std::span<double> grad) const {
    if (grad.size() != ops_.size())
      throw DomainError("gradient buffer has the wrong length");
    StateVector psi = prepare(params);
    const double e = expectation(psi, *h_);
    StateVector lambda(psi.n_qubits());
    h_->apply_hermitian(psi.amplitudes(), lambda.amplitudes());
    for (std::size_t k = ops_.size(); k-- > 0;) {
      const auto &g = *ops_[k];
      const std::size_t m = g.support().size();
      auto pv = detail::scratch(detail::compact_scratch, m);
      auto lv = detail::scratch(detail::compact_scratch2, m);
      g.gather(psi.amplitudes(), pv);
      g.gather(lambda.amplitudes(), lv);
      std::vector<complex> gp(m);
      g.apply_compact(pv, gp);
      complex s{};
      for (std::size_t r = 0; r < m; ++r)
        s += std::conj(lv[r]) * gp[r];
      grad[k] = 2.0 * s.real();
      if (params[k] != 0.0) {
        g.exp_compact(pv, -params[k]);
        g.exp_compact(lv, -params[k]);
        g.scatter(pv, psi.amplitudes());
        g.scatter(lv, lambda.amplitudes());
      }
    }
    for (double d : grad)
      if (!std::isfinite(d))
        throw NumericalError("non-finite gradient entry");
    return e;
  }

  std::vector<double> gradient(std::span<const double> params) const {
    std::vector<double> g(ops_.size());
    energy_and_gradient(params, g);
    return g;
  }

  /// Central differences with step h per coordinate.
  std::vector<double> finite_difference_gradient(std::span<const double> params,
                                                 double h = 1e-5) const {
    std::vector<double> x(params.begin(), params.end()), g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double x0 = x[k];
      x[k] = x0 + h;
      const double ep = energy(x);
      x[k] = x0 - h;
      const double em = energy(x);
      x[k] = x0;
      g[k] = (ep - em) / (2.0 * h);
      if (!std::isfinite(g[k]))
        throw NumericalError("non-finite finite-difference gradient");
    }
    return g;
  }

private:
  std::shared_ptr<const SparseOperator> h_;
  StateVector ref_;
  std::vector<GeneratorPtr> ops_;
};

} // namespace compass::sim
