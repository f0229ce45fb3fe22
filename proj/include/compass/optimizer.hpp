/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Bound-constrained quasi-Newton minimizer.
//
// Limited-memory BFGS on the free variables with gradient projection onto a
// box, and a strong-Wolfe line search capped at the largest feasible step.

#include "compass/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace compass::opt {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// f(x, grad) returns the objective and writes the gradient.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct Settings {
  std::size_t memory = 10;
  std::size_t max_evaluations = 10000;
  double gtol = 1e-8;  ///< projected-gradient infinity norm
  double ftol = 1e-12; ///< absolute objective change between iterations
  double c1 = 1e-4;
  double c2 = 0.9;
};

struct Result {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> history; ///< best-so-far objective after each iteration
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a)
    m = std::max(m, std::abs(v));
  return m;
}

class Evaluator {
public:
  Evaluator(const Objective &f, std::size_t n, std::size_t cap) : f_(f), best_x_(n), cap_(cap) {}

  double operator()(std::span<const double> x, std::span<double> g) {
    if (count_ >= cap_)
      throw Exhausted{};
    ++count_;
    const double v = f_(x, g);
    if (!std::isfinite(v))
      throw NumericalError("objective returned a non-finite value");
    if (v < best_f_) {
      best_f_ = v;
      std::copy(x.begin(), x.end(), best_x_.begin());
    }
    return v;
  }

  struct Exhausted {};

  std::size_t count() const noexcept { return count_; }
  double best_f() const noexcept { return best_f_; }
  const std::vector<double> &best_x() const noexcept { return best_x_; }

private:
  const Objective &f_;
  std::vector<double> best_x_;
  double best_f_ = inf;
  std::size_t count_ = 0;
  std::size_t cap_;
};

/// Zeroes gradient components that push against an active bound.
inline void project_gradient(std::span<const double> x, std::span<const double> g,
                             std::span<const double> lo, std::span<const double> hi,
                             std::span<double> pg) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    pg[i] = g[i];
    if ((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0))
      pg[i] = 0.0;
  }
}

inline double cubic_min(double a, double fa, double da, double b, double fb, double db) {
  // Minimizer of the Hermite cubic through (a, fa, da) and (b, fb, db),
  // falling back to bisection when it is ill-defined.
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0)
    return 0.5 * (a + b);
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
  const double lo = std::min(a, b), hi = std::max(a, b);
  if (!std::isfinite(t) || t <= lo + 0.1 * (hi - lo) || t >= hi - 0.1 * (hi - lo))
    return 0.5 * (a + b);
  return t;
}

} // namespace detail

/// Minimizes f over the box [lower, upper] starting from x0 (projected into
/// the box). Returns the best point visited; `converged` is false when the
/// evaluation cap was reached first.
inline Result minimize(const Objective &f, std::vector<double> x0, std::vector<double> lower,
                       std::vector<double> upper, const Settings &s = {}) {
  const std::size_t n = x0.size();
  if (lower.empty())
    lower.assign(n, -inf);
  if (upper.empty())
    upper.assign(n, inf);
  if (lower.size() != n || upper.size() != n)
    throw DomainError("bound vectors do not match the parameter count");
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] > upper[i])
      throw DomainError("lower bound exceeds upper bound");
    x0[i] = std::clamp(x0[i], lower[i], upper[i]);
  }

  detail::Evaluator eval(f, n, s.max_evaluations);
  Result r;
  std::vector<double> x = x0, g(n), pg(n), d(n), xn(n), gn(n);
  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;

  try {
    double fx = eval(x, g);
    r.history.push_back(fx);
    if (n == 0) {
      r.converged = true;
    }
    while (n > 0) {
      detail::project_gradient(x, g, lower, upper, pg);
      if (detail::inf_norm(pg) < s.gtol) {
        r.converged = true;
        break;
      }

      // Two-loop recursion on the projected gradient; active coordinates stay put.
      d = pg;
      std::vector<double> alpha(S.size());
      for (std::size_t k = S.size(); k-- > 0;) {
        alpha[k] = rho[k] * detail::dot(S[k], d);
        for (std::size_t i = 0; i < n; ++i)
          d[i] -= alpha[k] * Y[k][i];
      }
      if (!S.empty()) {
        const double gamma = detail::dot(S.back(), Y.back()) / detail::dot(Y.back(), Y.back());
        for (auto &v : d)
          v *= gamma;
      }
      for (std::size_t k = 0; k < S.size(); ++k) {
        const double beta = rho[k] * detail::dot(Y[k], d);
        for (std::size_t i = 0; i < n; ++i)
          d[i] += (alpha[k] - beta) * S[k][i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = -d[i];
        if (pg[i] == 0.0)
          d[i] = 0.0;
      }
      double slope = detail::dot(d, g);
      if (!(slope < 0.0)) {
        S.clear();
        Y.clear();
        rho.clear();
        for (std::size_t i = 0; i < n; ++i)
          d[i] = -pg[i];
        slope = detail::dot(d, g);
      }

      // Largest step keeping x + a d inside the box.
      double a_max = inf;
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0.0)
          a_max = std::min(a_max, (upper[i] - x[i]) / d[i]);
        else if (d[i] < 0.0)
          a_max = std::min(a_max, (lower[i] - x[i]) / d[i]);
      }
      double a = 1.0;
      if (S.empty())
        a = std::min(1.0, 1.0 / detail::inf_norm(d));
      a = std::min(a, a_max);

      auto phi = [&](double step, std::vector<double> &gx) {
        for (std::size_t i = 0; i < n; ++i)
          xn[i] = std::clamp(x[i] + step * d[i], lower[i], upper[i]);
        return eval(xn, gx);
      };

      // Strong-Wolfe bracketing and zoom.
      double a_prev = 0.0, f_prev = fx, d_prev = slope;
      double a_acc = 0.0, f_acc = fx;
      std::vector<double> g_acc = g;
      bool accepted = false;
      for (int it = 0; it < 30 && !accepted; ++it) {
        const double fa = phi(a, gn);
        const double da = detail::dot(gn, d);
        auto zoom = [&](double lo_a, double lo_f, double lo_d, double hi_a, double hi_f,
                        double hi_d) {
          for (int z = 0; z < 30; ++z) {
            const double t = detail::cubic_min(lo_a, lo_f, lo_d, hi_a, hi_f, hi_d);
            const double ft = phi(t, gn);
            const double dt = detail::dot(gn, d);
            if (ft > fx + s.c1 * t * slope || ft >= lo_f) {
              hi_a = t;
              hi_f = ft;
              hi_d = dt;
            } else {
              if (std::abs(dt) <= -s.c2 * slope) {
                a_acc = t, f_acc = ft, g_acc = gn;
                return;
              }
              if (dt * (hi_a - lo_a) >= 0.0) {
                hi_a = lo_a;
                hi_f = lo_f;
                hi_d = lo_d;
              }
              lo_a = t;
              lo_f = ft;
              lo_d = dt;
            }
            if (std::abs(hi_a - lo_a) < 1e-16 * std::max(1.0, std::abs(lo_a)))
              break;
          }
          // Interval collapsed: keep the best sufficient-decrease point found.
          if (lo_a > 0.0) {
            a_acc = lo_a;
            f_acc = phi(lo_a, g_acc);
          }
        };
        if (fa > fx + s.c1 * a * slope || (it > 0 && fa >= f_prev)) {
          zoom(a_prev, f_prev, d_prev, a, fa, da);
          accepted = true;
        } else if (std::abs(da) <= -s.c2 * slope) {
          a_acc = a, f_acc = fa, g_acc = gn;
          accepted = true;
        } else if (da >= 0.0) {
          zoom(a, fa, da, a_prev, f_prev, d_prev);
          accepted = true;
        } else if (a >= a_max) {
          // Blocked by a bound while still descending.
          a_acc = a, f_acc = fa, g_acc = gn;
          accepted = true;
        } else {
          a_prev = a, f_prev = fa, d_prev = da;
          a = std::min(2.0 * a, a_max);
        }
      }

      ++r.iterations;
      if (a_acc <= 0.0) {
        // No progress along d. Retry once from steepest descent, then stop.
        if (!S.empty()) {
          S.clear();
          Y.clear();
          rho.clear();
          r.history.push_back(eval.best_f());
          continue;
        }
        // Steepest descent cannot lower f either: the objective is flat to
        // rounding along d, i.e. the energy change is zero.
        r.history.push_back(eval.best_f());
        r.converged = true;
        break;
      }

      std::vector<double> sv(n), yv(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = std::clamp(x[i] + a_acc * d[i], lower[i], upper[i]);
        sv[i] = xi - x[i];
        yv[i] = g_acc[i] - g[i];
        x[i] = xi;
      }
      const double df = fx - f_acc;
      fx = f_acc;
      g = g_acc;
      r.history.push_back(eval.best_f());

      const double sy = detail::dot(sv, yv);
      if (sy > 1e-12 * detail::dot(yv, yv)) {
        S.push_back(std::move(sv));
        Y.push_back(std::move(yv));
        rho.push_back(1.0 / sy);
        if (S.size() > s.memory) {
          S.pop_front();
          Y.pop_front();
          rho.pop_front();
        }
      }
      if (std::abs(df) < s.ftol) {
        r.converged = true;
        break;
      }
    }
  } catch (const detail::Evaluator::Exhausted &) {
    r.converged = false;
  }

  r.x = eval.best_x();
  r.f = eval.best_f();
  r.evaluations = eval.count();
  if (r.history.empty() || r.history.back() != r.f)
    r.history.push_back(r.f);
  return r;
}

} // namespace compass::opt
