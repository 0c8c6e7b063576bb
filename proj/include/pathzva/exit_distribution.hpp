#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pathzva/errors.hpp"

namespace pathzva {

enum class ExitSolver { Elimination, GaussSeidel };

struct ExitSolveOptions {
  ExitSolver method = ExitSolver::Elimination;
  double tolerance = 1e-14;
  std::size_t max_iterations = 1'000'000;
};

/// Absorption problem for a set L of n transient states with m exit states D.
/// `internal` is the n x n block P_LL and `exits` the n x m block P_LD, both
/// row-major.
struct ExitProblem {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> internal;
  std::vector<double> exits;
};

namespace detail {

inline void check_exit_rows(const std::vector<double>& mu, std::size_t n, std::size_t m) {
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += mu[x * m + j];
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConvergenceError("exit distribution row " + std::to_string(x) + " sums to " + std::to_string(sum));
  }
}

// Grassmann-Taksar-Heyman style elimination: only additions and divisions of
// non-negative numbers, so tiny exit probabilities keep full relative accuracy.
inline std::vector<double> solve_by_elimination(const ExitProblem& prob) {
  const std::size_t n = prob.n, m = prob.m, w = n + m;
  std::vector<double> a(n * w, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * w + j] = prob.internal[i * n + j];
    for (std::size_t j = 0; j < m; ++j) a[i * w + n + j] = prob.exits[i * m + j];
  }
  std::vector<double> leave(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += a[k * w + j];
    for (std::size_t j = 0; j < m; ++j) s += a[k * w + n + j];
    if (!(s > 0.0)) throw ConvergenceError("exit distribution: a merged state cannot reach any exit");
    leave[k] = s;
    for (std::size_t i = 0; i < k; ++i) {
      double f = a[i * w + k];
      if (f == 0.0) continue;
      f /= s;
      for (std::size_t j = 0; j < k; ++j) a[i * w + j] += f * a[k * w + j];
      for (std::size_t j = 0; j < m; ++j) a[i * w + n + j] += f * a[k * w + n + j];
      a[i * w + k] = 0.0;
    }
  }
  std::vector<double> mu(n * m, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      double v = a[k * w + n + j];
      for (std::size_t i = 0; i < k; ++i) v += a[k * w + i] * mu[i * m + j];
      mu[k * m + j] = v / leave[k];
    }
  }
  return mu;
}

inline std::vector<double> solve_by_gauss_seidel(const ExitProblem& prob, const ExitSolveOptions& opts) {
  const std::size_t n = prob.n, m = prob.m;
  std::vector<double> mu(n * m, 0.0);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    double change = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      double stay = prob.internal[x * n + x];
      if (!(stay < 1.0)) throw ConvergenceError("exit distribution: absorbing state inside merged set");
      for (std::size_t j = 0; j < m; ++j) {
        double v = prob.exits[x * m + j];
        for (std::size_t y = 0; y < n; ++y)
          if (y != x) v += prob.internal[x * n + y] * mu[y * m + j];
        v /= 1.0 - stay;
        change = std::max(change, std::abs(v - mu[x * m + j]));
        mu[x * m + j] = v;
      }
    }
    if (change <= opts.tolerance) return mu;
  }
  throw ConvergenceError("exit distribution: Gauss-Seidel did not converge within " +
                         std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace detail

/// Solves mu = P_LD + P_LL mu, the distribution of the first state in D hit
/// from each state of L. Returns the n x m matrix mu, row-major.
inline std::vector<double> solve_exit_distribution(const ExitProblem& prob, const ExitSolveOptions& opts = {}) {
  if (prob.internal.size() != prob.n * prob.n || prob.exits.size() != prob.n * prob.m)
    throw ConfigError("exit distribution: block sizes do not match");
  if (prob.m == 0) throw ConvergenceError("exit distribution: merged set has no exits");
  std::vector<double> mu = opts.method == ExitSolver::Elimination ? detail::solve_by_elimination(prob)
                                                                   : detail::solve_by_gauss_seidel(prob, opts);
  detail::check_exit_rows(mu, prob.n, prob.m);
  return mu;
}

}  // namespace pathzva
