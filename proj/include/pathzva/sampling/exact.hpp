#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/preprocess.hpp"
#include "pathzva/state_indexer.hpp"

namespace pathzva {

enum class ExactMethod { Auto, GaussSeidel, SparseLU };

struct ExactOptions {
  std::size_t max_states = 2'000'000;
  ExactMethod method = ExactMethod::Auto;
  /// Auto switches from the direct solver to Gauss-Seidel above this size.
  std::size_t direct_limit = 20'000;
  /// Gauss-Seidel stops when no component changes by more than
  /// tolerance * max(|pi(x)|, floor).
  double tolerance = 1e-12;
  double floor = 1e-300;
  std::size_t max_iterations = 10'000'000;
};

struct ExactResult {
  double pi = 0.0;                 // hitting probability from the initial state
  std::vector<double> values;      // per transient state, indexed as `states`
  std::vector<State> states;       // transient states in discovery order
  std::size_t iterations = 0;      // Gauss-Seidel sweeps; 0 for the direct solver
  bool direct = false;
};

/// Optional replacement rows keyed by descriptor, e.g. the HPC-reduced rows of
/// a pre-processing result. Targets are descriptors as well.
using RowOverrides = std::unordered_map<State, std::vector<std::pair<State, double>>, StateHash>;

/// Overrides of the reduced chain of a pre-processing run.
inline RowOverrides overrides_of(const PreprocessResult& pre) {
  RowOverrides out;
  for (const auto& [i, row] : pre.reduced().overrides()) {
    auto& dst = out[pre.space().descriptor(i)];
    for (const Edge& e : row) dst.emplace_back(pre.space().descriptor(e.target), e.probability);
  }
  return out;
}

/// Probability of hitting the goal before the taboo state, by explicit
/// construction of the reachable chain with goal and taboo states absorbing.
inline ExactResult exact_hitting_probability(const MarkovModel& model, const ExactOptions& opts = {},
                                             const RowOverrides* overrides = nullptr) {
  StateIndexer idx;
  idx.index(model.initial_state());
  struct Coef {
    std::int32_t col;
    double p;
  };
  std::vector<std::vector<Coef>> rows;
  std::vector<double> to_goal;
  for (std::size_t head = 0; head < idx.size(); ++head) {
    State x = idx.descriptor(static_cast<std::int32_t>(head));
    std::vector<std::pair<State, double>> succ;
    const std::vector<std::pair<State, double>>* use = nullptr;
    if (overrides) {
      auto it = overrides->find(x);
      if (it != overrides->end()) use = &it->second;
    }
    if (!use) {
      for (auto& st : normalized_successors(model, x)) succ.emplace_back(std::move(st.target), st.probability);
      use = &succ;
    }
    std::vector<Coef> row;
    double g = 0.0;
    for (const auto& [z, p] : *use) {
      if (model.is_goal(z)) {
        g += p;
      } else if (model.is_taboo(z)) {
        continue;
      } else {
        auto [j, inserted] = idx.index(z);
        if (inserted && idx.size() > opts.max_states)
          throw BudgetExceeded("exact solver: more than " + std::to_string(opts.max_states) + " transient states");
        bool merged = false;
        for (auto& c : row)
          if (c.col == j) {
            c.p += p;
            merged = true;
          }
        if (!merged) row.push_back({j, p});
      }
    }
    rows.push_back(std::move(row));
    to_goal.push_back(g);
  }

  const std::size_t n = idx.size();
  ExactResult out;
  out.values.assign(n, 0.0);
  bool direct = opts.method == ExactMethod::SparseLU || (opts.method == ExactMethod::Auto && n <= opts.direct_limit);
  if (direct) {
    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t i = 0; i < n; ++i) {
      double diag = 1.0;
      for (const auto& c : rows[i]) {
        if (static_cast<std::size_t>(c.col) == i)
          diag -= c.p;
        else
          trips.emplace_back(static_cast<int>(i), c.col, -c.p);
      }
      trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
    }
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) b[static_cast<Eigen::Index>(i)] = to_goal[i];
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ConvergenceError("exact solver: sparse LU factorisation failed");
    Eigen::VectorXd sol = lu.solve(b);
    if (lu.info() != Eigen::Success) throw ConvergenceError("exact solver: sparse LU solve failed");
    for (std::size_t i = 0; i < n; ++i) out.values[i] = sol[static_cast<Eigen::Index>(i)];
    out.direct = true;
  } else {
    auto& v = out.values;
    std::size_t it = 0;
    for (; it < opts.max_iterations; ++it) {
      bool converged = true;
      for (std::size_t i = 0; i < n; ++i) {
        double self = 0.0, acc = to_goal[i];
        for (const auto& c : rows[i]) {
          if (static_cast<std::size_t>(c.col) == i)
            self += c.p;
          else
            acc += c.p * v[static_cast<std::size_t>(c.col)];
        }
        double nv = acc / (1.0 - self);
        if (std::abs(nv - v[i]) > opts.tolerance * std::max(std::abs(nv), opts.floor)) converged = false;
        v[i] = nv;
      }
      if (converged) break;
    }
    if (it == opts.max_iterations) throw ConvergenceError("exact solver: Gauss-Seidel did not converge");
    out.iterations = it + 1;
  }
  out.pi = out.values[0];
  out.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.states.push_back(idx.descriptor(static_cast<std::int32_t>(i)));
  return out;
}

}  // namespace pathzva
