#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pathzva/pathzva.hpp"

namespace testing_support {

using namespace pathzva;

/// Small explicit chain on integer states. Unlisted states with no rows are
/// invalid; goal and taboo sets are given explicitly.
class TableModel final : public MarkovModel {
 public:
  struct Arc {
    int target;
    double weight;
    int order;  // negative: leave unset for automatic assignment
  };

  TableModel(int initial, std::vector<int> goals, std::vector<int> taboos, std::map<int, std::vector<Arc>> rows,
             double epsilon = 0.1, WeightKind kind = WeightKind::Probability)
      : initial_(initial),
        goals_(std::move(goals)),
        taboos_(std::move(taboos)),
        rows_(std::move(rows)),
        eps_(epsilon),
        kind_(kind) {}

  std::string name() const override { return "table"; }
  State initial_state() const override { return {initial_}; }
  bool is_goal(const State& s) const override { return contains(goals_, s[0]); }
  bool is_taboo(const State& s) const override { return contains(taboos_, s[0]); }
  double epsilon() const override { return eps_; }
  WeightKind weight_kind() const override { return kind_; }

  std::vector<Transition> successors(const State& s) const override {
    std::vector<Transition> out;
    auto it = rows_.find(s[0]);
    if (it == rows_.end()) return out;
    for (const auto& a : it->second) {
      Transition t{{a.target}, a.weight, std::nullopt};
      if (a.order >= 0) t.order = EpsilonOrder(a.order);
      out.push_back(t);
    }
    return out;
  }

  std::optional<double> sojourn_rate(const State& s) const override {
    if (kind_ != WeightKind::Rate) return std::nullopt;
    double total = 0.0;
    for (const auto& t : successors(s)) total += t.weight;
    return total;
  }

 private:
  static bool contains(const std::vector<int>& v, int x) {
    for (int y : v)
      if (y == x) return true;
    return false;
  }

  int initial_;
  std::vector<int> goals_, taboos_;
  std::map<int, std::vector<Arc>> rows_;
  double eps_;
  WeightKind kind_;
};

/// Merged explicit chain built by breadth-first search from the initial state,
/// independent of the pre-processing code: node 0 is s, goal and taboo
/// descriptors collapse into one node each.
struct ExplicitChain {
  struct Arc {
    int target;
    double p;
    int order;
  };
  std::vector<State> states;
  std::vector<std::vector<Arc>> rows;
  int goal = -1;
  int taboo = -1;
};

/// Rows come from `rows_of(descriptor)`, which returns (target, p, order).
inline ExplicitChain build_chain(const MarkovModel& model,
                                 const std::function<std::vector<std::tuple<State, double, int>>(const State&)>& rows_of,
                                 std::size_t cap = 200'000) {
  ExplicitChain c;
  std::unordered_map<State, int, StateHash> ids;
  auto node = [&](const State& s, bool allow_terminal) -> int {
    if (allow_terminal && model.is_goal(s)) {
      if (c.goal < 0) {
        c.goal = static_cast<int>(c.states.size());
        c.states.push_back(s);
        c.rows.emplace_back();
      }
      return c.goal;
    }
    if (allow_terminal && model.is_taboo(s)) {
      if (c.taboo < 0) {
        c.taboo = static_cast<int>(c.states.size());
        c.states.push_back(s);
        c.rows.emplace_back();
      }
      return c.taboo;
    }
    auto [it, inserted] = ids.try_emplace(s, static_cast<int>(c.states.size()));
    if (inserted) {
      c.states.push_back(s);
      c.rows.emplace_back();
    }
    return it->second;
  };
  node(model.initial_state(), false);
  for (std::size_t head = 0; head < c.states.size(); ++head) {
    if (static_cast<int>(head) == c.goal || static_cast<int>(head) == c.taboo) continue;
    if (c.states.size() > cap) throw std::runtime_error("build_chain: cap exceeded");
    State x = c.states[head];
    std::vector<ExplicitChain::Arc> row;
    for (auto& [z, p, r] : rows_of(x)) {
      int j = node(z, true);
      bool merged = false;
      for (auto& a : row)
        if (a.target == j) {
          a.p += p;
          a.order = std::min(a.order, r);
          merged = true;
        }
      if (!merged) row.push_back({j, p, r});
    }
    c.rows[head] = std::move(row);
  }
  return c;
}

/// Model rows, after embedding and order assignment.
inline ExplicitChain model_chain(const MarkovModel& model) {
  return build_chain(model, [&](const State& x) {
    std::vector<std::tuple<State, double, int>> out;
    for (auto& st : normalized_successors(model, x)) out.emplace_back(st.target, st.probability, st.order.value());
    return out;
  });
}

/// Rows of the HPC-reduced chain of `pre`, model rows elsewhere.
inline ExplicitChain reduced_chain(const MarkovModel& model, const PreprocessResult& pre, std::size_t cap = 200'000) {
  std::unordered_map<State, std::vector<std::tuple<State, double, int>>, StateHash> over;
  for (const auto& [i, row] : pre.reduced().overrides()) {
    auto& dst = over[pre.space().descriptor(i)];
    for (const Edge& e : row) dst.emplace_back(pre.space().descriptor(e.target), e.probability, e.order.value());
  }
  return build_chain(model, [&](const State& x) {
    auto it = over.find(x);
    if (it != over.end()) return it->second;
    std::vector<std::tuple<State, double, int>> out;
    for (auto& st : normalized_successors(model, x)) out.emplace_back(st.target, st.probability, st.order.value());
    return out;
  }, cap);
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Shortest order distances from node 0 by Bellman-Ford iteration.
inline std::vector<int> bellman_ford_from_start(const ExplicitChain& c) {
  std::vector<int> d(c.states.size(), kInf);
  d[0] = 0;
  for (std::size_t round = 0; round < c.states.size(); ++round) {
    bool changed = false;
    for (std::size_t x = 0; x < c.states.size(); ++x) {
      if (d[x] >= kInf) continue;
      for (const auto& a : c.rows[x])
        if (d[x] + a.order < d[static_cast<std::size_t>(a.target)]) {
          d[static_cast<std::size_t>(a.target)] = d[x] + a.order;
          changed = true;
        }
    }
    if (!changed) break;
  }
  return d;
}

/// Order distance from the initial state to the goal by FIFO label
/// correction over model rows, expanding only states within `bound`. Returns
/// kInf when the goal is farther away than `bound`.
inline int bounded_goal_distance(const MarkovModel& model, int bound) {
  std::unordered_map<State, int, StateHash> dist;
  std::deque<State> queue;
  const State s = model.initial_state();
  dist[s] = 0;
  queue.push_back(s);
  int best = kInf;
  while (!queue.empty()) {
    State x = std::move(queue.front());
    queue.pop_front();
    const int dx = dist[x];
    for (auto& st : normalized_successors(model, x)) {
      const int dz = dx + st.order.value();
      if (dz > bound) continue;
      if (model.is_goal(st.target)) {
        best = std::min(best, dz);
        continue;
      }
      if (model.is_taboo(st.target)) continue;
      auto [it, inserted] = dist.try_emplace(st.target, dz);
      if (!inserted && it->second <= dz) continue;
      it->second = dz;
      queue.push_back(st.target);
    }
  }
  return best;
}

/// Hitting probabilities of the goal before the taboo node by dense LU.
inline std::vector<double> dense_hitting(const ExplicitChain& c) {
  const auto n = static_cast<Eigen::Index>(c.states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (x == c.goal) {
      b[x] = 1.0;
      continue;
    }
    if (x == c.taboo) continue;
    for (const auto& r : c.rows[static_cast<std::size_t>(x)]) a(x, r.target) -= r.p;
  }
  Eigen::VectorXd sol = a.partialPivLu().solve(b);
  return std::vector<double>(sol.data(), sol.data() + n);
}

/// Sum of p-bar probabilities over all paths from `x` to g with total order
/// exactly `target_order`, by exhaustive depth-first enumeration. Paths stop at
/// g and at Gamma states (shortcut of probability one at order zero); they may
/// not leave Lambda otherwise. Requires no order-0 cycles.
inline double enumerate_dominant(const PreprocessResult& pre, std::int32_t x, int target_order, int budget = 0) {
  if (x == pre.goal() || pre.in_gamma(x)) return budget == target_order ? 1.0 : 0.0;
  if (!pre.in_lambda(x) || pre.space().is_terminal(x)) return 0.0;
  double total = 0.0;
  for (const Edge& e : pre.row(x)) {
    int next = budget + e.order.value();
    if (next > target_order) continue;
    total += e.probability * enumerate_dominant(pre, e.target, target_order, next);
  }
  return total;
}

}  // namespace testing_support
