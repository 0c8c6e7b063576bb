#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/exit_distribution.hpp"
#include "pathzva/state_space.hpp"

namespace pathzva {

/// One removed high-probability cycle.
struct HpcRecord {
  std::int32_t trigger = -1;
  std::vector<std::int32_t> members;  // L, ascending index
  std::vector<std::int32_t> exits;    // D, in first-seen order
};

struct ForwardResult {
  std::vector<std::int32_t> lambda;      // ascending (d_forward, index)
  std::vector<EpsilonOrder> d_forward;   // indexed by state; infinity when unreached
  std::vector<bool> in_lambda;           // indexed by state
  std::int32_t goal = -1;
  std::vector<HpcRecord> hpcs;
  std::size_t loop_detect_calls = 0;
};

/// Finds the order-0 strongly connected component through `trigger` and, when
/// it is a genuine cycle, replaces the rows of its members by their exit
/// distributions. A is the order-0 forward closure of the trigger, B the
/// backward closure restricted to A, and L = B. Returns nothing for a false
/// trigger (a singleton without an order-0 self-loop).
inline std::optional<HpcRecord> loop_detect(StateSpace& space, ReducedChain& reduced, std::int32_t trigger,
                                            const ExitSolveOptions& solver = {}) {
  std::vector<std::int32_t> a{trigger};
  std::unordered_set<std::int32_t> in_a{trigger};
  for (std::size_t head = 0; head < a.size(); ++head) {
    for (const Edge& e : reduced.row(space, a[head])) {
      if (e.order == kZeroOrder && in_a.insert(e.target).second) a.push_back(e.target);
    }
  }

  std::unordered_map<std::int32_t, std::vector<std::int32_t>> preds;
  for (std::int32_t x : a) {
    for (const Edge& e : reduced.row(space, x)) {
      if (e.order == kZeroOrder && in_a.count(e.target)) preds[e.target].push_back(x);
    }
  }
  std::vector<std::int32_t> b{trigger};
  std::unordered_set<std::int32_t> in_b{trigger};
  for (std::size_t head = 0; head < b.size(); ++head) {
    auto it = preds.find(b[head]);
    if (it == preds.end()) continue;
    for (std::int32_t w : it->second) {
      if (in_b.insert(w).second) b.push_back(w);
    }
  }

  if (b.size() == 1) {
    bool self_loop = false;
    for (const Edge& e : reduced.row(space, trigger)) self_loop |= (e.target == trigger && e.order == kZeroOrder);
    if (!self_loop) return std::nullopt;
  }

  HpcRecord rec;
  rec.trigger = trigger;
  rec.members = b;
  std::sort(rec.members.begin(), rec.members.end());
  std::unordered_map<std::int32_t, std::size_t> pos_l, pos_d;
  for (std::size_t i = 0; i < rec.members.size(); ++i) pos_l[rec.members[i]] = i;
  std::vector<Row> rows;
  rows.reserve(rec.members.size());
  for (std::int32_t x : rec.members) {
    rows.push_back(reduced.row(space, x));
    for (const Edge& e : rows.back()) {
      if (!pos_l.count(e.target) && !pos_d.count(e.target)) {
        pos_d[e.target] = rec.exits.size();
        rec.exits.push_back(e.target);
      }
    }
  }

  const std::size_t n = rec.members.size(), m = rec.exits.size();
  ExitProblem prob;
  prob.n = n;
  prob.m = m;
  prob.internal.assign(n * n, 0.0);
  prob.exits.assign(n * m, 0.0);
  std::vector<EpsilonOrder> min_exit(m, kInfiniteOrder);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Edge& e : rows[i]) {
      if (auto it = pos_l.find(e.target); it != pos_l.end()) {
        prob.internal[i * n + it->second] += e.probability;
      } else {
        std::size_t j = pos_d.at(e.target);
        prob.exits[i * m + j] += e.probability;
        min_exit[j] = std::min(min_exit[j], e.order);
      }
    }
  }
  std::vector<double> mu = solve_exit_distribution(prob, solver);

  // Every member reaches every other at order 0, so the exit towards z has
  // order min_w r_wz relative to the cheapest exit of the whole cycle.
  EpsilonOrder base = *std::min_element(min_exit.begin(), min_exit.end());
  for (std::size_t i = 0; i < n; ++i) {
    Row row;
    for (std::size_t j = 0; j < m; ++j) {
      double p = mu[i * m + j];
      if (p > 0.0) row.push_back(Edge{rec.exits[j], p, min_exit[j].minus(base)});
    }
    reduced.set_override(rec.members[i], std::move(row));
  }
  return rec;
}

namespace detail {

class ForwardSearch {
 public:
  ForwardSearch(StateSpace& space, ReducedChain& reduced, const ExitSolveOptions& solver)
      : space_(space), reduced_(reduced), solver_(solver) {}

  ForwardResult run() {
    ensure(space_.initial());
    dist_[0] = kZeroOrder;
    push(space_.initial());
    while (true) {
      drain_queue();
      if (!space_.goal()) throw GoalUnreachable("goal state unreachable from the initial state (pi = 0)");
      if (!merge_missed_cycles()) break;
    }
    return collect();
  }

 private:
  using Entry = std::tuple<int, std::int32_t>;

  void ensure(std::int32_t i) {
    auto need = static_cast<std::size_t>(i) + 1;
    if (dist_.size() < need) {
      dist_.resize(need, kInfiniteOrder);
      settled_.resize(need, kInfiniteOrder);
      processed_.resize(need, false);
    }
  }

  void push(std::int32_t i) { heap_.emplace(dist_[static_cast<std::size_t>(i)].value(), i); }

  EpsilonOrder goal_distance() const {
    auto g = space_.goal();
    if (!g || static_cast<std::size_t>(*g) >= dist_.size()) return kInfiniteOrder;
    return dist_[static_cast<std::size_t>(*g)];
  }

  void drain_queue() {
    while (!heap_.empty()) {
      auto [d, x] = heap_.top();
      if (EpsilonOrder(d) > goal_distance()) break;
      heap_.pop();
      auto k = static_cast<std::size_t>(x);
      if (dist_[k].value() != d || settled_[k].value() == d) continue;
      settled_[k] = dist_[k];
      processed_[k] = true;
      if (!space_.is_terminal(x)) relax_from(x);
    }
  }

  void relax_from(std::int32_t start) {
    std::deque<std::int32_t> work{start};
    while (!work.empty()) {
      std::int32_t y = work.front();
      work.pop_front();
      const EpsilonOrder dy = dist_[static_cast<std::size_t>(y)];
      Row row = reduced_.row(space_, y);
      for (const Edge& e : row) {
        ensure(e.target);
        auto kz = static_cast<std::size_t>(e.target);
        EpsilonOrder nd = dy + e.order;
        if (nd < dist_[kz]) {
          dist_[kz] = nd;
          push(e.target);
        }
        if (e.order == kZeroOrder && processed_[kz] && dist_[kz] == dy && !space_.is_terminal(e.target)) {
          if (handle_trigger(e.target, work, y) == Merge::IncludesCurrent) break;
        }
      }
    }
  }

  enum class Merge { None, Elsewhere, IncludesCurrent };

  Merge handle_trigger(std::int32_t z, std::deque<std::int32_t>& work, std::int32_t current) {
    ++loop_detect_calls_;
    auto rec = loop_detect(space_, reduced_, z, solver_);
    if (!rec) return Merge::None;
    const EpsilonOrder dz = dist_[static_cast<std::size_t>(z)];
    bool current_merged = false;
    for (std::int32_t w : rec->members) {
      ensure(w);
      auto kw = static_cast<std::size_t>(w);
      if (dz < dist_[kw]) {
        dist_[kw] = dz;
        push(w);
      }
      if (processed_[kw]) work.push_back(w);
      current_merged |= (w == current);
    }
    for (std::int32_t x : rec->exits) ensure(x);
    hpcs_.push_back(std::move(*rec));
    return current_merged ? Merge::IncludesCurrent : Merge::Elsewhere;
  }

  bool merge_missed_cycles() {
    const EpsilonOrder dg = goal_distance();
    for (std::size_t k = 0; k < dist_.size(); ++k) {
      auto x = static_cast<std::int32_t>(k);
      if (!processed_[k] || dist_[k] > dg || space_.is_terminal(x)) continue;
      Row row = reduced_.row(space_, x);
      for (const Edge& e : row) {
        ensure(e.target);
        auto kz = static_cast<std::size_t>(e.target);
        if (e.order != kZeroOrder || !processed_[kz] || dist_[kz] != dist_[k] || space_.is_terminal(e.target)) continue;
        std::deque<std::int32_t> work;
        if (handle_trigger(e.target, work, x) == Merge::None) continue;
        for (std::int32_t w : work) relax_from(w);
        return true;
      }
    }
    return false;
  }

  ForwardResult collect() {
    ForwardResult out;
    ensure(static_cast<std::int32_t>(space_.size()) - 1);
    out.goal = *space_.goal();
    const EpsilonOrder dg = goal_distance();
    out.d_forward = dist_;
    out.in_lambda.assign(dist_.size(), false);
    for (std::size_t k = 0; k < dist_.size(); ++k) {
      if (processed_[k] && dist_[k] <= dg) {
        out.in_lambda[k] = true;
        out.lambda.push_back(static_cast<std::int32_t>(k));
      }
    }
    std::sort(out.lambda.begin(), out.lambda.end(), [&](std::int32_t a, std::int32_t b) {
      return std::make_pair(dist_[static_cast<std::size_t>(a)], a) < std::make_pair(dist_[static_cast<std::size_t>(b)], b);
    });
    out.hpcs = std::move(hpcs_);
    out.loop_detect_calls = loop_detect_calls_;
    return out;
  }

  StateSpace& space_;
  ReducedChain& reduced_;
  ExitSolveOptions solver_;
  std::vector<EpsilonOrder> dist_;
  std::vector<EpsilonOrder> settled_;
  std::vector<bool> processed_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
  std::vector<HpcRecord> hpcs_;
  std::size_t loop_detect_calls_ = 0;
};

}  // namespace detail

/// Dijkstra-style exploration from the initial state in (order, discovery
/// index) priority, removing high-probability cycles as they are met. States
/// whose distance drops after a merge are re-opened, so the returned distances
/// are exact for the reduced chain.
inline ForwardResult forward_phase(StateSpace& space, ReducedChain& reduced, const ExitSolveOptions& solver = {}) {
  return detail::ForwardSearch(space, reduced, solver).run();
}

}  // namespace pathzva
