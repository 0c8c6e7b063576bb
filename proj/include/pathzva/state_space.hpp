#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/state_indexer.hpp"

namespace pathzva {

struct Edge {
  std::int32_t target = -1;
  double probability = 0.0;
  EpsilonOrder order;
};

using Row = std::vector<Edge>;

enum class NodeKind : std::uint8_t { Regular, Goal, Taboo };

/// Explicit, lazily expanded view of a model. Every goal descriptor maps to one
/// goal index and every taboo descriptor to one taboo index; the initial state
/// always gets index 0 and stays regular. Rows merge parallel transitions to the
/// same index (probabilities add, the order is the smaller one).
class StateSpace {
 public:
  StateSpace(const MarkovModel& model, std::size_t max_states = 5'000'000,
             std::optional<double> auto_epsilon = std::nullopt)
      : model_(&model), max_states_(max_states), auto_epsilon_(auto_epsilon) {
    State s = model.initial_state();
    indexer_.index(s);
    kinds_.push_back(NodeKind::Regular);
    rows_.emplace_back();
    expanded_.push_back(false);
  }

  const MarkovModel& model() const { return *model_; }

  std::int32_t initial() const { return 0; }
  std::optional<std::int32_t> goal() const { return goal_; }
  std::optional<std::int32_t> taboo() const { return taboo_; }

  std::size_t size() const { return indexer_.size(); }
  NodeKind kind(std::int32_t i) const { return kinds_[static_cast<std::size_t>(i)]; }
  bool is_terminal(std::int32_t i) const { return kind(i) != NodeKind::Regular; }
  const State& descriptor(std::int32_t i) const { return indexer_.descriptor(i); }

  /// Index of a descriptor reached by a transition, classifying it first.
  std::int32_t resolve(const State& s) {
    if (model_->is_goal(s)) {
      if (!goal_) goal_ = add_slot(s, NodeKind::Goal);
      return *goal_;
    }
    if (model_->is_taboo(s)) {
      if (!taboo_) taboo_ = add_slot(s, NodeKind::Taboo);
      return *taboo_;
    }
    auto [idx, inserted] = indexer_.index(s);
    if (inserted) {
      check_budget();
      kinds_.push_back(NodeKind::Regular);
      rows_.emplace_back();
      expanded_.push_back(false);
    }
    return idx;
  }

  std::optional<std::int32_t> find(const State& s) const {
    if (model_->is_goal(s)) return goal_;
    if (model_->is_taboo(s)) return taboo_;
    return indexer_.find(s);
  }

  bool expanded(std::int32_t i) const { return expanded_[static_cast<std::size_t>(i)]; }

  /// Outgoing transitions of a regular state under the model, generated on
  /// first use. Terminal states have an empty row.
  const Row& base_row(std::int32_t i) {
    auto k = static_cast<std::size_t>(i);
    if (!expanded_[k]) {
      expanded_[k] = true;
      if (!is_terminal(i)) {
        State x = indexer_.descriptor(i);
        auto steps = normalized_successors(*model_, x, auto_epsilon_);
        Row row;
        row.reserve(steps.size());
        for (auto& st : steps) {
          std::int32_t z = resolve(st.target);
          merge_edge(row, Edge{z, st.probability, st.order});
        }
        rows_[k] = std::move(row);
      }
    }
    return rows_[k];
  }

  /// Row of an already expanded state; usable on a const space.
  const Row& expanded_row(std::int32_t i) const {
    if (!expanded(i)) throw ModelError("state " + std::to_string(i) + " was never expanded");
    return rows_[static_cast<std::size_t>(i)];
  }

  static void merge_edge(Row& row, const Edge& e) {
    for (auto& existing : row) {
      if (existing.target == e.target) {
        existing.probability += e.probability;
        existing.order = std::min(existing.order, e.order);
        return;
      }
    }
    row.push_back(e);
  }

 private:
  std::int32_t add_slot(const State& s, NodeKind kind) {
    std::int32_t idx = indexer_.add_anonymous(s);
    check_budget();
    kinds_.push_back(kind);
    rows_.emplace_back();
    expanded_.push_back(true);
    return idx;
  }

  void check_budget() const {
    if (indexer_.size() > max_states_)
      throw BudgetExceeded("state budget of " + std::to_string(max_states_) + " exceeded while exploring model '" +
                           model_->name() + "'");
  }

  const MarkovModel* model_;
  std::size_t max_states_;
  std::optional<double> auto_epsilon_;
  StateIndexer indexer_;
  std::vector<NodeKind> kinds_;
  std::deque<Row> rows_;  // deque keeps row references valid while exploring
  std::vector<bool> expanded_;
  std::optional<std::int32_t> goal_;
  std::optional<std::int32_t> taboo_;
};

/// Transition structure after high-probability-cycle removal: rewritten rows
/// for merged states, the model's rows everywhere else.
class ReducedChain {
 public:
  bool has_override(std::int32_t i) const { return overrides_.count(i) != 0; }
  const std::unordered_map<std::int32_t, Row>& overrides() const { return overrides_; }
  void set_override(std::int32_t i, Row row) { overrides_[i] = std::move(row); }

  const Row& row(StateSpace& space, std::int32_t i) const {
    auto it = overrides_.find(i);
    if (it != overrides_.end()) return it->second;
    return space.base_row(i);
  }

  const Row& expanded_row(const StateSpace& space, std::int32_t i) const {
    auto it = overrides_.find(i);
    if (it != overrides_.end()) return it->second;
    return space.expanded_row(i);
  }

 private:
  std::unordered_map<std::int32_t, Row> overrides_;
};

}  // namespace pathzva
