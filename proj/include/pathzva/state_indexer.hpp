#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pathzva/model.hpp"

namespace pathzva {

/// Dense indices for state descriptors, assigned in first-discovery order.
/// Anonymous slots (no lookup entry) host the merged goal and taboo states.
class StateIndexer {
 public:
  /// Index of `s`, inserting it when unseen. The flag reports an insertion.
  std::pair<std::int32_t, bool> index(const State& s) {
    auto [it, inserted] = lookup_.try_emplace(s, static_cast<std::int32_t>(descriptors_.size()));
    if (inserted) descriptors_.push_back(s);
    return {it->second, inserted};
  }

  std::optional<std::int32_t> find(const State& s) const {
    auto it = lookup_.find(s);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Appends a slot that is not reachable through `find`.
  std::int32_t add_anonymous(const State& representative) {
    descriptors_.push_back(representative);
    return static_cast<std::int32_t>(descriptors_.size() - 1);
  }

  const State& descriptor(std::int32_t i) const { return descriptors_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return descriptors_.size(); }

 private:
  std::unordered_map<State, std::int32_t, StateHash> lookup_;
  std::deque<State> descriptors_;
};

}  // namespace pathzva
