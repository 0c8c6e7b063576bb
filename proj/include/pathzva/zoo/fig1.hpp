#pragma once

#include <string>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"

namespace pathzva::zoo {

/// Birth-death chain s -> 1 -> ... -> n = g with up-probability eps and
/// down-probability 1 - eps; level 0 is the taboo state t. Descriptors are
/// {-1} for s and {i} for level i.
class Fig1Chain final : public MarkovModel {
 public:
  Fig1Chain(int n_levels, double epsilon, bool emit_orders = true)
      : n_(n_levels), eps_(epsilon), emit_orders_(emit_orders) {
    if (n_levels < 2) throw ConfigError("fig1: levels must be at least 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("fig1: epsilon must lie in (0,1)");
  }

  std::string name() const override { return "fig1"; }
  State initial_state() const override { return {-1}; }
  bool is_goal(const State& s) const override { return s[0] == n_; }
  bool is_taboo(const State& s) const override { return s[0] == 0; }
  double epsilon() const override { return eps_; }
  int levels() const { return n_; }

  std::vector<Transition> successors(const State& s) const override {
    if (s[0] < 0) return {make({1}, 1.0, 0)};
    return {make({s[0] + 1}, eps_, 1), make({s[0] - 1}, 1.0 - eps_, 0)};
  }

  std::string describe(const State& s) const override {
    if (s[0] < 0) return "s";
    if (s[0] == 0) return "t";
    if (s[0] == n_) return "g";
    return std::to_string(s[0]);
  }

 private:
  Transition make(State target, double p, int order) const {
    Transition t{std::move(target), p, std::nullopt};
    if (emit_orders_) t.order = EpsilonOrder(order);
    return t;
  }

  int n_;
  double eps_;
  bool emit_orders_;
};

}  // namespace pathzva::zoo
