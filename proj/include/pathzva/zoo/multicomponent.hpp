#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"

namespace pathzva::zoo {

/// Rate of the form prefactor * eps^order.
struct SymbolicRate {
  double prefactor = 1.0;
  int order = 0;

  double value(double eps) const { return prefactor * std::pow(eps, order); }
};

enum class FailureMode {
  ActiveSpare,  // one active component, the others are cold spares
  Linear,       // every working component fails independently
};

struct ComponentType {
  std::string name;
  int count = 1;
  SymbolicRate failure{1.0, 1};
  /// Failure rate once at least one component of the type is down.
  std::optional<SymbolicRate> later_failure;
  FailureMode mode = FailureMode::ActiveSpare;
  SymbolicRate repair{1.0, 0};
  /// Repair starts only when this many components are down.
  int repair_threshold = 1;
  /// Repair restores all failed components at once.
  bool group_repair = false;
  /// The system is down when this many components of the type are down.
  int down_threshold = 0;  // 0 means count
};

enum class RepairStrategy {
  Dedicated,       // one repair unit per type
  SinglePriority,  // one unit, serves the first type of `priority` needing repair
  Fcfs,            // one unit, serves components in failure order
};

struct MulticomponentSpec {
  std::string name = "multicomponent";
  double epsilon = 0.01;
  std::vector<ComponentType> types;
  RepairStrategy strategy = RepairStrategy::Dedicated;
  std::vector<int> priority;
  bool emit_orders = true;
};

/// Continuous-time multicomponent system embedded at jump times. A state lists
/// the number of failed components per type; under FCFS the type indices of
/// failed components follow in failure order. The all-up state is both the
/// initial and the regeneration state.
class MulticomponentModel final : public MarkovModel {
 public:
  explicit MulticomponentModel(MulticomponentSpec spec) : spec_(std::move(spec)) {
    if (spec_.types.empty()) throw ConfigError(spec_.name + ": no component types");
    if (!(spec_.epsilon > 0.0 && spec_.epsilon < 1.0)) throw ConfigError(spec_.name + ": epsilon must lie in (0,1)");
    for (auto& t : spec_.types) {
      if (t.count < 1) throw ConfigError(spec_.name + ": component count must be positive");
      if (t.down_threshold == 0) t.down_threshold = t.count;
      if (t.down_threshold < 1 || t.down_threshold > t.count) throw ConfigError(spec_.name + ": bad down threshold");
      if (t.repair_threshold < 1 || t.repair_threshold > t.count)
        throw ConfigError(spec_.name + ": repair threshold must lie in [1, count]");
      if (!(t.failure.prefactor > 0.0) || !(t.repair.prefactor > 0.0) ||
          (t.later_failure && !(t.later_failure->prefactor > 0.0)))
        throw ConfigError(spec_.name + ": rates must be positive");
    }
    const int n = static_cast<int>(spec_.types.size());
    if (spec_.strategy == RepairStrategy::SinglePriority) {
      auto sorted = spec_.priority;
      std::sort(sorted.begin(), sorted.end());
      bool ok = static_cast<int>(sorted.size()) == n;
      for (int i = 0; ok && i < n; ++i) ok = sorted[static_cast<std::size_t>(i)] == i;
      if (!ok) throw ConfigError(spec_.name + ": priority must be a permutation of the type indices");
    }
    if (spec_.strategy == RepairStrategy::Fcfs) {
      for (const auto& t : spec_.types)
        if (t.repair_threshold != 1 || t.group_repair)
          throw ConfigError(spec_.name + ": FCFS does not support deferred or group repair");
    }
  }

  const MulticomponentSpec& spec() const { return spec_; }
  std::size_t type_count() const { return spec_.types.size(); }

  std::string name() const override { return spec_.name; }
  double epsilon() const override { return spec_.epsilon; }
  WeightKind weight_kind() const override { return WeightKind::Rate; }

  State initial_state() const override { return State(spec_.types.size(), 0); }

  bool is_goal(const State& s) const override {
    for (std::size_t i = 0; i < spec_.types.size(); ++i)
      if (s[i] >= spec_.types[i].down_threshold) return true;
    return false;
  }

  bool is_taboo(const State& s) const override {
    return s.size() == spec_.types.size() &&
           std::all_of(s.begin(), s.end(), [](std::int32_t v) { return v == 0; });
  }

  std::vector<Transition> successors(const State& s) const override {
    std::vector<Transition> out;
    const double eps = spec_.epsilon;
    const std::size_t n = spec_.types.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t = spec_.types[i];
      const int failed = s[i];
      if (failed >= t.count) continue;
      SymbolicRate r = (failed >= 1 && t.later_failure) ? *t.later_failure : t.failure;
      if (t.mode == FailureMode::Linear) r.prefactor *= (t.count - failed);
      State z = s;
      z[i] += 1;
      if (spec_.strategy == RepairStrategy::Fcfs) z.push_back(static_cast<std::int32_t>(i));
      out.push_back(make(std::move(z), r, eps));
    }
    switch (spec_.strategy) {
      case RepairStrategy::Dedicated:
        for (std::size_t i = 0; i < n; ++i)
          if (repairable(s, i)) out.push_back(make(repaired(s, i), spec_.types[i].repair, eps));
        break;
      case RepairStrategy::SinglePriority:
        for (int i : spec_.priority) {
          auto k = static_cast<std::size_t>(i);
          if (repairable(s, k)) {
            out.push_back(make(repaired(s, k), spec_.types[k].repair, eps));
            break;
          }
        }
        break;
      case RepairStrategy::Fcfs:
        if (s.size() > n) {
          auto head = static_cast<std::size_t>(s[n]);
          State z = s;
          z[head] -= 1;
          z.erase(z.begin() + static_cast<std::ptrdiff_t>(n));
          out.push_back(make(std::move(z), spec_.types[head].repair, eps));
        }
        break;
    }
    return out;
  }

  std::optional<double> sojourn_rate(const State& s) const override {
    double total = 0.0;
    for (const auto& t : successors(s)) total += t.weight;
    return total;
  }

  std::string describe(const State& s) const override {
    const std::size_t n = spec_.types.size();
    std::string out = "(";
    for (std::size_t i = 0; i < n; ++i) out += (i ? "," : "") + std::to_string(s[i]);
    out += ")";
    if (s.size() > n) {
      out += "[";
      for (std::size_t i = n; i < s.size(); ++i) out += (i > n ? "," : "") + std::to_string(s[i]);
      out += "]";
    }
    return out;
  }

 private:
  bool repairable(const State& s, std::size_t i) const { return s[i] >= spec_.types[i].repair_threshold; }

  State repaired(const State& s, std::size_t i) const {
    State z = s;
    z[i] = spec_.types[i].group_repair ? 0 : z[i] - 1;
    return z;
  }

  Transition make(State target, const SymbolicRate& r, double eps) const {
    Transition t{std::move(target), r.value(eps), std::nullopt};
    if (spec_.emit_orders) t.order = EpsilonOrder(r.order);
    return t;
  }

  MulticomponentSpec spec_;
};

}  // namespace pathzva::zoo
