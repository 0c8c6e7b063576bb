#pragma once

#include <memory>
#include <string>

#include "pathzva/errors.hpp"
#include "pathzva/zoo/multicomponent.hpp"

namespace pathzva::zoo {

enum class TwoTypePreset {
  Balanced,   // dedicated repair for both types (k1 = k2 = 4 in the basic example)
  Deferred,   // type 1 with deferred group repair, starting at two failures
  Unbalanced, // deferred type 1 whose later failures have order 2
};

struct TwoTypeParams {
  TwoTypePreset preset = TwoTypePreset::Balanced;
  int k1 = 4;
  int k2 = 4;
  double c = 1.0;
  double epsilon = 0.01;
  bool emit_orders = true;
};

inline TwoTypeParams fig3_params(double epsilon) { return {TwoTypePreset::Balanced, 4, 4, 1.0, epsilon, true}; }
inline TwoTypeParams fig4_params(double epsilon) { return {TwoTypePreset::Deferred, 5, 2, 1.0 / 50.0, epsilon, true}; }
inline TwoTypeParams table4_params(double epsilon) { return {TwoTypePreset::Unbalanced, 5, 3, 1.0, epsilon, true}; }

/// Two component types with one active component each: type 1 fails at rate
/// c*eps, type 2 at rate eps, repairs at rate 1. The system is down once all
/// components of a type have failed.
inline MulticomponentSpec two_type_spec(const TwoTypeParams& p) {
  if (p.k1 < 1 || p.k2 < 1) throw ConfigError("two-type: k1 and k2 must be positive");
  if (!(p.c > 0.0)) throw ConfigError("two-type: c must be positive");
  MulticomponentSpec spec;
  spec.name = "two-type";
  spec.epsilon = p.epsilon;
  spec.emit_orders = p.emit_orders;
  ComponentType t1{"type1", p.k1, {p.c, 1}, std::nullopt, FailureMode::ActiveSpare, {1.0, 0}, 1, false, 0};
  ComponentType t2{"type2", p.k2, {1.0, 1}, std::nullopt, FailureMode::ActiveSpare, {1.0, 0}, 1, false, 0};
  if (p.preset != TwoTypePreset::Balanced) {
    t1.repair_threshold = std::min(2, p.k1);
    t1.group_repair = true;
  }
  if (p.preset == TwoTypePreset::Unbalanced) {
    t1.failure = {1.0, 1};
    t1.later_failure = SymbolicRate{1.0, 2};
  }
  spec.types = {t1, t2};
  spec.strategy = RepairStrategy::Dedicated;
  return spec;
}

inline std::unique_ptr<MulticomponentModel> make_two_type(const TwoTypeParams& p) {
  return std::make_unique<MulticomponentModel>(two_type_spec(p));
}

}  // namespace pathzva::zoo
