#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pathzva/backward_phase.hpp"
#include "pathzva/errors.hpp"
#include "pathzva/exit_distribution.hpp"
#include "pathzva/forward_phase.hpp"
#include "pathzva/model.hpp"
#include "pathzva/state_space.hpp"

namespace pathzva {

struct PreprocessOptions {
  std::size_t max_states = 5'000'000;
  /// Epsilon for automatic order assignment; the model's own value when unset.
  std::optional<double> auto_epsilon;
  ExitSolveOptions exit_solver;
};

struct PreprocessReport {
  std::string model;
  double epsilon = 0.0;
  std::size_t lambda_size = 0;
  std::size_t gamma_size = 0;
  EpsilonOrder distance;
  double v_delta_initial = 0.0;
  std::size_t hpc_count = 0;
  std::size_t explored_states = 0;
  double forward_ms = 0.0;
  double backward_ms = 0.0;
};

/// Everything the ZVA measures need: Lambda, Gamma, both distance functions,
/// v_delta and the reduced chain. Immutable once built; the model passed to
/// `preprocess` must outlive it.
class PreprocessResult {
 public:
  const StateSpace& space() const { return *space_; }
  const MarkovModel& model() const { return space_->model(); }
  const ReducedChain& reduced() const { return reduced_; }

  std::int32_t initial() const { return space_->initial(); }
  std::int32_t goal() const { return forward_.goal; }
  std::optional<std::int32_t> taboo() const { return space_->taboo(); }

  bool in_lambda(std::int32_t i) const {
    auto k = static_cast<std::size_t>(i);
    return k < forward_.in_lambda.size() && forward_.in_lambda[k];
  }
  bool in_gamma(std::int32_t i) const {
    auto k = static_cast<std::size_t>(i);
    return k < backward_.in_gamma.size() && backward_.in_gamma[k];
  }

  const std::vector<std::int32_t>& lambda() const { return forward_.lambda; }
  const std::vector<std::int32_t>& gamma() const { return backward_.gamma; }
  const std::vector<HpcRecord>& hpcs() const { return forward_.hpcs; }

  EpsilonOrder d_forward(std::int32_t i) const { return at_or(forward_.d_forward, i, kInfiniteOrder); }
  EpsilonOrder d_backward(std::int32_t i) const { return at_or(backward_.d_backward, i, kInfiniteOrder); }
  double v_delta(std::int32_t i) const { return at_or(backward_.v_delta, i, 0.0); }

  /// d(s,g), the order of the most likely paths to the goal.
  EpsilonOrder distance() const { return d_forward(goal()); }
  /// P(Delta): total probability of the dominant paths from the initial state.
  double p_delta() const { return v_delta(initial()); }

  /// Row of a state of Lambda under the reduced chain.
  const Row& row(std::int32_t i) const { return reduced_.expanded_row(*space_, i); }

  const std::vector<std::int32_t>& backward_order() const { return backward_.order; }
  const PreprocessReport& report() const { return report_; }

 private:
  template <class T>
  static T at_or(const std::vector<T>& v, std::int32_t i, T fallback) {
    auto k = static_cast<std::size_t>(i);
    return (i >= 0 && k < v.size()) ? v[k] : fallback;
  }

  std::unique_ptr<StateSpace> space_;
  ReducedChain reduced_;
  ForwardResult forward_;
  BackwardResult backward_;
  PreprocessReport report_;

  friend PreprocessResult preprocess(const MarkovModel&, const PreprocessOptions&);
};

inline PreprocessResult preprocess(const MarkovModel& model, const PreprocessOptions& opts = {}) {
  if (model.is_goal(model.initial_state())) throw ModelError("initial state of '" + model.name() + "' is a goal state");
  using clock = std::chrono::steady_clock;
  PreprocessResult out;
  out.space_ = std::make_unique<StateSpace>(model, opts.max_states, opts.auto_epsilon);
  auto t0 = clock::now();
  out.forward_ = forward_phase(*out.space_, out.reduced_, opts.exit_solver);
  auto t1 = clock::now();
  out.backward_ = backward_phase(*out.space_, out.reduced_, out.forward_);
  auto t2 = clock::now();

  PreprocessReport& r = out.report_;
  r.model = model.name();
  r.epsilon = opts.auto_epsilon.value_or(model.epsilon());
  r.lambda_size = out.forward_.lambda.size();
  r.gamma_size = out.backward_.gamma.size();
  r.distance = out.distance();
  r.v_delta_initial = out.p_delta();
  r.hpc_count = out.forward_.hpcs.size();
  r.explored_states = out.space_->size();
  r.forward_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.backward_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return out;
}

}  // namespace pathzva
