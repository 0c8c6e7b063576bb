#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pathzva/epsilon_order.hpp"
#include "pathzva/errors.hpp"

namespace pathzva {

/// State descriptor. Fixed-size integer vectors for most models; queue-based
/// models append a variable-length tail. Equality is element-wise including
/// length, which makes the encoding canonical.
using State = std::vector<std::int32_t>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ s.size();
    for (std::int32_t v : s) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::string format_state(const State& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  os << ')';
  return os.str();
}

/// One outgoing transition as emitted by a model. `weight` is a probability or
/// a CTMC rate depending on the model's WeightKind; `order` may be left empty
/// when the model relies on automatic order assignment.
struct Transition {
  State target;
  double weight = 0.0;
  std::optional<EpsilonOrder> order;
};

enum class WeightKind { Probability, Rate };

/// Implicit discrete-time Markov chain. Goal and taboo states are terminal and
/// never expanded by the algorithms. The initial state is never treated as
/// terminal, so regenerative models may use the same descriptor for the
/// initial and the taboo state: returning to it ends a cycle.
///
/// Implementations must be immutable after construction; they are shared
/// read-only across sampling threads.
class MarkovModel {
 public:
  virtual ~MarkovModel() = default;

  virtual std::string name() const = 0;
  virtual State initial_state() const = 0;
  virtual bool is_goal(const State& s) const = 0;
  virtual bool is_taboo(const State& s) const = 0;
  virtual std::vector<Transition> successors(const State& s) const = 0;

  virtual WeightKind weight_kind() const { return WeightKind::Probability; }

  /// Rarity parameter the model was instantiated with.
  virtual double epsilon() const = 0;

  /// Total CTMC exit rate; only needed for unavailability estimation.
  virtual std::optional<double> sojourn_rate(const State&) const { return std::nullopt; }

  virtual std::string describe(const State& s) const { return format_state(s); }
};

/// Transition after embedding and order assignment: a proper probability with
/// a finite order.
struct Step {
  State target;
  double probability = 0.0;
  EpsilonOrder order;
};

/// Smallest non-negative r such that p / eps^r > eps.
inline EpsilonOrder assign_order(double p, double epsilon) {
  if (!(p > 0.0) || p > 1.0 + 1e-12) throw ModelError("assign_order: probability outside (0,1]: " + std::to_string(p));
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ModelError("assign_order: epsilon outside (0,1)");
  int r = 0;
  double prefactor = p;
  while (prefactor <= epsilon) {
    prefactor /= epsilon;
    ++r;
  }
  return EpsilonOrder(r);
}

/// Rates to jump probabilities of the embedded DTMC. Orders, when present, are
/// shifted so the most likely exit has order 0.
inline std::vector<Transition> embed_ctmc(const std::vector<Transition>& raw) {
  if (raw.empty()) throw ModelError("embed_ctmc: empty transition list on a non-terminal state");
  double total = 0.0;
  std::size_t with_order = 0;
  EpsilonOrder min_order = kInfiniteOrder;
  for (const auto& t : raw) {
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) throw ModelError("embed_ctmc: non-positive rate");
    total += t.weight;
    if (t.order) {
      ++with_order;
      min_order = std::min(min_order, *t.order);
    }
  }
  if (with_order != 0 && with_order != raw.size()) throw ModelError("embed_ctmc: orders given for some transitions only");
  std::vector<Transition> out;
  out.reserve(raw.size());
  for (const auto& t : raw) {
    Transition e{t.target, t.weight / total, std::nullopt};
    if (t.order) e.order = t.order->minus(min_order);
    out.push_back(std::move(e));
  }
  return out;
}

/// Successor list of a non-terminal state as jump probabilities with orders.
/// `auto_epsilon` is used for transitions without an explicit order; when
/// unset the model's own epsilon applies.
inline std::vector<Step> normalized_successors(const MarkovModel& model, const State& s,
                                               std::optional<double> auto_epsilon = std::nullopt) {
  std::vector<Transition> raw = model.successors(s);
  if (raw.empty()) throw ModelError("model '" + model.name() + "': state " + model.describe(s) + " has no successors");
  if (model.weight_kind() == WeightKind::Rate) {
    raw = embed_ctmc(raw);
  } else {
    double sum = 0.0;
    for (const auto& t : raw) {
      if (!(t.weight > 0.0)) throw ModelError("non-positive probability in state " + model.describe(s));
      sum += t.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ModelError("probabilities of state " + model.describe(s) + " sum to " + std::to_string(sum));
  }
  const double eps = auto_epsilon.value_or(model.epsilon());
  std::vector<Step> steps;
  steps.reserve(raw.size());
  for (auto& t : raw) {
    EpsilonOrder order = t.order ? *t.order : assign_order(t.weight, eps);
    if (!order.is_finite()) throw ModelError("infinite order on an emitted transition");
    steps.push_back(Step{std::move(t.target), t.weight, order});
  }
  return steps;
}

}  // namespace pathzva
