#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/preprocess.hpp"
#include "pathzva/sampling/change_of_measure.hpp"
#include "pathzva/sampling/rng.hpp"

namespace pathzva {

/// Outcome of one replication.
struct PathSample {
  bool hit_goal = false;
  double likelihood = 1.0;
  /// Hit g without leaving Lambda, with total order d(s,g).
  bool dominant = false;
  bool left_lambda = false;
  EpsilonOrder order_sum = kZeroOrder;
  std::size_t steps = 0;
  /// Goal descriptor that was entered; recorded only when tracking time.
  std::optional<State> goal_entry;
  /// Sum of expected sojourn times 1/rate of the visited states.
  double cycle_duration = 0.0;
};

/// One transition of a recorded path. Indices refer to the pre-processing
/// state space and are -1 once the path runs on descriptors.
struct TraceStep {
  State from;
  State to;
  std::int32_t from_index = -1;
  std::int32_t to_index = -1;
  double p = 0.0;
  double q = 0.0;
  EpsilonOrder order;
  bool importance_sampled = false;
};

struct SamplerOptions {
  bool log_likelihood = false;
  std::size_t max_steps = 10'000'000;
  bool track_time = false;
  /// Epsilon for automatic order assignment in descriptor mode; defaults to
  /// the pre-processing epsilon, or the model's.
  std::optional<double> auto_epsilon;
};

/// Draws paths from the initial state until g or t. ZVA measures use the
/// precomputed rows while inside Lambda and plain Monte Carlo afterwards;
/// MC, BFB and IGBS work directly on the model's descriptors.
class PathSampler {
 public:
  PathSampler(const MarkovModel& model, ChangeOfMeasure com, const PreprocessResult* pre = nullptr,
              SamplerOptions opts = {})
      : model_(&model), com_(com), pre_(pre), opts_(opts) {
    com_.validate();
    if (is_zva(com_.kind)) {
      if (!pre_) throw ConfigError(to_string(com_.kind) + " requires a pre-processing result");
      table_ = std::make_unique<ZvaTable>(*pre_, com_.kind);
      distance_ = pre_->distance();
    }
    if (!opts_.auto_epsilon && pre_) opts_.auto_epsilon = pre_->report().epsilon;
    if (opts_.track_time && table_) {
      if (!pre_->hpcs().empty())
        throw ConfigError("time tracking is not supported on models with high-probability cycles");
      sojourn_.assign(pre_->space().size(), 0.0);
      for (std::int32_t x : pre_->lambda())
        if (!pre_->space().is_terminal(x)) sojourn_[static_cast<std::size_t>(x)] = mean_sojourn(pre_->space().descriptor(x));
    }
  }

  const ChangeOfMeasure& measure() const { return com_; }
  const ZvaTable* table() const { return table_.get(); }

  PathSample sample(Rng& rng, std::vector<TraceStep>* trace = nullptr) const {
    PathSample out;
    double log_l = 0.0;
    auto weigh = [&](double p, double q) {
      if (opts_.log_likelihood)
        log_l += std::log(p) - std::log(q);
      else
        out.likelihood *= p / q;
    };

    bool in_lambda = table_ != nullptr;
    std::int32_t xi = in_lambda ? pre_->initial() : -1;
    State x = model_->initial_state();
    std::optional<EpsilonOrder> previous;

    while (true) {
      if (out.steps >= opts_.max_steps)
        throw BudgetExceeded("path exceeded " + std::to_string(opts_.max_steps) + " steps; chain may not be absorbing");

      if (in_lambda) {
        const auto& row = table_->row(xi);
        if (row.empty()) throw ModelError("sampler: state without outgoing transitions in Lambda");
        if (opts_.track_time) out.cycle_duration += sojourn_[static_cast<std::size_t>(xi)];
        const double u = uniform01(rng);
        const ZvaTable::Entry* pick = &row.back();
        for (const auto& e : row) {
          if (u < e.cdf) {
            pick = &e;
            break;
          }
        }
        weigh(pick->p, pick->q);
        out.order_sum += pick->order;
        ++out.steps;
        const std::int32_t z = pick->target;
        if (trace)
          trace->push_back({pre_->space().descriptor(xi), pre_->space().descriptor(z), xi, z, pick->p, pick->q,
                            pick->order, true});
        if (z == pre_->goal()) {
          out.hit_goal = true;
          out.dominant = out.order_sum == distance_;
          if (opts_.track_time) out.goal_entry = goal_descriptor(pre_->space().descriptor(xi), rng);
          break;
        }
        if (z == pre_->taboo()) break;
        if (pre_->in_lambda(z)) {
          xi = z;
          continue;
        }
        in_lambda = false;
        out.left_lambda = true;
        x = pre_->space().descriptor(z);
        continue;
      }

      const auto steps = normalized_successors(*model_, x, opts_.auto_epsilon);
      if (opts_.track_time) out.cycle_duration += mean_sojourn(x);
      std::size_t k = 0;
      double q = 0.0;
      if (com_.kind == MeasureKind::BFB || com_.kind == MeasureKind::IGBS) {
        std::vector<EpsilonOrder> orders;
        orders.reserve(steps.size());
        for (const auto& st : steps) orders.push_back(st.order);
        const auto w = com_.kind == MeasureKind::BFB ? bfb_weights(orders, com_.p)
                                                     : igbs_weights(orders, com_.p, com_.delta, previous);
        k = draw(w, rng);
        q = w[k];
        weigh(steps[k].probability, q);
      } else {
        std::vector<double> w;
        w.reserve(steps.size());
        for (const auto& st : steps) w.push_back(st.probability);
        k = draw(w, rng);
        q = w[k];
      }
      const Step& st = steps[k];
      previous = st.order;
      out.order_sum += st.order;
      ++out.steps;
      if (trace) trace->push_back({x, st.target, -1, -1, st.probability, q, st.order, false});
      if (model_->is_goal(st.target)) {
        out.hit_goal = true;
        if (opts_.track_time) out.goal_entry = st.target;
        break;
      }
      if (model_->is_taboo(st.target)) break;
      x = st.target;
    }
    if (opts_.log_likelihood) out.likelihood = std::exp(log_l);
    return out;
  }

 private:
  static std::size_t draw(const std::vector<double>& w, Rng& rng) {
    double total = 0.0;
    for (double v : w) total += v;
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      acc += w[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  double mean_sojourn(const State& s) const {
    auto rate = model_->sojourn_rate(s);
    if (!rate || !(*rate > 0.0)) throw ConfigError("model '" + model_->name() + "' provides no sojourn rates");
    return 1.0 / *rate;
  }

  /// Goal descriptor entered from x, drawn in proportion to the model's
  /// probabilities of x's goal transitions.
  State goal_descriptor(const State& x, Rng& rng) const {
    const auto steps = normalized_successors(*model_, x, opts_.auto_epsilon);
    std::vector<double> w;
    w.reserve(steps.size());
    for (const auto& st : steps) w.push_back(model_->is_goal(st.target) ? st.probability : 0.0);
    return steps[draw(w, rng)].target;
  }

  const MarkovModel* model_;
  ChangeOfMeasure com_;
  const PreprocessResult* pre_;
  SamplerOptions opts_;
  std::unique_ptr<ZvaTable> table_;
  EpsilonOrder distance_ = kInfiniteOrder;
  std::vector<double> sojourn_;
};

}  // namespace pathzva
