#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/preprocess.hpp"
#include "pathzva/sampling/change_of_measure.hpp"
#include "pathzva/sampling/parallel.hpp"
#include "pathzva/sampling/path_sampler.hpp"
#include "pathzva/sampling/rng.hpp"
#include "pathzva/sampling/statistics.hpp"

namespace pathzva {

struct UnavailabilityOptions {
  std::size_t runs_z = 10'000;  // importance-sampled cycles for E(Z)
  std::size_t runs_d = 10'000;  // plain Monte Carlo cycles for E(D)
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t chunk_size = 250;
  std::size_t max_steps = 10'000'000;
};

struct UnavailabilityEstimate {
  double value = 0.0;  // E(Z) / E(D)
  double z_mean = 0.0;
  double z_half_width = 0.0;
  double d_mean = 0.0;
  double d_half_width = 0.0;
  std::size_t runs_z = 0;
  std::size_t runs_d = 0;
  double wall_time_ms = 0.0;
};

/// Time from a goal entry until the next visit to the taboo state, and the part
/// of it spent in goal states, under the original chain.
struct GoalExcursion {
  double total = 0.0;
  double in_goal = 0.0;
};

inline GoalExcursion simulate_excursion(const MarkovModel& model, State x, Rng& rng, std::size_t max_steps) {
  GoalExcursion out;
  for (std::size_t step = 0; !model.is_taboo(x); ++step) {
    if (step >= max_steps) throw BudgetExceeded("goal excursion exceeded the step cap");
    auto rate = model.sojourn_rate(x);
    if (!rate || !(*rate > 0.0)) throw ConfigError("model '" + model.name() + "' provides no sojourn rates");
    out.total += 1.0 / *rate;
    if (model.is_goal(x)) out.in_goal += 1.0 / *rate;
    auto steps = normalized_successors(model, x);
    double u = uniform01(rng), acc = 0.0;
    std::size_t k = steps.size() - 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      acc += steps[i].probability;
      if (u < acc) {
        k = i;
        break;
      }
    }
    x = std::move(steps[k].target);
  }
  return out;
}

/// Steady-state unavailability as the regenerative ratio E(Z) / E(D). Z, the
/// time spent in goal states during a cycle, is estimated by weighting each
/// goal excursion with the likelihood ratio of the importance-sampled path
/// that reached the goal; D, the cycle length, by plain Monte Carlo. Sojourns
/// are counted by their expectations 1/rate. No joint interval is reported.
///
/// The initial state must be the regeneration state, and HPC removal is not
/// supported since it changes sojourn times.
inline UnavailabilityEstimate estimate_unavailability(const MarkovModel& model, const ChangeOfMeasure& com,
                                                      const PreprocessResult* pre,
                                                      const UnavailabilityOptions& opts) {
  if (!model.is_taboo(model.initial_state()))
    throw ConfigError("unavailability needs the initial state to be the regeneration state");
  if (!model.sojourn_rate(model.initial_state())) throw ConfigError("model '" + model.name() + "' has no sojourn rates");
  const auto t0 = std::chrono::steady_clock::now();

  SamplerOptions so;
  so.track_time = true;
  so.max_steps = opts.max_steps;
  PathSampler biased(model, com, pre, so);
  auto z_chunks = run_chunked<Moments>({opts.runs_z, std::nullopt, opts.chunk_size, opts.workers, opts.seed},
                                       [&](Rng& rng, std::size_t count, Moments& acc) {
                                         for (std::size_t i = 0; i < count; ++i) {
                                           PathSample s = biased.sample(rng);
                                           double z = 0.0;
                                           if (s.hit_goal)
                                             z = s.likelihood *
                                                 simulate_excursion(model, *s.goal_entry, rng, opts.max_steps).in_goal;
                                           acc.add(z);
                                         }
                                       });

  PathSampler plain(model, {MeasureKind::MC}, nullptr, so);
  auto d_chunks = run_chunked<Moments>(
      {opts.runs_d, std::nullopt, opts.chunk_size, opts.workers, splitmix64(opts.seed ^ 0xd1b54a32d192ed03ULL)},
      [&](Rng& rng, std::size_t count, Moments& acc) {
        for (std::size_t i = 0; i < count; ++i) {
          PathSample s = plain.sample(rng);
          double d = s.cycle_duration;
          if (s.hit_goal) d += simulate_excursion(model, *s.goal_entry, rng, opts.max_steps).total;
          acc.add(d);
        }
      });

  Moments z, d;
  for (const auto& c : z_chunks) z.merge(c);
  for (const auto& c : d_chunks) d.merge(c);
  UnavailabilityEstimate out;
  out.z_mean = z.mean;
  out.z_half_width = ci_half_width(z);
  out.d_mean = d.mean;
  out.d_half_width = ci_half_width(d);
  out.runs_z = static_cast<std::size_t>(z.n);
  out.runs_d = static_cast<std::size_t>(d.n);
  out.value = d.mean > 0.0 ? z.mean / d.mean : 0.0;
  out.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace pathzva
