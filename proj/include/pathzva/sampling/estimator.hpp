#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/model.hpp"
#include "pathzva/preprocess.hpp"
#include "pathzva/sampling/change_of_measure.hpp"
#include "pathzva/sampling/parallel.hpp"
#include "pathzva/sampling/path_sampler.hpp"
#include "pathzva/sampling/statistics.hpp"

namespace pathzva {

enum class Variant { Plain, Plus, PlusPlus };

inline Variant parse_variant(const std::string& s) {
  if (s == "plain") return Variant::Plain;
  if (s == "plus") return Variant::Plus;
  if (s == "plusplus") return Variant::PlusPlus;
  throw ConfigError("unknown variant '" + s + "' (plain|plus|plusplus)");
}

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::Plain: return "plain";
    case Variant::Plus: return "plus";
    case Variant::PlusPlus: return "plusplus";
  }
  return "?";
}

struct RunOptions {
  Variant variant = Variant::Plain;
  std::size_t runs = 10'000;
  std::optional<double> time_budget_ms;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t chunk_size = 250;
  SamplerOptions sampler;
};

struct Estimate {
  std::string model;
  std::string method;
  std::string variant;
  double epsilon = 0.0;
  double mean = 0.0;
  /// Per-replication variance; the half-width is 1.96 * sqrt(variance / N).
  double variance = 0.0;
  double ci_half_width = 0.0;
  /// False when no variance was observed (rendered as "---").
  bool ci_available = false;
  std::size_t n_runs = 0;
  std::size_t n_nondominant = 0;
  std::size_t hits = 0;
  std::optional<double> p_delta;
  std::optional<double> q_delta;
  double wall_time_ms = 0.0;

  double relative_half_width() const { return mean != 0.0 ? ci_half_width / std::abs(mean) : 0.0; }
};

namespace detail {

struct SampleStats {
  Moments all;       // L * 1_Phi over all runs
  Moments psi;       // L * 1_{Phi \ Delta} over all runs
  Moments retained;  // L * 1_Phi over the non-dominant runs
  std::uint64_t hits = 0;

  void add(const PathSample& s) {
    const double y = s.hit_goal ? s.likelihood : 0.0;
    all.add(y);
    psi.add(s.dominant ? 0.0 : y);
    if (!s.dominant) retained.add(y);
    if (s.hit_goal) ++hits;
  }

  void merge(const SampleStats& o) {
    all.merge(o.all);
    psi.merge(o.psi);
    retained.merge(o.retained);
    hits += o.hits;
  }
};

}  // namespace detail

/// Estimates pi with the given measure. `pre` is required for the ZVA
/// measures and for the plus and plusplus variants.
///
/// plain:    mean of L * 1_Phi
/// plus:     P(Delta) + mean of L * 1_{Phi \ Delta}
/// plusplus: P(Delta) + (1 - Q(Delta)) * Y, Y the mean of L * 1_Phi over the
///           M non-dominant runs (0 when M = 0)
inline Estimate run_estimator(const MarkovModel& model, const ChangeOfMeasure& com, const PreprocessResult* pre,
                              const RunOptions& opts) {
  if (opts.variant != Variant::Plain && !is_zva(com.kind))
    throw ConfigError("variant " + to_string(opts.variant) + " requires a ZVA measure");
  if (is_zva(com.kind) && !pre) throw ConfigError(to_string(com.kind) + " requires a pre-processing result");

  const auto t0 = std::chrono::steady_clock::now();
  PathSampler sampler(model, com, pre, opts.sampler);
  ChunkPlan plan{opts.runs, opts.time_budget_ms, opts.chunk_size, opts.workers, opts.seed};
  auto chunks = run_chunked<detail::SampleStats>(plan, [&](Rng& rng, std::size_t count, detail::SampleStats& acc) {
    for (std::size_t i = 0; i < count; ++i) acc.add(sampler.sample(rng));
  });
  detail::SampleStats st;
  for (const auto& c : chunks) st.merge(c);

  Estimate e;
  e.model = model.name();
  e.method = to_string(com.kind);
  e.variant = to_string(opts.variant);
  e.epsilon = model.epsilon();
  e.n_runs = static_cast<std::size_t>(st.all.n);
  e.n_nondominant = static_cast<std::size_t>(st.retained.n);
  e.hits = static_cast<std::size_t>(st.hits);
  if (is_zva(com.kind)) e.p_delta = pre->p_delta();

  const double n = static_cast<double>(e.n_runs);
  switch (opts.variant) {
    case Variant::Plain:
      e.mean = st.all.mean;
      e.variance = st.all.variance();
      break;
    case Variant::Plus:
      e.mean = *e.p_delta + st.psi.mean;
      e.variance = st.psi.variance();
      break;
    case Variant::PlusPlus: {
      const double q_delta = compute_q_delta(*pre, *sampler.table());
      const double q_psi = 1.0 - q_delta;
      e.q_delta = q_delta;
      const double y = st.retained.n > 0 ? st.retained.mean : 0.0;
      e.mean = *e.p_delta + q_psi * y;
      e.variance = q_psi * st.retained.variance();
      break;
    }
  }
  e.ci_available = e.variance > 0.0;
  e.ci_half_width = n > 0 ? kZ95 * std::sqrt(e.variance / n) : 0.0;
  e.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

}  // namespace pathzva
