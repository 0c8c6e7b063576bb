#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/sampling/rng.hpp"

namespace pathzva {

/// Replications are split into fixed-size chunks; chunk i always draws from
/// stream_rng(seed, i), whichever worker runs it, and results are merged in
/// chunk order. With a time budget, chunks are claimed until the deadline and
/// every claimed chunk is completed; the first chunk always runs.
struct ChunkPlan {
  std::size_t runs = 10'000;
  std::optional<double> time_budget_ms;
  std::size_t chunk_size = 250;
  unsigned workers = 1;
  std::uint64_t seed = 0;
};

/// Runs body(rng, count, acc) for every chunk and returns the accumulators in
/// chunk order.
template <class Acc, class Body>
std::vector<Acc> run_chunked(const ChunkPlan& plan, Body body) {
  if (plan.chunk_size == 0) throw ConfigError("chunk size must be positive");
  if (!plan.time_budget_ms && plan.runs == 0) throw ConfigError("run budget must be positive");
  if (plan.time_budget_ms && !(*plan.time_budget_ms > 0.0)) throw ConfigError("time budget must be positive");

  const bool timed = plan.time_budget_ms.has_value();
  const std::size_t chunks =
      timed ? std::numeric_limits<std::size_t>::max() : (plan.runs + plan.chunk_size - 1) / plan.chunk_size;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double, std::milli>(plan.time_budget_ms.value_or(0.0)));
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(std::max(1u, plan.workers), chunks)));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::pair<std::size_t, Acc>> done;

  auto worker = [&] {
    std::vector<std::pair<std::size_t, Acc>> local;
    try {
      while (!failed.load()) {
        if (timed && next.load() > 0 && std::chrono::steady_clock::now() >= deadline) break;
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        const std::size_t count = timed ? plan.chunk_size : std::min(plan.chunk_size, plan.runs - c * plan.chunk_size);
        Rng rng = stream_rng(plan.seed, c);
        Acc acc{};
        body(rng, count, acc);
        local.emplace_back(c, std::move(acc));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      failed = true;
    }
    std::lock_guard<std::mutex> lock(mu);
    for (auto& item : local) done.push_back(std::move(item));
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Acc> out;
  out.reserve(done.size());
  for (auto& item : done) out.push_back(std::move(item.second));
  return out;
}

}  // namespace pathzva
