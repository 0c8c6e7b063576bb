#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <tuple>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/forward_phase.hpp"
#include "pathzva/state_space.hpp"

namespace pathzva {

struct BackwardResult {
  std::vector<std::int32_t> gamma;        // ascending index
  std::vector<bool> in_gamma;             // indexed by state
  std::vector<EpsilonOrder> d_backward;   // indexed by state; infinity outside Lambda and Gamma
  std::vector<double> v_delta;            // indexed by state
  std::vector<std::int32_t> order;        // Lambda and Gamma in processing order
};

/// Distances to the goal and dominant-path probabilities under the measure
/// in which every state of Gamma jumps to the goal with probability one at
/// order zero.
///
/// Distances come from a Dijkstra sweep over reversed edges (ties by index).
/// v_delta is then accumulated along tight edges, those with
/// r_xz + d(z) = d(x), in an order where every tight successor is finished
/// first; without order-0 cycles the tight edges form a DAG.
inline BackwardResult backward_phase(StateSpace& space, const ReducedChain& reduced, const ForwardResult& fwd) {
  const std::size_t size = space.size();
  BackwardResult out;
  out.in_gamma.assign(size, false);
  out.d_backward.assign(size, kInfiniteOrder);
  out.v_delta.assign(size, 0.0);
  auto in_lambda = [&](std::int32_t i) {
    auto k = static_cast<std::size_t>(i);
    return k < fwd.in_lambda.size() && fwd.in_lambda[k];
  };
  const std::optional<std::int32_t> taboo = space.taboo();

  std::vector<std::vector<std::pair<std::int32_t, EpsilonOrder>>> preds(size);
  for (std::int32_t x : fwd.lambda) {
    if (space.is_terminal(x)) continue;
    for (const Edge& e : reduced.row(space, x)) {
      if (static_cast<std::size_t>(e.target) >= size) throw ModelError("backward phase: state space grew after the forward phase");
      preds[static_cast<std::size_t>(e.target)].emplace_back(x, e.order);
      if (!in_lambda(e.target) && e.target != taboo && !out.in_gamma[static_cast<std::size_t>(e.target)]) {
        out.in_gamma[static_cast<std::size_t>(e.target)] = true;
        out.gamma.push_back(e.target);
      }
    }
  }
  std::sort(out.gamma.begin(), out.gamma.end());

  using Entry = std::tuple<int, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  out.d_backward[static_cast<std::size_t>(fwd.goal)] = kZeroOrder;
  heap.emplace(0, fwd.goal);
  for (std::int32_t y : out.gamma) {
    out.d_backward[static_cast<std::size_t>(y)] = kZeroOrder;
    heap.emplace(0, y);
  }
  std::vector<bool> done(size, false);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    auto kx = static_cast<std::size_t>(x);
    if (done[kx] || out.d_backward[kx].value() != d) continue;
    done[kx] = true;
    out.order.push_back(x);
    for (auto [w, r] : preds[kx]) {
      auto kw = static_cast<std::size_t>(w);
      EpsilonOrder nd = out.d_backward[kx] + r;
      if (nd < out.d_backward[kw]) {
        out.d_backward[kw] = nd;
        heap.emplace(nd.value(), w);
      }
    }
  }

  // Depth-first post-order over tight edges.
  out.v_delta[static_cast<std::size_t>(fwd.goal)] = 1.0;
  for (std::int32_t y : out.gamma) out.v_delta[static_cast<std::size_t>(y)] = 1.0;
  enum : std::uint8_t { kNew, kOpen, kClosed };
  std::vector<std::uint8_t> mark(size, kNew);
  auto is_tight = [&](std::int32_t x, const Edge& e) {
    const EpsilonOrder dz = out.d_backward[static_cast<std::size_t>(e.target)];
    return dz.is_finite() && e.order + dz == out.d_backward[static_cast<std::size_t>(x)];
  };
  for (std::int32_t root : fwd.lambda) {
    if (space.is_terminal(root) || !out.d_backward[static_cast<std::size_t>(root)].is_finite()) continue;
    if (mark[static_cast<std::size_t>(root)] != kNew) continue;
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{root, 0}};
    mark[static_cast<std::size_t>(root)] = kOpen;
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      const Row& row = reduced.row(space, x);
      bool descended = false;
      while (next < row.size()) {
        const Edge& e = row[next++];
        if (!is_tight(x, e) || !in_lambda(e.target) || space.is_terminal(e.target)) continue;
        auto kz = static_cast<std::size_t>(e.target);
        if (mark[kz] == kOpen) throw ModelError("backward phase: order-0 cycle left in the relevant set");
        if (mark[kz] == kNew) {
          mark[kz] = kOpen;
          stack.emplace_back(e.target, 0);
          descended = true;
          break;
        }
      }
      if (descended) continue;
      double v = 0.0;
      for (const Edge& e : row) {
        if (is_tight(x, e)) v += e.probability * out.v_delta[static_cast<std::size_t>(e.target)];
      }
      out.v_delta[static_cast<std::size_t>(x)] = v;
      mark[static_cast<std::size_t>(x)] = kClosed;
      stack.pop_back();
    }
  }
  return out;
}

}  // namespace pathzva
