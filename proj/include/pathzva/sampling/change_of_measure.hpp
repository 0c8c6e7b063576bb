#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathzva/errors.hpp"
#include "pathzva/preprocess.hpp"

namespace pathzva {

enum class MeasureKind { MC, BFB, IGBS, ZvaDbar, ZvaDelta };

inline MeasureKind parse_measure(const std::string& s) {
  if (s == "mc") return MeasureKind::MC;
  if (s == "bfb") return MeasureKind::BFB;
  if (s == "igbs") return MeasureKind::IGBS;
  if (s == "zva-dbar") return MeasureKind::ZvaDbar;
  if (s == "zva-delta") return MeasureKind::ZvaDelta;
  throw ConfigError("unknown method '" + s + "' (mc|bfb|igbs|zva-dbar|zva-delta)");
}

inline std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::MC: return "mc";
    case MeasureKind::BFB: return "bfb";
    case MeasureKind::IGBS: return "igbs";
    case MeasureKind::ZvaDbar: return "zva-dbar";
    case MeasureKind::ZvaDelta: return "zva-delta";
  }
  return "?";
}

inline bool is_zva(MeasureKind k) { return k == MeasureKind::ZvaDbar || k == MeasureKind::ZvaDelta; }

/// Simulation measure. `p` is the failure-biasing constant of BFB and IGBS,
/// `delta` the low-intensity constant IGBS uses after an order-0 transition.
struct ChangeOfMeasure {
  MeasureKind kind = MeasureKind::ZvaDelta;
  double p = 0.5;
  double delta = 0.01;

  void validate() const {
    if (kind == MeasureKind::BFB && !(p > 0.0 && p < 1.0)) throw ConfigError("bfb: p must lie in (0,1)");
    if (kind == MeasureKind::IGBS && !(delta > 0.0 && delta < p && p < 1.0))
      throw ConfigError("igbs: need 0 < delta < p < 1");
  }
};

/// Balanced failure biasing over one state's transitions, given their orders:
/// failures (order > 0) share p, repairs (order 0) share 1 - p.
inline std::vector<double> bfb_weights(const std::vector<EpsilonOrder>& orders, double p) {
  std::size_t nf = 0, nr = 0;
  for (auto o : orders) (o > kZeroOrder ? nf : nr) += 1;
  std::vector<double> q(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    bool failure = orders[i] > kZeroOrder;
    if (nr == 0)
      q[i] = 1.0 / static_cast<double>(nf);
    else if (nf == 0)
      q[i] = 1.0 / static_cast<double>(nr);
    else if (failure)
      q[i] = p / static_cast<double>(nf);
    else
      q[i] = (1.0 - p) / static_cast<double>(nr);
  }
  return q;
}

/// IGBS: BFB with `delta` in place of `p` when the previous transition had
/// order 0. `previous` is empty at the initial state.
inline std::vector<double> igbs_weights(const std::vector<EpsilonOrder>& orders, double p, double delta,
                                        std::optional<EpsilonOrder> previous) {
  bool low = previous && *previous == kZeroOrder;
  return bfb_weights(orders, low ? delta : p);
}

/// q proportional to p * v(target). Empty when every term vanishes, in which
/// case callers keep the original distribution.
inline std::optional<std::vector<double>> zva_weights(const std::vector<double>& p, const std::vector<double>& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * v[i];
  if (!(total > 0.0)) return std::nullopt;
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] * v[i] / total;
  return q;
}

/// Value function of a ZVA measure on the indices of a pre-processing result:
/// 1 on g and Gamma, 0 on t, v_delta or eps^dbar on Lambda.
inline double zva_value(const PreprocessResult& pre, MeasureKind kind, std::int32_t z) {
  if (z == pre.goal() || pre.in_gamma(z)) return 1.0;
  if (!pre.in_lambda(z)) return 0.0;
  if (kind == MeasureKind::ZvaDelta) return pre.v_delta(z);
  EpsilonOrder d = pre.d_backward(z);
  if (!d.is_finite()) return 0.0;
  return std::pow(pre.report().epsilon, d.value());
}

/// ZVA distribution over the reduced row of a non-terminal state of Lambda.
inline std::vector<std::pair<std::int32_t, double>> zva_distribution(const PreprocessResult& pre, MeasureKind kind,
                                                                     std::int32_t x) {
  if (!is_zva(kind)) throw ConfigError("zva_distribution: measure is not a ZVA kind");
  if (!pre.in_lambda(x) || pre.space().is_terminal(x)) throw ConfigError("zva_distribution: state outside Lambda");
  const Row& row = pre.row(x);
  std::vector<double> p, v;
  for (const Edge& e : row) {
    p.push_back(e.probability);
    v.push_back(zva_value(pre, kind, e.target));
  }
  auto q = zva_weights(p, v);
  std::vector<std::pair<std::int32_t, double>> out;
  for (std::size_t i = 0; i < row.size(); ++i) out.emplace_back(row[i].target, q ? (*q)[i] : p[i]);
  return out;
}

/// Precomputed ZVA rows for every non-terminal state of Lambda.
class ZvaTable {
 public:
  struct Entry {
    std::int32_t target;
    double p;    // reduced-chain probability
    double q;    // sampling probability
    double cdf;  // cumulative q
    EpsilonOrder order;
  };

  ZvaTable(const PreprocessResult& pre, MeasureKind kind) : kind_(kind) {
    if (!is_zva(kind)) throw ConfigError("ZvaTable: measure is not a ZVA kind");
    rows_.resize(pre.space().size());
    for (std::int32_t x : pre.lambda()) {
      if (pre.space().is_terminal(x)) continue;
      const Row& row = pre.row(x);
      auto dist = zva_distribution(pre, kind, x);
      auto& out = rows_[static_cast<std::size_t>(x)];
      double acc = 0.0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        acc += dist[i].second;
        out.push_back({row[i].target, row[i].probability, dist[i].second, acc, row[i].order});
      }
      for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (it->q > 0.0) {
          it->cdf = 1.0;
          break;
        }
      }
    }
  }

  MeasureKind kind() const { return kind_; }
  const std::vector<Entry>& row(std::int32_t x) const { return rows_[static_cast<std::size_t>(x)]; }

 private:
  MeasureKind kind_;
  std::vector<std::vector<Entry>> rows_;
};

/// Q(Delta): probability under the ZVA measure of sampling a dominant path,
/// i.e. a path to g inside Lambda along edges with r + dbar(z) = dbar(x).
/// Evaluated by a depth-first post-order over those edges.
inline double compute_q_delta(const PreprocessResult& pre, const ZvaTable& table) {
  const std::int32_t g = pre.goal();
  const std::int32_t s = pre.initial();
  std::vector<double> w(pre.space().size(), 0.0);
  enum : std::uint8_t { kNew, kOpen, kClosed };
  std::vector<std::uint8_t> mark(pre.space().size(), kNew);
  auto tight = [&](std::int32_t x, const ZvaTable::Entry& e) {
    EpsilonOrder dz = pre.d_backward(e.target);
    if (!dz.is_finite() || e.order + dz != pre.d_backward(x)) return false;
    return e.target == g || (pre.in_lambda(e.target) && !pre.space().is_terminal(e.target));
  };
  if (!pre.d_backward(s).is_finite()) return 0.0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{s, 0}};
  mark[static_cast<std::size_t>(s)] = kOpen;
  while (!stack.empty()) {
    auto& [x, next] = stack.back();
    const auto& row = table.row(x);
    bool descended = false;
    while (next < row.size()) {
      const auto& e = row[next++];
      if (e.target == g || !tight(x, e)) continue;
      auto kz = static_cast<std::size_t>(e.target);
      if (mark[kz] == kOpen) throw ModelError("compute_q_delta: order-0 cycle left in the relevant set");
      if (mark[kz] == kNew) {
        mark[kz] = kOpen;
        stack.emplace_back(e.target, 0);
        descended = true;
        break;
      }
    }
    if (descended) continue;
    double acc = 0.0;
    for (const auto& e : row) {
      if (!tight(x, e)) continue;
      acc += e.q * (e.target == g ? 1.0 : w[static_cast<std::size_t>(e.target)]);
    }
    w[static_cast<std::size_t>(x)] = acc;
    mark[static_cast<std::size_t>(x)] = kClosed;
    stack.pop_back();
  }
  return w[static_cast<std::size_t>(s)];
}

}  // namespace pathzva
