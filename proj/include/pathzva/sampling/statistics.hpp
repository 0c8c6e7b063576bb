#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace pathzva {

inline constexpr double kZ95 = 1.96;

/// Running mean and sum of squared deviations (Welford), mergeable with
/// Chan's pairwise update.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double total = na + nb;
    mean += d * nb / total;
    m2 += o.m2 + d * d * na * nb / total;
    n += o.n;
  }

  /// Unbiased sample variance; 0 below two observations.
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// 95% CLT half-width of the mean of `m`.
inline double ci_half_width(const Moments& m) {
  if (m.n == 0) return 0.0;
  return kZ95 * std::sqrt(m.variance() / static_cast<double>(m.n));
}

/// Work-normalised variance ratio (w_mc / w_m)^2 * rho_mc / rho_m. Undefined
/// when either half-width or runtime is zero.
inline std::optional<double> wnvr(double w_mc, double rho_mc, double w_m, double rho_m) {
  if (!(w_mc > 0.0) || !(w_m > 0.0) || !(rho_mc > 0.0) || !(rho_m > 0.0)) return std::nullopt;
  const double r = w_mc / w_m;
  return r * r * rho_mc / rho_m;
}

}  // namespace pathzva
