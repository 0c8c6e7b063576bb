#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace pathzva {

/// Integer power of the rarity parameter: a transition with order r has
/// probability Theta(eps^r). Order infinity marks "no transition" and is the
/// absorbing element of addition.
class EpsilonOrder {
 public:
  constexpr EpsilonOrder() = default;
  constexpr explicit EpsilonOrder(int value) : value_(value < 0 ? 0 : value) {}

  static constexpr EpsilonOrder infinity() {
    EpsilonOrder o;
    o.value_ = kInfinite;
    return o;
  }

  constexpr bool is_finite() const { return value_ != kInfinite; }
  constexpr int value() const { return value_; }

  constexpr EpsilonOrder operator+(EpsilonOrder other) const {
    if (!is_finite() || !other.is_finite()) return infinity();
    return EpsilonOrder(value_ + other.value_);
  }
  constexpr EpsilonOrder& operator+=(EpsilonOrder other) { return *this = *this + other; }

  /// Saturating difference, used when re-normalising orders of a distribution.
  constexpr EpsilonOrder minus(EpsilonOrder other) const {
    if (!is_finite()) return infinity();
    if (!other.is_finite()) return EpsilonOrder(0);
    return EpsilonOrder(value_ - other.value_);
  }

  constexpr auto operator<=>(const EpsilonOrder&) const = default;

  std::string to_string() const { return is_finite() ? std::to_string(value_) : std::string("inf"); }

  friend std::ostream& operator<<(std::ostream& os, EpsilonOrder o) { return os << o.to_string(); }

 private:
  static constexpr int kInfinite = std::numeric_limits<int>::max();
  int value_ = 0;
};

inline constexpr EpsilonOrder kZeroOrder{0};
inline constexpr EpsilonOrder kInfiniteOrder = EpsilonOrder::infinity();

}  // namespace pathzva
