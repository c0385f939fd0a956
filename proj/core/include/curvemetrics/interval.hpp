#pragma once

#include <algorithm>
#include <cmath>

namespace curvemetrics {

/// Closed interval [lo, hi] on the predictor axis.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] constexpr auto length() const noexcept -> double { return hi - lo; }
  [[nodiscard]] constexpr auto contains(double x) const noexcept -> bool {
    return x >= lo && x <= hi;
  }
  [[nodiscard]] auto clamp(double x) const noexcept -> double { return std::clamp(x, lo, hi); }

  friend constexpr auto operator==(const Interval&, const Interval&) -> bool = default;
};

/// Intersection of two intervals; lo > hi signals an empty result.
[[nodiscard]] inline auto intersect(const Interval& a, const Interval& b) noexcept -> Interval {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace curvemetrics
