#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "curvemetrics/interval.hpp"

namespace curvemetrics {

/// Function of two predictors tabulated on a tensor grid and evaluated by
/// bilinear interpolation. Values are stored row-major: value(i, j) is at
/// (axis1[i], axis2[j]).
class BivariateCurve {
 public:
  BivariateCurve(std::vector<double> axis1, std::vector<double> axis2, std::vector<double> values);

  /// Tabulates `f` on the given axes.
  [[nodiscard]] static auto tabulate(std::vector<double> axis1, std::vector<double> axis2,
                                     const std::function<double(double, double)>& f)
      -> BivariateCurve;

  [[nodiscard]] auto operator()(double x1, double x2) const -> double;

  [[nodiscard]] auto axis1() const noexcept -> std::span<const double> { return axis1_; }
  [[nodiscard]] auto axis2() const noexcept -> std::span<const double> { return axis2_; }
  [[nodiscard]] auto values() const noexcept -> std::span<const double> { return values_; }
  [[nodiscard]] auto value(std::size_t i, std::size_t j) const -> double {
    return values_[i * axis2_.size() + j];
  }
  [[nodiscard]] auto domain1() const noexcept -> Interval { return {axis1_.front(), axis1_.back()}; }
  [[nodiscard]] auto domain2() const noexcept -> Interval { return {axis2_.front(), axis2_.back()}; }

  /// True when both axes coincide exactly.
  [[nodiscard]] auto same_grid(const BivariateCurve& other) const noexcept -> bool;

 private:
  std::vector<double> axis1_;
  std::vector<double> axis2_;
  std::vector<double> values_;
};

/// Uniformly spaced axis of `count` points covering `range`.
[[nodiscard]] auto uniform_axis(Interval range, std::size_t count) -> std::vector<double>;

}  // namespace curvemetrics
