#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "curvemetrics/interval.hpp"

namespace curvemetrics {

/// Discretization of an aggregation scope S.
///
/// A midpoint grid holds one sample point inside each cell; a closed grid
/// holds the cell edges (both ends of S included) with half-cell weights at
/// the ends. In both cases the widths sum to |S|.
class EvaluationGrid {
 public:
  /// `cells` equal cells, sample points at the cell midpoints.
  [[nodiscard]] static auto uniform(Interval scope, std::size_t cells) -> EvaluationGrid;

  /// Midpoint grid whose cell edges include every breakpoint inside the
  /// scope. At least `cells` cells are spread over the pieces in proportion
  /// to their length; within a piece the edges follow the map
  /// 6t^5 - 15t^4 + 10t^3, which clusters cells at the piece ends so that
  /// x^(-1/2)-type endpoint singularities stay integrable on the grid.
  [[nodiscard]] static auto aligned(Interval scope, std::size_t cells,
                                    std::span<const double> breakpoints) -> EvaluationGrid;

  /// Closed counterpart of `aligned`: points are the cell edges.
  [[nodiscard]] static auto closed(Interval scope, std::size_t cells,
                                   std::span<const double> breakpoints) -> EvaluationGrid;

  [[nodiscard]] auto points() const noexcept -> std::span<const double> { return points_; }
  [[nodiscard]] auto widths() const noexcept -> std::span<const double> { return widths_; }
  /// Cell boundaries (size = cells + 1) for midpoint grids; equal to points()
  /// for closed grids.
  [[nodiscard]] auto edges() const noexcept -> std::span<const double> { return edges_; }
  [[nodiscard]] auto scope() const noexcept -> Interval { return scope_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return points_.size(); }
  [[nodiscard]] auto is_closed() const noexcept -> bool { return closed_; }
  /// Largest distance between neighbouring points.
  [[nodiscard]] auto max_step() const noexcept -> double;

 private:
  EvaluationGrid() = default;

  std::vector<double> points_;
  std::vector<double> widths_;
  std::vector<double> edges_;
  Interval scope_{};
  bool closed_ = false;
};

enum class ValueKind { finite, positive_infinity, negative_infinity, undefined };

/// Extended-real measure value.
///
/// `divergent` is set whenever the value is not finite; `n_nonfinite` counts
/// the non-finite or overflowing integrand samples behind it.
struct EvalValue {
  double value = 0.0;
  bool divergent = false;
  std::size_t n_nonfinite = 0;

  [[nodiscard]] static auto finite(double v) -> EvalValue { return {v, false, 0}; }
  [[nodiscard]] static auto positive_infinity(std::size_t n = 0) -> EvalValue {
    return {std::numeric_limits<double>::infinity(), true, n};
  }
  [[nodiscard]] static auto negative_infinity(std::size_t n = 0) -> EvalValue {
    return {-std::numeric_limits<double>::infinity(), true, n};
  }
  [[nodiscard]] static auto undefined(std::size_t n = 0) -> EvalValue {
    return {std::numeric_limits<double>::quiet_NaN(), true, n};
  }
  /// Wraps a scalar; non-finite inputs become divergent values.
  [[nodiscard]] static auto from_double(double v) -> EvalValue;

  [[nodiscard]] auto kind() const noexcept -> ValueKind;
  [[nodiscard]] auto is_finite() const noexcept -> bool { return kind() == ValueKind::finite; }

  /// Shortest round-trip decimal, or "inf", "-inf", "undefined".
  [[nodiscard]] auto to_string() const -> std::string;
};

/// Magnitude above which an integrand sample is treated as divergent.
inline constexpr double kDivergenceThreshold = 1e12;

/// Sum of values[k] * width[k]. Non-finite samples or samples beyond
/// kDivergenceThreshold make the result divergent: +inf when every sample is
/// non-negative, -inf when every sample is non-positive, undefined otherwise.
[[nodiscard]] auto riemann(std::span<const double> values, const EvaluationGrid& grid) -> EvalValue;

/// sum_k values[k] * weights[k] with the divergence rules of riemann().
[[nodiscard]] auto weighted_sum(std::span<const double> values, std::span<const double> weights)
    -> EvalValue;

enum class ExtremumMode { max, min };

struct Extremum {
  double value = 0.0;
  double location = 0.0;
};

/// Grid search. Ties (within 1e-12) resolve to the smallest x. Infinite
/// values take part in the comparison; NaN values raise ValidationError.
[[nodiscard]] auto grid_extremum(std::span<const double> values, const EvaluationGrid& grid,
                                 ExtremumMode mode) -> Extremum;

/// Default zero band for count_roots: 1e-9 times the range of |values|.
[[nodiscard]] auto default_zero_band(std::span<const double> values) -> double;

/// Roots on a grid: strict sign changes between neighbours that are both
/// outside the zero band, plus each maximal run of in-band points once.
[[nodiscard]] auto count_roots(std::span<const double> values, const EvaluationGrid& grid,
                               double zero_band) -> std::size_t;

/// Order-statistic quantile with linear interpolation between the closest
/// ranks (h = (n - 1) q).
[[nodiscard]] auto empirical_quantile(std::span<const double> values, double q) -> double;

}  // namespace curvemetrics
