#pragma once

#include <cstddef>
#include <optional>

#include "curvemetrics/bivariate_curve.hpp"
#include "curvemetrics/curve.hpp"
#include "curvemetrics/distribution.hpp"
#include "curvemetrics/kernels.hpp"
#include "curvemetrics/measure_spec.hpp"

namespace curvemetrics {

struct EvaluationOptions {
  /// Minimum number of cells of the integration / search grid.
  std::size_t grid_cells = 2001;
  /// Points of the probability grid used by quantile_Fx.
  std::size_t quantile_points = 2001;
};

/// f, f' or f'' of a curve.
[[nodiscard]] auto characteristic_curve(const Curve& curve, Characteristic c) -> Curve;

/// Aggregation scope S inside `domain`: the domain itself, the band
/// [F^{-1}(l), F^{-1}(u)], or an explicit interval clipped to the domain.
/// Throws DegenerateScopeError when the result is empty.
[[nodiscard]] auto resolve_scope(const MeasureSpec& spec, const PredictorDistribution& d,
                                 Interval domain) -> Interval;
[[nodiscard]] inline auto resolve_scope(const MeasureSpec& spec, const PredictorDistribution& d)
    -> Interval {
  return resolve_scope(spec, d, d.domain());
}

/// 5% of the relevant length: |S| for axis X; the range of the truth's
/// characteristic over S for axis Y and over the domain for point measures.
/// Throws ValidationError when that length is zero.
[[nodiscard]] auto default_epsilon(const MeasureSpec& spec, const Curve& truth,
                                   const PredictorDistribution& d,
                                   const EvaluationOptions& options = {}) -> double;

/// Evaluates one measure for (truth, estimate). `precision` is the curve p-hat
/// and is required exactly when the aggregation is precision_weighted.
[[nodiscard]] auto evaluate(const MeasureSpec& spec, const Curve& truth, const Curve& estimate,
                            const PredictorDistribution& d, const Curve* precision = nullptr,
                            const EvaluationOptions& options = {}) -> EvalValue;

/// Riemann sum of L(f_hat - f) * w over the sub-rectangle midpoints of the
/// shared tensor grid, w being the joint density. eps_accuracy needs
/// `epsilon`.
[[nodiscard]] auto evaluate_bivariable(Loss loss, const BivariateCurve& truth,
                                       const BivariateCurve& estimate,
                                       const BivariateCurve& joint_density,
                                       std::optional<double> epsilon = std::nullopt) -> EvalValue;

}  // namespace curvemetrics
