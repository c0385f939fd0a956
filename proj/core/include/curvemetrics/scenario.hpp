#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvemetrics/curve.hpp"
#include "curvemetrics/distribution.hpp"
#include "curvemetrics/fitting.hpp"

namespace curvemetrics {

struct Estimate {
  std::string name;
  Curve curve;
  /// Precision curve p-hat, when the estimate comes with one.
  std::optional<Curve> precision;
};

/// Ground truth, named estimates and the predictor distribution.
struct Scenario {
  std::string name;
  std::string description;
  Curve truth;
  std::vector<Estimate> estimates;
  PredictorDistribution distribution;

  [[nodiscard]] auto domain() const -> Interval { return truth.domain(); }
  /// Throws NotFoundError.
  [[nodiscard]] auto estimate(std::string_view name) const -> const Estimate&;
  [[nodiscard]] auto estimate_names() const -> std::vector<std::string>;
  /// Copy evaluated under another distribution on the same domain.
  [[nodiscard]] auto with_distribution(PredictorDistribution d) const -> Scenario;
};

/// Throws ValidationError unless names are non-empty and unique, every curve
/// (estimates and precisions) shares the truth's domain and the distribution
/// lives on that domain.
void validate(const Scenario& scenario);

/// Number of equally spaced design points behind the bundled fits.
inline constexpr std::size_t kBundledDesignPoints = 201;

/// Noiseless design used for the bundled linear estimates: the truth at
/// kBundledDesignPoints equally spaced points of its domain.
[[nodiscard]] auto truth_design(const Curve& truth) -> Dataset;

/// Four analog scenarios on [0, 1]: sigmoid, unimodal, asymptote and a
/// U-then-decline shape, five estimates each (the first is always the OLS
/// linear fit of the truth).
[[nodiscard]] auto bundled_scenarios() -> std::vector<Scenario>;

}  // namespace curvemetrics
