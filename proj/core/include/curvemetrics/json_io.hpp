#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "curvemetrics/curve.hpp"
#include "curvemetrics/distribution.hpp"
#include "curvemetrics/fitting.hpp"
#include "curvemetrics/kernels.hpp"
#include "curvemetrics/measure_spec.hpp"
#include "curvemetrics/scenario.hpp"
#include "curvemetrics/study.hpp"

namespace curvemetrics {

using Json = nlohmann::json;

// Readers throw ValidationError naming the offending field.

/// Coefficient form {"domain","knots","coefficients","smoothness"} with an
/// optional "power_terms":[[c,p],...], or sampled form {"points","method"}.
[[nodiscard]] auto curve_to_json(const Curve& c) -> Json;
[[nodiscard]] auto curve_from_json(const Json& j) -> Curve;
/// {"x":[...], "y":[...]} on `count` equally spaced points.
[[nodiscard]] auto curve_samples_json(const Curve& c, std::size_t count) -> Json;

[[nodiscard]] auto distribution_to_json(const PredictorDistribution& d) -> Json;
[[nodiscard]] auto distribution_from_json(const Json& j) -> PredictorDistribution;

[[nodiscard]] auto spec_to_json(const MeasureSpec& s) -> Json;
/// Parses without checking lattice legality; call validate() afterwards.
[[nodiscard]] auto spec_from_json(const Json& j) -> MeasureSpec;
/// Either a bare array of specs or {"measures":[...]}.
[[nodiscard]] auto specs_from_json(const Json& j) -> std::vector<MeasureSpec>;

[[nodiscard]] auto scenario_to_json(const Scenario& s) -> Json;
[[nodiscard]] auto scenario_from_json(const Json& j) -> Scenario;

/// Non-finite values are written as the strings "inf", "-inf", "undefined".
[[nodiscard]] auto value_to_json(const EvalValue& v) -> Json;
[[nodiscard]] auto eval_to_json(const EvalValue& v) -> Json;
[[nodiscard]] auto rank_table_to_json(const RankTable& t) -> Json;
[[nodiscard]] auto fitted_model_to_json(const FittedModel& m) -> Json;

/// The aspect lattice and legality rules, for clients building spec forms.
[[nodiscard]] auto measure_schema_json() -> Json;

[[nodiscard]] auto read_json_file(const std::filesystem::path& path) -> Json;

}  // namespace curvemetrics
