#include "common.hpp"

#include "curvemetrics/error.hpp"

namespace curvemetrics::app::detail {

void check_panel(const Scenario& scenario, std::span<const MeasureSpec> specs) {
  if (specs.empty()) throw ValidationError("measure list is empty", "measures");
  for (const auto& spec : specs) {
    require_valid(spec);
    if (spec.is_range()) (void)resolve_scope(spec, scenario.distribution, scenario.domain());
  }
}

auto evaluate_estimate(const Scenario& scenario, const std::string& estimate,
                       const MeasureSpec& spec, const EvaluationOptions& options) -> EvalValue {
  const Estimate& e = scenario.estimate(estimate);
  return evaluate(spec, scenario.truth, e.curve, scenario.distribution,
                  e.precision ? &*e.precision : nullptr, options);
}

}  // namespace curvemetrics::app::detail
