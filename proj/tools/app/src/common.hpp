#pragma once

#include <span>
#include <string>

#include "curvemetrics/measures.hpp"
#include "curvemetrics/scenario.hpp"

namespace curvemetrics::app::detail {

// Rejects empty lists, illegal specs and empty scopes before any cell runs,
// so a panel fails as a whole instead of cell by cell.
void check_panel(const Scenario& scenario, std::span<const MeasureSpec> specs);

[[nodiscard]] auto evaluate_estimate(const Scenario& scenario, const std::string& estimate,
                                     const MeasureSpec& spec, const EvaluationOptions& options)
    -> EvalValue;

}  // namespace curvemetrics::app::detail
