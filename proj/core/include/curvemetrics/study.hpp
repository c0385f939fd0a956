#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvemetrics/measures.hpp"
#include "curvemetrics/scenario.hpp"

namespace curvemetrics {

struct RankCell {
  EvalValue value;
  int rank = 0;
  /// Set when the evaluation raised; the cell then ranks with the divergent
  /// ones.
  std::optional<std::string> error;
  std::string error_kind;
};

struct RankColumn {
  MeasureSpec spec;
  std::string label;
  Direction direction = Direction::smaller;
  std::vector<RankCell> cells;  // one per estimate, scenario order
};

struct RankTable {
  std::string scenario;
  std::vector<std::string> estimates;
  std::vector<RankColumn> columns;
};

/// Competition ranks ("1, 1, 3") of `values` under `direction`. Values equal
/// within 1e-12 * max(1, |v|) tie. Non-finite values and entries flagged in
/// `failed` share the rank after every finite value.
[[nodiscard]] auto competition_ranks(std::span<const EvalValue> values, Direction direction,
                                     const std::vector<bool>& failed = {}) -> std::vector<int>;

struct PanelOptions {
  EvaluationOptions evaluation;
  /// Worker threads; 0 uses the hardware concurrency.
  std::size_t threads = 0;
};

/// Evaluates every (spec, estimate) cell and ranks each column. A failing
/// cell records its error and never aborts the panel. Output order is
/// independent of scheduling.
[[nodiscard]] auto evaluate_panel(const Scenario& scenario, std::span<const MeasureSpec> specs,
                                  const PanelOptions& options = {}) -> RankTable;

struct SimilarityResult {
  /// One value, or {max difference, min difference} of est1 - est2 for the
  /// difference loss under max/min aggregation.
  std::vector<EvalValue> values;
  [[nodiscard]] auto is_pair() const noexcept -> bool { return values.size() == 2; }
};

/// Measure between two estimates. Difference losses are symmetrized by the
/// absolute value; a default epsilon is the mean of the two estimates'
/// defaults.
[[nodiscard]] auto similarity(const MeasureSpec& spec, const Curve& est1, const Curve& est2,
                              const PredictorDistribution& d,
                              const Curve* precision_diff = nullptr,
                              const EvaluationOptions& options = {}) -> SimilarityResult;

/// The eleven measures of the showcase panel.
[[nodiscard]] auto showcase_panel() -> std::vector<MeasureSpec>;

}  // namespace curvemetrics
