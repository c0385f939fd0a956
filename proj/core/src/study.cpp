#include "curvemetrics/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

auto error_kind(const std::exception& e) -> std::string {
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const DegenerateScopeError*>(&e)) return "degenerate_scope";
  if (dynamic_cast<const UnsupportedOperationError*>(&e)) return "unsupported";
  if (dynamic_cast<const NotFoundError*>(&e)) return "not_found";
  return "internal";
}

auto rank_key(double v, Direction direction) -> double {
  switch (direction) {
    case Direction::smaller: return v;
    case Direction::smaller_magnitude: return std::abs(v);
    case Direction::larger: return -v;
  }
  return v;
}

}  // namespace

auto competition_ranks(std::span<const EvalValue> values, Direction direction,
                       const std::vector<bool>& failed) -> std::vector<int> {
  const std::size_t m = values.size();
  std::vector<char> ok(m);
  std::vector<double> keys(m, 0.0);
  std::size_t finite = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ok[i] = values[i].is_finite() && (failed.empty() || !failed[i]);
    if (ok[i]) {
      keys[i] = rank_key(values[i].value, direction);
      ++finite;
    }
  }
  std::vector<int> ranks(m, static_cast<int>(finite) + 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (!ok[i]) continue;
    int better = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!ok[j] || j == i) continue;
      const double tol = 1e-12 * std::max(1.0, std::abs(keys[i]));
      if (keys[j] < keys[i] - tol) ++better;
    }
    ranks[i] = better + 1;
  }
  return ranks;
}

auto evaluate_panel(const Scenario& scenario, std::span<const MeasureSpec> specs,
                    const PanelOptions& options) -> RankTable {
  RankTable table;
  table.scenario = scenario.name;
  table.estimates = scenario.estimate_names();
  const std::size_t n_est = scenario.estimates.size();
  for (const auto& spec : specs) {
    RankColumn col;
    col.spec = spec;
    col.label = label(spec);
    col.direction = direction(spec);
    col.cells.resize(n_est);
    table.columns.push_back(std::move(col));
  }

  const std::size_t total = specs.size() * n_est;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t s = k / n_est;
      const std::size_t e = k % n_est;
      RankCell& cell = table.columns[s].cells[e];
      const Estimate& est = scenario.estimates[e];
      try {
        cell.value = evaluate(specs[s], scenario.truth, est.curve, scenario.distribution,
                              est.precision ? &*est.precision : nullptr, options.evaluation);
      } catch (const std::exception& ex) {
        cell.value = EvalValue::undefined(0);
        cell.error = ex.what();
        cell.error_kind = error_kind(ex);
      }
    }
  };
  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(total, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (auto& col : table.columns) {
    std::vector<EvalValue> values;
    std::vector<bool> failed;
    for (const auto& c : col.cells) {
      values.push_back(c.value);
      failed.push_back(c.error.has_value());
    }
    const auto ranks = competition_ranks(values, col.direction, failed);
    for (std::size_t i = 0; i < col.cells.size(); ++i) col.cells[i].rank = ranks[i];
  }
  return table;
}

auto similarity(const MeasureSpec& spec, const Curve& est1, const Curve& est2,
                const PredictorDistribution& d, const Curve* precision_diff,
                const EvaluationOptions& options) -> SimilarityResult {
  require_valid(spec);
  MeasureSpec s = spec;
  if (s.loss == Loss::eps_accuracy && !s.epsilon) {
    std::vector<double> defaults;
    std::optional<ValidationError> last;
    for (const Curve* c : {&est1, &est2}) {
      try {
        defaults.push_back(default_epsilon(s, *c, d, options));
      } catch (const ValidationError& e) {
        last = e;
      }
    }
    if (defaults.empty()) throw *last;
    s.epsilon = defaults.size() == 2 ? 0.5 * (defaults[0] + defaults[1]) : defaults[0];
  }

  const bool extremum = s.localization == Localization::range && s.aggregation &&
                        (*s.aggregation == Aggregation::max || *s.aggregation == Aggregation::min);
  if (s.loss == Loss::difference && extremum) {
    MeasureSpec hi = s;
    MeasureSpec lo = s;
    hi.aggregation = Aggregation::max;
    lo.aggregation = Aggregation::min;
    return {{evaluate(hi, est2, est1, d, precision_diff, options),
             evaluate(lo, est2, est1, d, precision_diff, options)}};
  }

  const EvalValue forward = evaluate(s, est2, est1, d, precision_diff, options);
  if (s.loss != Loss::difference) return {{forward}};
  const EvalValue backward = evaluate(s, est1, est2, d, precision_diff, options);
  const auto magnitude = [](EvalValue v) {
    if (v.kind() == ValueKind::negative_infinity) return EvalValue::positive_infinity(v.n_nonfinite);
    if (v.is_finite()) v.value = std::abs(v.value);
    return v;
  };
  const EvalValue a = magnitude(forward);
  const EvalValue b = magnitude(backward);
  if (!a.is_finite() || !b.is_finite()) {
    if (a.kind() == ValueKind::undefined || b.kind() == ValueKind::undefined)
      return {{EvalValue::undefined(std::max(a.n_nonfinite, b.n_nonfinite))}};
    return {{EvalValue::positive_infinity(std::max(a.n_nonfinite, b.n_nonfinite))}};
  }
  return {{a.value >= b.value ? a : b}};
}

auto showcase_panel() -> std::vector<MeasureSpec> {
  using A = Aggregation;
  using C = Characteristic;
  using L = Loss;
  const Scope full = Scope::full();
  const Scope band = Scope::quantile_band(0.05, 0.95);
  return {
      MeasureSpec::range(Axis::y, A::integral_dx, C::function, L::absolute, full),
      MeasureSpec::range(Axis::y, A::integral_dx, C::first_derivative, L::absolute, full),
      MeasureSpec::range(Axis::y, A::integral_dx, C::second_derivative, L::absolute, full),
      MeasureSpec::range(Axis::y, A::integral_dx, C::second_derivative, L::absolute, band),
      MeasureSpec::range(Axis::y, A::max, C::function, L::absolute, full),
      MeasureSpec::range(Axis::y, A::max, C::function, L::absolute, band),
      MeasureSpec::range(Axis::y, A::integral_dx, C::function, L::squared, full),
      MeasureSpec::range(Axis::y, A::expectation_dfx, C::function, L::squared, full),
      MeasureSpec::range(Axis::y, A::integral_dx, C::function, L::difference, full),
      MeasureSpec::range(Axis::y, A::expectation_dfx, C::first_derivative, L::absolute, full),
      MeasureSpec::range(Axis::y, A::expectation_dfx, C::first_derivative, L::squared, full),
  };
}

}  // namespace curvemetrics
