#include "curvemetrics/kernels.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

// 6t^5 - 15t^4 + 10t^3: flat to second order at both ends.
auto grade(double t) -> double { return t * t * t * (10.0 + t * (6.0 * t - 15.0)); }

// Pieces of the scope delimited by the breakpoints strictly inside it.
auto pieces(Interval scope, std::span<const double> breakpoints) -> std::vector<double> {
  const double tol = 1e-12 * scope.length();
  std::vector<double> cuts{scope.lo};
  std::vector<double> inner;
  for (double b : breakpoints)
    if (b > scope.lo + tol && b < scope.hi - tol) inner.push_back(b);
  std::sort(inner.begin(), inner.end());
  for (double b : inner)
    if (b - cuts.back() > tol) cuts.push_back(b);
  if (scope.hi - cuts.back() <= tol && cuts.size() > 1) cuts.pop_back();
  cuts.push_back(scope.hi);
  return cuts;
}

// Cells per piece: proportional to length, at least one each, summing to
// max(cells, pieces) by largest remainder.
auto allocate(std::span<const double> cuts, std::size_t cells) -> std::vector<std::size_t> {
  const std::size_t k = cuts.size() - 1;
  const std::size_t total = std::max(cells, k);
  const double length = cuts.back() - cuts.front();
  std::vector<std::size_t> count(k, 1);
  const std::size_t spare = total - k;
  std::vector<double> remainder(k);
  std::size_t used = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double share = static_cast<double>(spare) * (cuts[i + 1] - cuts[i]) / length;
    const auto whole = static_cast<std::size_t>(std::floor(share));
    count[i] += whole;
    used += whole;
    remainder[i] = share - static_cast<double>(whole);
  }
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t j = 0; used < spare; ++j, ++used) count[order[j % k]] += 1;
  return count;
}

void check_scope(Interval scope) {
  if (!(scope.hi > scope.lo) || !std::isfinite(scope.lo) || !std::isfinite(scope.hi))
    throw DegenerateScopeError("evaluation scope has zero length");
}

}  // namespace

auto EvaluationGrid::uniform(Interval scope, std::size_t cells) -> EvaluationGrid {
  check_scope(scope);
  if (cells == 0) throw ValidationError("grid needs at least one cell", "cells");
  EvaluationGrid g;
  g.scope_ = scope;
  const double h = scope.length() / static_cast<double>(cells);
  g.edges_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) g.edges_[i] = scope.lo + h * static_cast<double>(i);
  g.edges_.back() = scope.hi;
  g.points_.resize(cells);
  g.widths_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    g.points_[i] = scope.lo + h * (static_cast<double>(i) + 0.5);
    g.widths_[i] = g.edges_[i + 1] - g.edges_[i];
  }
  return g;
}

auto EvaluationGrid::aligned(Interval scope, std::size_t cells,
                             std::span<const double> breakpoints) -> EvaluationGrid {
  check_scope(scope);
  if (cells == 0) throw ValidationError("grid needs at least one cell", "cells");
  const auto cuts = pieces(scope, breakpoints);
  const auto counts = allocate(cuts, cells);
  EvaluationGrid g;
  g.scope_ = scope;
  g.edges_.push_back(scope.lo);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double len = cuts[p + 1] - a;
    const std::size_t m = counts[p];
    for (std::size_t i = 0; i < m; ++i) {
      const double t0 = static_cast<double>(i) / static_cast<double>(m);
      const double t1 = static_cast<double>(i + 1) / static_cast<double>(m);
      const double left = g.edges_.back();
      const double right = i + 1 == m ? cuts[p + 1] : a + len * grade(t1);
      g.edges_.push_back(right);
      g.widths_.push_back(right - left);
      g.points_.push_back(a + len * grade(0.5 * (t0 + t1)));
    }
  }
  return g;
}

auto EvaluationGrid::closed(Interval scope, std::size_t cells,
                            std::span<const double> breakpoints) -> EvaluationGrid {
  auto g = aligned(scope, cells, breakpoints);
  g.closed_ = true;
  g.points_ = g.edges_;
  const std::size_t n = g.edges_.size();
  g.widths_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = g.edges_[i + 1] - g.edges_[i];
    g.widths_[i] += 0.5 * h;
    g.widths_[i + 1] += 0.5 * h;
  }
  return g;
}

auto EvaluationGrid::max_step() const noexcept -> double {
  double step = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) step = std::max(step, points_[i] - points_[i - 1]);
  return step;
}

auto EvalValue::from_double(double v) -> EvalValue {
  if (std::isnan(v)) return undefined(1);
  if (std::isinf(v)) return v > 0 ? positive_infinity(1) : negative_infinity(1);
  return finite(v);
}

auto EvalValue::kind() const noexcept -> ValueKind {
  if (std::isnan(value)) return ValueKind::undefined;
  if (std::isinf(value)) return value > 0 ? ValueKind::positive_infinity : ValueKind::negative_infinity;
  return ValueKind::finite;
}

auto EvalValue::to_string() const -> std::string {
  switch (kind()) {
    case ValueKind::positive_infinity: return "inf";
    case ValueKind::negative_infinity: return "-inf";
    case ValueKind::undefined: return "undefined";
    case ValueKind::finite: break;
  }
  const double v = value == 0.0 ? 0.0 : value;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

auto riemann(std::span<const double> values, const EvaluationGrid& grid) -> EvalValue {
  if (values.size() != grid.size())
    throw ValidationError("integrand length does not match the grid", "values");
  return weighted_sum(values, grid.widths());
}

auto weighted_sum(std::span<const double> values, std::span<const double> widths) -> EvalValue {
  if (values.size() != widths.size())
    throw ValidationError("values and weights differ in length", "values");
  std::size_t bad = 0;
  bool has_nan = false;
  bool any_negative = false;
  bool any_positive = false;
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (std::isnan(v)) {
      has_nan = true;
      ++bad;
      continue;
    }
    if (v < 0.0) any_negative = true;
    if (v > 0.0) any_positive = true;
    if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold) {
      ++bad;
      continue;
    }
    sum += v * widths[k];
  }
  if (bad == 0) return EvalValue::finite(sum);
  if (has_nan || (any_negative && any_positive)) return EvalValue::undefined(bad);
  return any_negative ? EvalValue::negative_infinity(bad) : EvalValue::positive_infinity(bad);
}

auto grid_extremum(std::span<const double> values, const EvaluationGrid& grid, ExtremumMode mode)
    -> Extremum {
  if (values.size() != grid.size())
    throw ValidationError("value length does not match the grid", "values");
  if (values.empty()) throw ValidationError("empty grid", "values");
  const auto xs = grid.points();
  const double sign = mode == ExtremumMode::max ? 1.0 : -1.0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isnan(values[k])) throw ValidationError("grid values contain NaN", "values");
    if (k == 0) continue;
    const double cur = sign * values[best];
    const double cand = sign * values[k];
    if (std::isinf(cand) || std::isinf(cur)) {
      if (cand > cur) best = k;
      continue;
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(cur));
    if (cand > cur + tol) best = k;
  }
  return {values[best], xs[best]};
}

auto default_zero_band(std::span<const double> values) -> double {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (!(hi >= lo)) return 0.0;
  return 1e-9 * (hi - lo);
}

auto count_roots(std::span<const double> values, const EvaluationGrid& grid, double zero_band)
    -> std::size_t {
  if (values.size() != grid.size())
    throw ValidationError("value length does not match the grid", "values");
  if (!(zero_band >= 0.0)) throw ValidationError("zero band must be non-negative", "zero_band");
  std::size_t roots = 0;
  bool in_run = false;
  int last_sign = 0;  // sign of the last out-of-band point
  for (double v : values) {
    if (std::isnan(v)) throw ValidationError("grid values contain NaN", "values");
    if (std::abs(v) <= zero_band) {
      if (!in_run) ++roots;
      in_run = true;
      last_sign = 0;
      continue;
    }
    const int sign = v > 0 ? 1 : -1;
    if (!in_run && last_sign != 0 && sign != last_sign) ++roots;
    in_run = false;
    last_sign = sign;
  }
  return roots;
}

auto empirical_quantile(std::span<const double> values, double q) -> double {
  if (values.empty()) throw ValidationError("quantile of an empty sample", "values");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("q must lie in [0, 1]", "q");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace curvemetrics
