#include "curvemetrics/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

auto apply_loss(Loss loss, double d, double eps) -> double {
  switch (loss) {
    case Loss::difference: return d;
    case Loss::absolute: return std::abs(d);
    case Loss::squared: return d * d;
    case Loss::eps_accuracy:
      if (std::isnan(d)) return kNaN;
      return std::abs(d) <= eps ? 1.0 : 0.0;
  }
  return kNaN;
}

auto has_nan(std::span<const double> values) -> bool {
  return std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

auto count_nonfinite(std::span<const double> values) -> std::size_t {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }));
}

void require_same_domain(const Curve& a, const Curve& b, const char* what) {
  const Interval da = a.domain();
  const Interval db = b.domain();
  const double tol = 1e-12 * std::max(1.0, da.length());
  if (std::abs(da.lo - db.lo) > tol || std::abs(da.hi - db.hi) > tol)
    throw ValidationError(std::string(what) + " must share the truth's domain", "domain");
}

auto collect_breakpoints(std::initializer_list<const Curve*> curves) -> std::vector<double> {
  std::vector<double> out;
  for (const Curve* c : curves) {
    if (c == nullptr) continue;
    out.insert(out.end(), c->knots().begin(), c->knots().end());
    if (c->power_terms().empty()) continue;
    // Power terms may be singular at the lower bound; pieces shrinking
    // geometrically towards it keep the per-cell rule accurate there.
    const Interval d = c->domain();
    for (int k = 1; k <= 40; ++k) out.push_back(d.lo + d.length() * std::ldexp(1.0, -k));
  }
  return out;
}

// Integrand sampled at the grid points.
template <typename F>
auto sample(const EvaluationGrid& grid, F&& f) -> std::vector<double> {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid.points()) out.push_back(f(x));
  return out;
}

// Local power-law exponent of |I| towards each end of the scope. An exponent
// of one or more means the integral diverges at that end; the grid sum alone
// stays finite for such integrands because the quadrature nodes never reach the
// singular point.
auto probe_endpoint_divergence(const std::function<double(double)>& integrand, Interval s)
    -> std::optional<EvalValue> {
  constexpr double kExponentFloor = 1.0 - 1e-3;
  const double len = s.length();
  const double deltas[] = {len * std::ldexp(1.0, -20), len * std::ldexp(1.0, -30),
                           len * std::ldexp(1.0, -40)};
  int positive = 0;
  int negative = 0;
  bool undefined = false;
  for (int side = 0; side < 2; ++side) {
    const double edge = side == 0 ? s.lo : s.hi;
    const double dir = side == 0 ? 1.0 : -1.0;
    double v[3];
    for (int k = 0; k < 3; ++k) v[k] = integrand(edge + dir * deltas[k]);
    if (std::isnan(v[2])) {
      undefined = true;
      continue;
    }
    bool diverges = std::isinf(v[2]);
    if (!diverges && std::abs(v[0]) > 0.0 && std::abs(v[1]) > 0.0 && std::isfinite(v[1])) {
      const double step = std::log(deltas[0] / deltas[1]);
      const double g01 = std::log(std::abs(v[1]) / std::abs(v[0])) / step;
      const double g12 = std::log(std::abs(v[2]) / std::abs(v[1])) / step;
      diverges = g01 >= kExponentFloor && g12 >= kExponentFloor &&
                 std::abs(v[2]) * deltas[2] > 1e-12;
    }
    if (!diverges) continue;
    if (v[2] > 0) ++positive; else ++negative;
  }
  if (undefined && positive + negative == 0) return std::nullopt;
  if (positive + negative == 0) return std::nullopt;
  if (undefined || (positive > 0 && negative > 0)) return EvalValue::undefined(0);
  return positive > 0 ? EvalValue::positive_infinity(0) : EvalValue::negative_infinity(0);
}

constexpr std::array<double, 4> kGaussNodes{-0.8611363115940526, -0.3399810435848563,
                                             0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights{0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};

// Bisection for a sign change of `f` on [lo, hi], f(lo) having sign `lo_negative`.
auto bisect(const std::function<double(double)>& f, double lo, double hi, bool lo_negative)
    -> double {
  for (int i = 0; i < 80 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
       ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (v == 0.0) return mid;
    if ((v < 0.0) == lo_negative) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

auto opposite(double a, double b) -> bool { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

// Sign changes of `g` on [l, r], refined by bisection. Samples are the ends
// and the Gauss nodes; where g keeps its sign between two samples but its
// slope `dg` flips, the turning point is checked too, which catches pairs of
// roots closer together than the samples.
void append_roots(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                  double l, double r, std::vector<double>& cuts) {
  std::array<double, 6> xs{};
  xs[0] = l;
  xs[5] = r;
  for (std::size_t k = 0; k < 4; ++k) xs[k + 1] = 0.5 * (l + r) + 0.5 * (r - l) * kGaussNodes[k];
  std::array<double, 6> gs{};
  std::array<double, 6> ds{};
  for (std::size_t k = 0; k < 6; ++k) {
    gs[k] = g(xs[k]);
    ds[k] = dg(xs[k]);
  }
  for (std::size_t k = 0; k + 1 < 6; ++k) {
    const double a = xs[k];
    const double b = xs[k + 1];
    if (!std::isfinite(gs[k]) || !std::isfinite(gs[k + 1])) continue;
    if (opposite(gs[k], gs[k + 1])) {
      cuts.push_back(bisect(g, a, b, gs[k] < 0.0));
      continue;
    }
    if (!std::isfinite(ds[k]) || !std::isfinite(ds[k + 1]) || !opposite(ds[k], ds[k + 1])) continue;
    const double c = bisect(dg, a, b, ds[k] < 0.0);
    const double gc = g(c);
    if (!std::isfinite(gc) || !opposite(gc, gs[k])) continue;
    cuts.push_back(bisect(g, a, c, gs[k] < 0.0));
    cuts.push_back(bisect(g, c, b, gc < 0.0));
  }
}

struct Kink {
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

// Integral of `integrand` over the cells of `grid`: four-point Gauss-Legendre
// on every cell, with cells split where `kink` changes sign so that
// |.| and indicator losses are integrated piece by piece.
auto integrate(const EvaluationGrid& grid, const std::function<double(double)>& integrand,
               const Kink* kink) -> EvalValue {
  const auto edges = grid.edges();
  std::vector<double> values;
  std::vector<double> weights;
  values.reserve(4 * edges.size());
  weights.reserve(4 * edges.size());
  std::vector<double> cuts;
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    cuts.assign({edges[c]});
    if (kink != nullptr) append_roots(kink->value, kink->slope, edges[c], edges[c + 1], cuts);
    cuts.push_back(edges[c + 1]);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
      const double half = 0.5 * (cuts[p + 1] - cuts[p]);
      if (!(half > 0.0)) continue;
      for (std::size_t k = 0; k < 4; ++k) {
        values.push_back(integrand(mid + half * kGaussNodes[k]));
        weights.push_back(half * kGaussWeights[k]);
      }
    }
  }
  return weighted_sum(values, weights);
}

struct Characteristics {
  Curve truth;
  Curve estimate;
};

auto statistic_on_grid(Aggregation agg, std::span<const double> values, const EvaluationGrid& grid)
    -> double {
  if (has_nan(values)) return kNaN;
  switch (agg) {
    case Aggregation::num_roots:
      return static_cast<double>(count_roots(values, grid, default_zero_band(values)));
    case Aggregation::argmax_location: return grid_extremum(values, grid, ExtremumMode::max).location;
    case Aggregation::argmin_location: return grid_extremum(values, grid, ExtremumMode::min).location;
    default: break;
  }
  throw ValidationError("not an axis-X aggregation", "aggregation");
}

auto evaluate_axis_x(const MeasureSpec& spec, const Characteristics& ch, Interval s, double eps,
                     const EvaluationOptions& options) -> EvalValue {
  const auto grid = EvaluationGrid::closed(s, options.grid_cells,
                                           collect_breakpoints({&ch.truth, &ch.estimate}));
  const auto truth_values = sample(grid, [&](double x) { return ch.truth(x); });
  const auto est_values = sample(grid, [&](double x) { return ch.estimate(x); });
  const double t = statistic_on_grid(*spec.aggregation, truth_values, grid);
  const double e = statistic_on_grid(*spec.aggregation, est_values, grid);
  if (std::isnan(t) || std::isnan(e)) return EvalValue::undefined(1);
  return EvalValue::from_double(apply_loss(spec.loss, e - t, eps));
}

auto evaluate_axis_y(const MeasureSpec& spec, const Characteristics& ch,
                     const PredictorDistribution& d, const Curve* precision, Interval s, double eps,
                     const EvaluationOptions& options) -> EvalValue {
  const Aggregation agg = *spec.aggregation;
  const Loss loss = spec.loss;
  auto pointwise = [&](double x) { return apply_loss(loss, ch.estimate(x) - ch.truth(x), eps); };

  if (agg == Aggregation::quantile_fx) {
    const auto xs = truncated_prob_grid(d, s, options.quantile_points);
    std::vector<double> losses;
    losses.reserve(xs.size());
    for (double x : xs) losses.push_back(pointwise(x));
    if (has_nan(losses)) return EvalValue::undefined(count_nonfinite(losses));
    auto result = EvalValue::from_double(empirical_quantile(losses, *spec.q));
    result.n_nonfinite = count_nonfinite(losses);
    return result;
  }

  if (agg == Aggregation::max || agg == Aggregation::min) {
    const auto grid = EvaluationGrid::closed(s, options.grid_cells,
                                             collect_breakpoints({&ch.truth, &ch.estimate}));
    const auto values = sample(grid, pointwise);
    if (has_nan(values)) return EvalValue::undefined(count_nonfinite(values));
    const auto ext =
        grid_extremum(values, grid, agg == Aggregation::max ? ExtremumMode::max : ExtremumMode::min);
    auto result = EvalValue::from_double(ext.value);
    result.n_nonfinite = count_nonfinite(values);
    return result;
  }

  // Integral-type aggregations.
  if (agg == Aggregation::expectation_dfx && !d.has_density()) {
    // Empirical law: mean of the loss over the sample points inside S.
    const auto sample_points = d.sample();
    const double w = 1.0 / static_cast<double>(sample_points.size());
    std::vector<double> values;
    for (double x : sample_points)
      if (s.contains(x)) values.push_back(pointwise(x));
    const std::vector<double> weights(values.size(), w);
    return weighted_sum(values, weights);
  }

  if (agg == Aggregation::precision_weighted) {
    if (precision == nullptr)
      throw ValidationError("precision_weighted aggregation needs a precision curve", "precision");
    require_same_domain(ch.truth, *precision, "precision curve");
  }

  std::function<double(double)> weight = [](double) { return 1.0; };
  if (agg == Aggregation::expectation_dfx) weight = [&d](double x) { return d.pdf(x); };
  if (agg == Aggregation::precision_weighted) weight = [precision](double x) { return (*precision)(x); };

  const auto grid = EvaluationGrid::aligned(
      s, options.grid_cells,
      collect_breakpoints({&ch.truth, &ch.estimate,
                           agg == Aggregation::precision_weighted ? precision : nullptr}));

  auto integrand = [&](double x) { return pointwise(x) * weight(x); };
  std::optional<Kink> kink;
  if (loss == Loss::absolute || loss == Loss::eps_accuracy) {
    const Curve slope = ch.estimate.derivative(1) - ch.truth.derivative(1);
    auto diff = [&ch](double x) { return ch.estimate(x) - ch.truth(x); };
    if (loss == Loss::absolute) {
      kink = Kink{diff, [slope](double x) { return slope(x); }};
    } else {
      kink = Kink{[diff, eps](double x) { return std::abs(diff(x)) - eps; },
                  [diff, slope](double x) { return diff(x) < 0.0 ? -slope(x) : slope(x); }};
    }
  }
  EvalValue result = integrate(grid, integrand, kink ? &*kink : nullptr);
  if (result.is_finite()) {
    if (auto divergence = probe_endpoint_divergence(integrand, s)) result = *divergence;
  }

  if (agg == Aggregation::precision_weighted && spec.normalize_precision && result.is_finite()) {
    const auto mass = integrate(grid, weight, nullptr);
    if (!mass.is_finite() || !(mass.value > 0.0))
      throw ValidationError("precision curve has no positive mass on the scope", "precision");
    result.value /= mass.value;
  }
  return result;
}

// Golden-section refinement of a grid extremum inside [a, b].
auto refine_extremum(const Curve& c, double a, double b, double sign) -> double {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = sign * c(x1);
  double f2 = sign * c(x2);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = sign * c(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = sign * c(x2);
    }
  }
  return std::max(f1, f2);
}

// max - min of c over s; the grid extremes are polished so the result does
// not depend on the grid resolution.
auto characteristic_range(const Curve& c, Interval s, const EvaluationOptions& options) -> double {
  const auto grid = EvaluationGrid::closed(s, options.grid_cells, c.knots());
  const auto xs = grid.points();
  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = c(xs[i]);
  double extreme[2] = {0.0, 0.0};
  for (int m = 0; m < 2; ++m) {
    const double sign = m == 0 ? 1.0 : -1.0;
    std::size_t best = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::isnan(values[i])) continue;
      if (best == xs.size() || sign * values[i] > sign * values[best]) best = i;
    }
    if (best == xs.size()) return 0.0;
    double v = sign * values[best];
    if (std::isfinite(v)) {
      const double a = xs[best > 0 ? best - 1 : best];
      const double b = xs[best + 1 < xs.size() ? best + 1 : best];
      v = std::max(v, refine_extremum(c, a, b, sign));
    }
    extreme[m] = sign * v;
  }
  return extreme[0] - extreme[1];
}

}  // namespace

auto characteristic_curve(const Curve& curve, Characteristic c) -> Curve {
  switch (c) {
    case Characteristic::function: return curve;
    case Characteristic::first_derivative: return curve.derivative(1);
    case Characteristic::second_derivative: return curve.derivative(2);
  }
  return curve;
}

auto resolve_scope(const MeasureSpec& spec, const PredictorDistribution& d, Interval domain)
    -> Interval {
  const Scope scope = spec.effective_scope();
  Interval s = domain;
  switch (scope.kind) {
    case ScopeKind::full: break;
    case ScopeKind::quantile_band:
      s = intersect(domain, Interval{d.quantile(scope.l), d.quantile(scope.u)});
      break;
    case ScopeKind::interval: s = intersect(domain, scope.interval); break;
  }
  if (!(s.hi > s.lo)) throw DegenerateScopeError("aggregation scope is empty");
  return s;
}

auto default_epsilon(const MeasureSpec& spec, const Curve& truth, const PredictorDistribution& d,
                     const EvaluationOptions& options) -> double {
  const Interval domain = truth.domain();
  double length = 0.0;
  if (spec.localization == Localization::point) {
    length = characteristic_range(characteristic_curve(truth, spec.characteristic), domain, options);
  } else {
    const Interval s = resolve_scope(spec, d, domain);
    if (spec.axis && *spec.axis == Axis::x) {
      length = s.length();
    } else {
      length = characteristic_range(characteristic_curve(truth, spec.characteristic), s, options);
    }
  }
  if (!(length > 0.0))
    throw ValidationError("cannot derive a default epsilon from a zero-length range", "epsilon");
  return 0.05 * length;
}

auto evaluate(const MeasureSpec& spec, const Curve& truth, const Curve& estimate,
              const PredictorDistribution& d, const Curve* precision,
              const EvaluationOptions& options) -> EvalValue {
  require_valid(spec);
  require_same_domain(truth, estimate, "estimate");
  const Characteristics ch{characteristic_curve(truth, spec.characteristic),
                           characteristic_curve(estimate, spec.characteristic)};
  const double eps = spec.loss != Loss::eps_accuracy
                         ? 0.0
                         : spec.epsilon.value_or(std::numeric_limits<double>::quiet_NaN());
  const auto resolved_eps = [&] {
    return std::isnan(eps) ? default_epsilon(spec, truth, d, options) : eps;
  };

  if (spec.localization == Localization::point) {
    const double x = *spec.x_star;
    if (!truth.domain().contains(x)) throw DomainError("x_star outside the curve domain", "x_star");
    const double e = spec.loss == Loss::eps_accuracy ? resolved_eps() : 0.0;
    return EvalValue::from_double(apply_loss(spec.loss, ch.estimate(x) - ch.truth(x), e));
  }

  const Interval s = resolve_scope(spec, d, truth.domain());
  const double e = spec.loss == Loss::eps_accuracy ? resolved_eps() : 0.0;
  if (*spec.axis == Axis::x) return evaluate_axis_x(spec, ch, s, e, options);
  return evaluate_axis_y(spec, ch, d, precision, s, e, options);
}

auto evaluate_bivariable(Loss loss, const BivariateCurve& truth, const BivariateCurve& estimate,
                         const BivariateCurve& joint_density, std::optional<double> epsilon)
    -> EvalValue {
  if (!truth.same_grid(estimate) || !truth.same_grid(joint_density))
    throw ValidationError("bivariable curves and density must share one grid", "grid");
  double eps = 0.0;
  if (loss == Loss::eps_accuracy) {
    if (!epsilon || !(*epsilon > 0.0))
      throw ValidationError("eps_accuracy needs a positive epsilon", "epsilon");
    eps = *epsilon;
  }
  const auto a1 = truth.axis1();
  const auto a2 = truth.axis2();
  std::vector<double> values;
  std::vector<double> areas;
  values.reserve((a1.size() - 1) * (a2.size() - 1));
  areas.reserve(values.capacity());
  for (std::size_t i = 0; i + 1 < a1.size(); ++i) {
    const double x1 = 0.5 * (a1[i] + a1[i + 1]);
    for (std::size_t j = 0; j + 1 < a2.size(); ++j) {
      const double x2 = 0.5 * (a2[j] + a2[j + 1]);
      const double l = apply_loss(loss, estimate(x1, x2) - truth(x1, x2), eps);
      values.push_back(l * joint_density(x1, x2));
      areas.push_back((a1[i + 1] - a1[i]) * (a2[j + 1] - a2[j]));
    }
  }
  return weighted_sum(values, areas);
}

}  // namespace curvemetrics
