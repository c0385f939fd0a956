#include "curvemetrics/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ValidationError(field + ": " + message, field);
}

auto member(const Json& j, const char* key, const std::string& field) -> const Json& {
  if (!j.is_object()) fail(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

auto has(const Json& j, const char* key) -> bool {
  return j.is_object() && j.contains(key) && !j.at(key).is_null();
}

auto number(const Json& j, const std::string& field) -> double {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

auto numbers(const Json& j, const std::string& field) -> std::vector<double> {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field));
  return out;
}

auto string(const Json& j, const std::string& field) -> std::string {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

auto interval(const Json& j, const std::string& field) -> Interval {
  const auto v = numbers(j, field);
  if (v.size() != 2) fail(field, "expected [lo, hi]");
  return {v[0], v[1]};
}

auto interval_json(Interval i) -> Json { return Json::array({i.lo, i.hi}); }

auto scope_to_json(const Scope& s) -> Json {
  Json j{{"kind", to_string(s.kind)}};
  if (s.kind == ScopeKind::quantile_band) {
    j["l"] = s.l;
    j["u"] = s.u;
  } else if (s.kind == ScopeKind::interval) {
    j["lo"] = s.interval.lo;
    j["hi"] = s.interval.hi;
  }
  return j;
}

auto scope_from_json(const Json& j) -> Scope {
  if (j.is_string()) {
    if (j.get<std::string>() == "full") return Scope::full();
    fail("scope", "expected an object with a kind");
  }
  const ScopeKind kind = parse_scope_kind(string(member(j, "kind", "scope"), "scope.kind"));
  switch (kind) {
    case ScopeKind::full: return Scope::full();
    case ScopeKind::quantile_band:
      return Scope::quantile_band(number(member(j, "l", "scope"), "scope.l"),
                                  number(member(j, "u", "scope"), "scope.u"));
    case ScopeKind::interval:
      if (has(j, "interval")) return Scope::explicit_interval(interval(j["interval"], "scope.interval"));
      return Scope::explicit_interval({number(member(j, "lo", "scope"), "scope.lo"),
                                       number(member(j, "hi", "scope"), "scope.hi")});
  }
  fail("scope", "unknown kind");
}

template <typename T>
auto or_null(const std::optional<T>& v) -> Json {
  return v ? Json(*v) : Json(nullptr);
}

auto parse_method(const std::string& m) -> Interpolation {
  if (m == "natural-cubic" || m == "natural_cubic") return Interpolation::natural_cubic;
  if (m == "piecewise-linear" || m == "piecewise_linear") return Interpolation::piecewise_linear;
  fail("method", "unknown interpolation '" + m + "'");
}

}  // namespace

auto curve_to_json(const Curve& c) -> Json {
  Json j{{"domain", interval_json(c.domain())},
         {"knots", std::vector<double>(c.knots().begin(), c.knots().end())},
         {"coefficients", c.coefficients()},
         {"smoothness", c.smoothness()}};
  if (!c.power_terms().empty()) {
    Json terms = Json::array();
    for (const auto& t : c.power_terms()) terms.push_back({t.coefficient, t.exponent});
    j["power_terms"] = std::move(terms);
  }
  return j;
}

auto curve_from_json(const Json& j) -> Curve {
  if (!j.is_object()) fail("curve", "expected an object");
  if (has(j, "points")) {
    const Json& pts = j["points"];
    if (!pts.is_array()) fail("curve.points", "expected [[x, y], ...]");
    std::vector<SamplePoint> samples;
    for (const auto& p : pts) {
      const auto xy = numbers(p, "curve.points");
      if (xy.size() != 2) fail("curve.points", "expected [x, y] pairs");
      samples.push_back({xy[0], xy[1]});
    }
    const auto method = has(j, "method") ? parse_method(string(j["method"], "curve.method"))
                                         : Interpolation::natural_cubic;
    return Curve::from_samples(samples, method);
  }
  auto knots = numbers(member(j, "knots", "curve"), "curve.knots");
  const Json& cj = member(j, "coefficients", "curve");
  if (!cj.is_array()) fail("curve.coefficients", "expected an array of arrays");
  std::vector<std::vector<double>> coefficients;
  for (const auto& seg : cj) coefficients.push_back(numbers(seg, "curve.coefficients"));
  const int smoothness = has(j, "smoothness") ? j["smoothness"].get<int>() : 0;
  std::vector<PowerTerm> terms;
  if (has(j, "power_terms")) {
    for (const auto& t : j["power_terms"]) {
      const auto v = numbers(t, "curve.power_terms");
      if (v.size() != 2) fail("curve.power_terms", "expected [coefficient, exponent] pairs");
      terms.push_back({v[0], v[1]});
    }
  }
  Curve c(std::move(knots), std::move(coefficients), smoothness, std::move(terms));
  if (has(j, "domain")) {
    const Interval d = interval(j["domain"], "curve.domain");
    if (!(d == c.domain())) fail("curve.domain", "does not match the first and last knot");
  }
  return c;
}

auto curve_samples_json(const Curve& c, std::size_t count) -> Json {
  Json xs = Json::array();
  Json ys = Json::array();
  for (const auto& p : c.sample(count)) {
    xs.push_back(p.x);
    ys.push_back(std::isfinite(p.y) ? Json(p.y) : Json(nullptr));
  }
  return {{"x", std::move(xs)}, {"y", std::move(ys)}};
}

auto distribution_to_json(const PredictorDistribution& d) -> Json {
  if (d.kind() == DistributionKind::empirical) {
    return {{"kind", "empirical"},
            {"values", std::vector<double>(d.sample().begin(), d.sample().end())},
            {"domain", interval_json(d.domain())}};
  }
  return {{"kind", "beta"},
          {"alpha", d.alpha()},
          {"beta", d.beta_param()},
          {"domain", interval_json(d.domain())}};
}

auto distribution_from_json(const Json& j) -> PredictorDistribution {
  const auto kind = string(member(j, "kind", "distribution"), "distribution.kind");
  if (kind == "beta" || kind == "uniform") {
    const Interval d = has(j, "domain") ? interval(j["domain"], "distribution.domain")
                                        : Interval{0.0, 1.0};
    if (kind == "uniform") return PredictorDistribution::uniform(d);
    return PredictorDistribution::beta(number(member(j, "alpha", "distribution"), "distribution.alpha"),
                                       number(member(j, "beta", "distribution"), "distribution.beta"),
                                       d);
  }
  if (kind == "empirical") {
    auto values = numbers(member(j, "values", "distribution"), "distribution.values");
    if (has(j, "domain"))
      return PredictorDistribution::empirical(std::move(values),
                                              interval(j["domain"], "distribution.domain"));
    return PredictorDistribution::empirical(std::move(values));
  }
  fail("distribution.kind", "unknown kind '" + kind + "'");
}

auto spec_to_json(const MeasureSpec& s) -> Json {
  Json j{{"localization", to_string(s.localization)},
         {"characteristic", to_string(s.characteristic)},
         {"loss", to_string(s.loss)},
         {"axis", s.axis ? Json(to_string(*s.axis)) : Json(nullptr)},
         {"aggregation", s.aggregation ? Json(to_string(*s.aggregation)) : Json(nullptr)},
         {"scope", s.scope ? scope_to_json(*s.scope) : Json(nullptr)},
         {"epsilon", or_null(s.epsilon)},
         {"q", or_null(s.q)},
         {"x_star", or_null(s.x_star)}};
  if (s.normalize_precision) j["normalize_precision"] = true;
  return j;
}

auto spec_from_json(const Json& j) -> MeasureSpec {
  if (!j.is_object()) fail("measure", "expected an object");
  MeasureSpec s;
  s.localization = has(j, "localization")
                       ? parse_localization(string(j["localization"], "localization"))
                       : Localization::range;
  s.characteristic = parse_characteristic(string(member(j, "characteristic", ""), "characteristic"));
  s.loss = parse_loss(string(member(j, "loss", ""), "loss"));
  s.axis.reset();
  s.aggregation.reset();
  s.scope.reset();
  if (has(j, "axis")) s.axis = parse_axis(string(j["axis"], "axis"));
  if (has(j, "aggregation")) s.aggregation = parse_aggregation(string(j["aggregation"], "aggregation"));
  if (has(j, "scope")) s.scope = scope_from_json(j["scope"]);
  if (s.localization == Localization::range && !s.scope) s.scope = Scope::full();
  if (has(j, "epsilon")) s.epsilon = number(j["epsilon"], "epsilon");
  if (has(j, "q")) s.q = number(j["q"], "q");
  if (has(j, "x_star")) s.x_star = number(j["x_star"], "x_star");
  if (has(j, "normalize_precision")) {
    if (!j["normalize_precision"].is_boolean()) fail("normalize_precision", "expected a boolean");
    s.normalize_precision = j["normalize_precision"].get<bool>();
  }
  return s;
}

auto specs_from_json(const Json& j) -> std::vector<MeasureSpec> {
  const Json& arr = j.is_object() ? member(j, "measures", "") : j;
  if (!arr.is_array()) fail("measures", "expected an array of measure specs");
  std::vector<MeasureSpec> out;
  for (const auto& item : arr) out.push_back(spec_from_json(item));
  return out;
}

auto scenario_to_json(const Scenario& s) -> Json {
  Json estimates = Json::array();
  for (const auto& e : s.estimates) {
    Json ej{{"name", e.name}, {"curve", curve_to_json(e.curve)}};
    if (e.precision) ej["precision"] = curve_to_json(*e.precision);
    estimates.push_back(std::move(ej));
  }
  return {{"name", s.name},
          {"description", s.description},
          {"domain", interval_json(s.domain())},
          {"truth", curve_to_json(s.truth)},
          {"estimates", std::move(estimates)},
          {"distribution", distribution_to_json(s.distribution)}};
}

auto scenario_from_json(const Json& j) -> Scenario {
  const auto name = string(member(j, "name", "scenario"), "name");
  const auto description = has(j, "description") ? string(j["description"], "description") : "";
  Curve truth = curve_from_json(member(j, "truth", "scenario"));
  std::vector<Estimate> estimates;
  const Json& ej = member(j, "estimates", "scenario");
  if (!ej.is_array()) fail("estimates", "expected an array");
  for (const auto& e : ej) {
    Estimate est{string(member(e, "name", "estimates"), "estimates.name"),
                 curve_from_json(member(e, "curve", "estimates")), std::nullopt};
    if (has(e, "precision")) est.precision = curve_from_json(e["precision"]);
    estimates.push_back(std::move(est));
  }
  auto dist = has(j, "distribution") ? distribution_from_json(j["distribution"])
                                     : PredictorDistribution::uniform(truth.domain());
  Scenario s{name, description, std::move(truth), std::move(estimates), std::move(dist)};
  if (has(j, "domain") && !(interval(j["domain"], "domain") == s.domain()))
    fail("domain", "does not match the truth curve's domain");
  validate(s);
  return s;
}

auto value_to_json(const EvalValue& v) -> Json {
  switch (v.kind()) {
    case ValueKind::finite: return v.value == 0.0 ? Json(0.0) : Json(v.value);
    case ValueKind::positive_infinity: return "inf";
    case ValueKind::negative_infinity: return "-inf";
    case ValueKind::undefined: return "undefined";
  }
  return nullptr;
}

auto eval_to_json(const EvalValue& v) -> Json {
  return {{"value", value_to_json(v)}, {"divergent", v.divergent}, {"n_nonfinite", v.n_nonfinite}};
}

auto rank_table_to_json(const RankTable& t) -> Json {
  Json measures = Json::array();
  for (const auto& col : t.columns) {
    Json cells = Json::array();
    for (std::size_t i = 0; i < col.cells.size(); ++i) {
      const auto& c = col.cells[i];
      Json cj = eval_to_json(c.value);
      cj["estimate"] = t.estimates[i];
      cj["rank"] = c.rank;
      if (c.error) {
        cj["error"] = *c.error;
        cj["error_kind"] = c.error_kind;
      }
      cells.push_back(std::move(cj));
    }
    measures.push_back({{"label", col.label},
                        {"spec", spec_to_json(col.spec)},
                        {"direction", to_string(col.direction)},
                        {"cells", std::move(cells)}});
  }
  return {{"scenario", t.scenario}, {"estimates", t.estimates}, {"measures", std::move(measures)}};
}

auto fitted_model_to_json(const FittedModel& m) -> Json {
  Json basis{{"kind", to_string(m.basis.kind)}, {"description", m.basis.describe()}};
  switch (m.basis.kind) {
    case BasisKind::linear: break;
    case BasisKind::polynomial: basis["degree"] = m.basis.degree; break;
    case BasisKind::bspline:
      basis["degree"] = m.basis.degree;
      basis["n_basis"] = m.basis.n_basis;
      basis["knots"] = m.basis.knots;
      break;
    case BasisKind::fractional_polynomial:
      basis["powers"] = m.basis.powers;
      basis["shift"] = m.basis.shift;
      break;
  }
  const std::size_t k = m.coefficients.size();
  Json cov = Json::array();
  for (std::size_t i = 0; i < k; ++i)
    cov.push_back(std::vector<double>(m.covariance.begin() + static_cast<long>(i * k),
                                      m.covariance.begin() + static_cast<long>((i + 1) * k)));
  return {{"basis", std::move(basis)},
          {"coefficients", m.coefficients},
          {"covariance", std::move(cov)},
          {"sigma2", m.sigma2},
          {"rss", m.rss},
          {"n", m.n},
          {"domain", interval_json(m.domain)},
          {"curve", curve_to_json(m.curve)}};
}

auto measure_schema_json() -> Json {
  auto names = [](auto... values) {
    Json a = Json::array();
    (a.push_back(to_string(values)), ...);
    return a;
  };
  using A = Aggregation;
  return {
      {"aspects",
       {{"localization", names(Localization::range, Localization::point)},
        {"characteristic", names(Characteristic::function, Characteristic::first_derivative,
                                 Characteristic::second_derivative)},
        {"loss", names(Loss::difference, Loss::absolute, Loss::squared, Loss::eps_accuracy)},
        {"axis", names(Axis::y, Axis::x)},
        {"aggregation",
         {{"Y", names(A::integral_dx, A::expectation_dfx, A::quantile_fx, A::precision_weighted,
                      A::max, A::min)},
          {"X", names(A::num_roots, A::argmax_location, A::argmin_location)}}},
        {"scope", names(ScopeKind::full, ScopeKind::quantile_band, ScopeKind::interval)}}},
      {"rules",
       {{"point", "axis, aggregation, scope and q must be absent; x_star required"},
        {"range", "axis and aggregation required; aggregation must belong to the axis"},
        {"epsilon", "only with loss eps_accuracy; positive; defaults to 5% of the relevant range"},
        {"q", "required iff aggregation is quantile_Fx; 0 <= q <= 1"},
        {"quantile_band", "0 <= l < u <= 1"},
        {"interval", "lo < hi; clipped to the domain"},
        {"normalize_precision", "only with precision_weighted"}}},
      {"directions",
       {{"difference", to_string(Direction::smaller_magnitude)},
        {"absolute", to_string(Direction::smaller)},
        {"squared", to_string(Direction::smaller)},
        {"eps_accuracy", to_string(Direction::larger)}}},
      {"distributions",
       Json::array({{{"kind", "beta"}, {"alpha", 2}, {"beta", 2}},
                    {{"kind", "beta"}, {"alpha", 2}, {"beta", 5}},
                    {{"kind", "beta"}, {"alpha", 5}, {"beta", 2}}})},
      {"non_finite_values", Json::array({"inf", "-inf", "undefined"})},
  };
}

auto read_json_file(const std::filesystem::path& path) -> Json {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what(), "file");
  }
}

}  // namespace curvemetrics
