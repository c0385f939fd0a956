#include "curvemetrics/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

auto same_interval(Interval a, Interval b) -> bool {
  const double tol = 1e-12 * std::max(1.0, a.length());
  return std::abs(a.lo - b.lo) <= tol && std::abs(a.hi - b.hi) <= tol;
}

}  // namespace

auto Scenario::estimate(std::string_view wanted) const -> const Estimate& {
  for (const auto& e : estimates)
    if (e.name == wanted) return e;
  throw NotFoundError("scenario '" + name + "' has no estimate '" + std::string(wanted) + "'");
}

auto Scenario::estimate_names() const -> std::vector<std::string> {
  std::vector<std::string> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.push_back(e.name);
  return out;
}

auto Scenario::with_distribution(PredictorDistribution d) const -> Scenario {
  Scenario copy = *this;
  copy.distribution = std::move(d);
  validate(copy);
  return copy;
}

void validate(const Scenario& s) {
  if (s.name.empty()) throw ValidationError("scenario name is empty", "name");
  if (s.estimates.empty()) throw ValidationError("scenario has no estimates", "estimates");
  const Interval domain = s.truth.domain();
  std::set<std::string> names;
  for (const auto& e : s.estimates) {
    if (e.name.empty()) throw ValidationError("estimate name is empty", "estimates");
    if (!names.insert(e.name).second)
      throw ValidationError("duplicate estimate name '" + e.name + "'", "estimates");
    if (!same_interval(e.curve.domain(), domain))
      throw ValidationError("estimate '" + e.name + "' does not share the truth's domain",
                            "estimates");
    if (e.precision && !same_interval(e.precision->domain(), domain))
      throw ValidationError("precision of '" + e.name + "' does not share the truth's domain",
                            "precision");
  }
  if (!same_interval(s.distribution.domain(), domain))
    throw ValidationError("distribution domain differs from the curve domain", "distribution");
}

}  // namespace curvemetrics
