#include "curvemetrics/bivariate_curve.hpp"

#include <algorithm>
#include <cmath>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

void check_axis(std::span<const double> axis, const char* name) {
  if (axis.size() < 2) throw ValidationError("grid axis needs at least two points", name);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw ValidationError("grid axis must be finite", name);
    if (i > 0 && !(axis[i] > axis[i - 1]))
      throw ValidationError("grid axis must be strictly increasing", name);
  }
}

// Cell index and fractional position of x along the axis.
auto locate(std::span<const double> axis, double x) -> std::pair<std::size_t, double> {
  const auto it = std::upper_bound(axis.begin(), axis.end(), x);
  auto i = static_cast<std::size_t>(std::distance(axis.begin(), it));
  i = std::clamp<std::size_t>(i, 1, axis.size() - 1) - 1;
  return {i, (x - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

BivariateCurve::BivariateCurve(std::vector<double> axis1, std::vector<double> axis2,
                               std::vector<double> values)
    : axis1_(std::move(axis1)), axis2_(std::move(axis2)), values_(std::move(values)) {
  check_axis(axis1_, "axis1");
  check_axis(axis2_, "axis2");
  if (values_.size() != axis1_.size() * axis2_.size())
    throw ValidationError("value table does not match grid size", "values");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("grid values must be finite", "values");
}

auto BivariateCurve::tabulate(std::vector<double> axis1, std::vector<double> axis2,
                              const std::function<double(double, double)>& f) -> BivariateCurve {
  std::vector<double> values;
  values.reserve(axis1.size() * axis2.size());
  for (double x1 : axis1)
    for (double x2 : axis2) values.push_back(f(x1, x2));
  return BivariateCurve(std::move(axis1), std::move(axis2), std::move(values));
}

auto BivariateCurve::operator()(double x1, double x2) const -> double {
  if (!domain1().contains(x1) || !domain2().contains(x2))
    throw DomainError("point outside bivariate domain", "x");
  const auto [i, s] = locate(axis1_, x1);
  const auto [j, t] = locate(axis2_, x2);
  const double v00 = value(i, j);
  const double v01 = value(i, j + 1);
  const double v10 = value(i + 1, j);
  const double v11 = value(i + 1, j + 1);
  return (1 - s) * ((1 - t) * v00 + t * v01) + s * ((1 - t) * v10 + t * v11);
}

auto BivariateCurve::same_grid(const BivariateCurve& other) const noexcept -> bool {
  return axis1_ == other.axis1_ && axis2_ == other.axis2_;
}

auto uniform_axis(Interval range, std::size_t count) -> std::vector<double> {
  if (count < 2) throw ValidationError("axis needs at least two points", "count");
  std::vector<double> axis(count);
  for (std::size_t i = 0; i < count; ++i)
    axis[i] = range.lo + range.length() * static_cast<double>(i) / static_cast<double>(count - 1);
  axis.back() = range.hi;
  return axis;
}

}  // namespace curvemetrics
