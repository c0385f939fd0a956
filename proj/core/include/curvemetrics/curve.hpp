#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "curvemetrics/interval.hpp"

namespace curvemetrics {

/// Term `coefficient * (x - a)^exponent` anchored at the lower domain bound a.
///
/// Used for estimates such as c*sqrt(x) whose derivatives are unbounded at the
/// boundary, which no piecewise polynomial can express. Non-positive exponents
/// evaluate to +/-infinity at x = a.
struct PowerTerm {
  double coefficient = 0.0;
  double exponent = 1.0;

  friend auto operator==(const PowerTerm&, const PowerTerm&) -> bool = default;
};

struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
};

enum class Interpolation { natural_cubic, piecewise_linear };

/// Univariable function on a closed interval: a piecewise polynomial plus an
/// optional sum of boundary power terms.
///
/// Segment i covers [knots[i], knots[i+1]) and stores its coefficients in the
/// local variable t = x - knots[i], lowest order first. The right domain end
/// belongs to the last segment. Instances are immutable.
class Curve {
 public:
  static constexpr int kMaxDegree = 5;
  /// Smoothness of derivatives of piecewise-linear curves: segments may jump.
  static constexpr int kDiscontinuous = -1;

  /// Throws ValidationError when knots are not strictly increasing, a segment
  /// exceeds kMaxDegree, or adjacent segments disagree at a shared knot in any
  /// derivative up to `smoothness` (relative tolerance 1e-9).
  Curve(std::vector<double> knots, std::vector<std::vector<double>> coefficients,
        int smoothness, std::vector<PowerTerm> power_terms = {});

  /// Single polynomial sum_k c[k] x^k (global monomial basis) on `domain`.
  [[nodiscard]] static auto polynomial(Interval domain, std::span<const double> monomials)
      -> Curve;
  [[nodiscard]] static auto constant(Interval domain, double value) -> Curve;

  /// Interpolant through `points`; x must be strictly increasing.
  [[nodiscard]] static auto from_samples(std::span<const SamplePoint> points,
                                         Interpolation method) -> Curve;

  /// Throws DomainError for x outside the domain.
  [[nodiscard]] auto operator()(double x) const -> double;
  [[nodiscard]] auto eval(double x) const -> double { return (*this)(x); }

  /// Formal derivative of every segment and power term; order 1 or 2.
  [[nodiscard]] auto derivative(int order) const -> Curve;

  [[nodiscard]] auto domain() const noexcept -> Interval {
    return {knots_.front(), knots_.back()};
  }
  [[nodiscard]] auto knots() const noexcept -> std::span<const double> { return knots_; }
  [[nodiscard]] auto coefficients() const noexcept -> const std::vector<std::vector<double>>& {
    return coefficients_;
  }
  [[nodiscard]] auto power_terms() const noexcept -> std::span<const PowerTerm> {
    return power_terms_;
  }
  [[nodiscard]] auto smoothness() const noexcept -> int { return smoothness_; }
  [[nodiscard]] auto segment_count() const noexcept -> std::size_t { return coefficients_.size(); }
  [[nodiscard]] auto degree() const noexcept -> int;

  /// Index of the segment used for x (x already inside the domain).
  [[nodiscard]] auto segment_index(double x) const noexcept -> std::size_t;

  /// Values on the closed uniform grid of `count` points (count >= 2).
  [[nodiscard]] auto sample(std::size_t count) const -> std::vector<SamplePoint>;

  /// Pointwise sum; both curves must share the domain.
  friend auto operator+(const Curve& a, const Curve& b) -> Curve;
  friend auto operator-(const Curve& a, const Curve& b) -> Curve;
  [[nodiscard]] auto scaled(double factor) const -> Curve;

 private:
  std::vector<double> knots_;
  std::vector<std::vector<double>> coefficients_;
  std::vector<PowerTerm> power_terms_;
  int smoothness_ = 0;
};

/// Horner evaluation of sum_k c[k] t^k.
[[nodiscard]] auto horner(std::span<const double> c, double t) noexcept -> double;

}  // namespace curvemetrics
