#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvemetrics/curve.hpp"
#include "curvemetrics/interval.hpp"

namespace curvemetrics {

struct Dataset {
  std::vector<double> x;
  std::vector<double> y;
  /// Predictor domain; defaults to [min x, max x].
  Interval domain{};

  [[nodiscard]] static auto make(std::vector<double> x, std::vector<double> y) -> Dataset;
  [[nodiscard]] static auto make(std::vector<double> x, std::vector<double> y, Interval domain)
      -> Dataset;
  [[nodiscard]] auto size() const noexcept -> std::size_t { return x.size(); }
};

enum class BasisKind { linear, polynomial, bspline, fractional_polynomial };

[[nodiscard]] auto to_string(BasisKind kind) -> std::string_view;

/// Regression basis B(x). B-splines carry the full clamped knot vector and
/// already span the constant; the other kinds prepend an intercept column.
struct BasisSpec {
  BasisKind kind = BasisKind::linear;
  int degree = 1;
  std::size_t n_basis = 0;
  std::vector<double> knots;
  /// Fractional-polynomial powers; 0 stands for log. A repeated power p
  /// contributes x^p log x for its second occurrence.
  std::vector<double> powers;
  /// Shift added to x before the fractional-polynomial transforms.
  double shift = 0.0;

  [[nodiscard]] static auto linear() -> BasisSpec;
  [[nodiscard]] static auto polynomial(int degree) -> BasisSpec;
  /// Clamped B-spline basis of `degree` with `n_basis` functions; interior
  /// knots at equally spaced quantiles of `x`, boundary knots at min/max x.
  [[nodiscard]] static auto bspline(int degree, std::size_t n_basis, std::span<const double> x)
      -> BasisSpec;
  /// Same with the boundary knots given explicitly.
  [[nodiscard]] static auto bspline(int degree, std::size_t n_basis, std::span<const double> x,
                                    Interval boundary) -> BasisSpec;
  [[nodiscard]] static auto fractional_polynomial(std::vector<double> powers, double shift = 0.0)
      -> BasisSpec;

  [[nodiscard]] auto size() const -> std::size_t;
  [[nodiscard]] auto row(double x) const -> std::vector<double>;
  [[nodiscard]] auto describe() const -> std::string;
};

/// Values of the n_basis B-spline basis functions at x.
[[nodiscard]] auto bspline_basis(std::span<const double> knots, int degree, double x)
    -> std::vector<double>;

struct FittedModel {
  BasisSpec basis;
  std::vector<double> coefficients;
  /// Row-major k x k covariance sigma2 * (X'X)^-1.
  std::vector<double> covariance;
  double sigma2 = 0.0;
  double rss = 0.0;
  std::size_t n = 0;
  Interval domain{};
  Curve curve = Curve::constant({0.0, 1.0}, 0.0);

  [[nodiscard]] auto predict(double x) const -> double;
  /// B(x) Sigma B(x)^T.
  [[nodiscard]] auto prediction_variance(double x) const -> double;
};

/// Ordinary least squares by column-pivoted QR. Throws SingularFitError when
/// the design is rank deficient (tolerance 1e-10 relative to the largest
/// pivot) or has no residual degrees of freedom.
[[nodiscard]] auto fit_basis(const Dataset& data, const BasisSpec& basis) -> FittedModel;

/// The standard fractional-polynomial power set.
[[nodiscard]] auto fp_powers() -> std::span<const double>;

/// Shift making every x (and the domain) strictly positive: zero when already
/// positive, otherwise -min plus the smallest gap between distinct values.
[[nodiscard]] auto fp_shift(const Dataset& data) -> double;

/// Exhaustive FP1/FP2 search; minimal RSS wins, ties (relative 1e-10) go to
/// the powers closest to 1.
[[nodiscard]] auto fit_fractional_polynomial(const Dataset& data, int degree) -> FittedModel;

struct PrecisionCurve {
  Curve curve;
  /// Set when some grid variance was zero and the value was capped.
  bool capped = false;
};

inline constexpr double kPrecisionCap = 1e12;
inline constexpr std::size_t kPrecisionGridPoints = 512;

/// 1 / (B(x) Sigma B(x)^T) on a 512-point grid, natural cubic in between.
[[nodiscard]] auto precision_curve(const FittedModel& model) -> PrecisionCurve;

}  // namespace curvemetrics
