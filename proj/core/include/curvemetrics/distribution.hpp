#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "curvemetrics/interval.hpp"

namespace curvemetrics {

enum class DistributionKind { beta, empirical };

/// Distribution P_X of the predictor on a bounded domain: either a Beta law
/// mapped affinely onto the domain or the empirical law of a sample.
class PredictorDistribution {
 public:
  [[nodiscard]] static auto beta(double alpha, double beta, Interval domain = {0.0, 1.0})
      -> PredictorDistribution;
  [[nodiscard]] static auto uniform(Interval domain = {0.0, 1.0}) -> PredictorDistribution {
    return beta(1.0, 1.0, domain);
  }
  /// Domain defaults to [min, max] of the sample.
  [[nodiscard]] static auto empirical(std::vector<double> values) -> PredictorDistribution;
  [[nodiscard]] static auto empirical(std::vector<double> values, Interval domain)
      -> PredictorDistribution;

  [[nodiscard]] auto kind() const noexcept -> DistributionKind { return kind_; }
  [[nodiscard]] auto domain() const noexcept -> Interval { return domain_; }
  [[nodiscard]] auto alpha() const noexcept -> double { return alpha_; }
  [[nodiscard]] auto beta_param() const noexcept -> double { return beta_; }
  /// Sorted sample (empirical kind only).
  [[nodiscard]] auto sample() const noexcept -> std::span<const double> { return sample_; }
  [[nodiscard]] auto has_density() const noexcept -> bool { return kind_ == DistributionKind::beta; }

  /// Density on the domain scale. Throws UnsupportedOperationError for the
  /// empirical kind.
  [[nodiscard]] auto pdf(double x) const -> double;
  [[nodiscard]] auto cdf(double x) const -> double;
  /// Smallest x with cdf(x) >= p.
  [[nodiscard]] auto quantile(double p) const -> double;

  /// Human-readable label such as "Beta(2,5)" or "empirical(n=100)".
  [[nodiscard]] auto label() const -> std::string;

  friend auto operator==(const PredictorDistribution&, const PredictorDistribution&)
      -> bool = default;

 private:
  PredictorDistribution() = default;

  DistributionKind kind_ = DistributionKind::beta;
  Interval domain_{};
  double alpha_ = 1.0;
  double beta_ = 1.0;
  double log_norm_ = 0.0;  // -log B(alpha, beta)
  std::vector<double> sample_;
};

/// Regularized incomplete beta I_x(a, b) by continued fraction.
[[nodiscard]] auto incomplete_beta(double a, double b, double x) -> double;

/// Deterministic stand-in for sampling from P_X truncated to `scope`:
/// x_k = F^{-1}(F(lo) + m (k - 1/2) / n) for k = 1..n, with m the mass of the
/// scope. Throws DegenerateScopeError when m == 0.
[[nodiscard]] auto truncated_prob_grid(const PredictorDistribution& d, Interval scope,
                                       std::size_t n) -> std::vector<double>;

}  // namespace curvemetrics
