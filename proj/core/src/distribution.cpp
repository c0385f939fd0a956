#include "curvemetrics/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

constexpr double kQuantileTolerance = 1e-10;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
auto beta_continued_fraction(double a, double b, double x) -> double {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

auto log_beta(double a, double b) -> double {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

auto incomplete_beta(double a, double b, double x) -> double {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  // The fraction converges fastest below (a+1)/(a+b+2); use the symmetry
  // I_x(a,b) = 1 - I_{1-x}(b,a) above it.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

auto PredictorDistribution::beta(double alpha, double beta, Interval domain)
    -> PredictorDistribution {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive", "alpha");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive", "beta");
  if (!(domain.hi > domain.lo)) throw ValidationError("empty distribution domain", "domain");
  PredictorDistribution d;
  d.kind_ = DistributionKind::beta;
  d.domain_ = domain;
  d.alpha_ = alpha;
  d.beta_ = beta;
  d.log_norm_ = -log_beta(alpha, beta);
  return d;
}

auto PredictorDistribution::empirical(std::vector<double> values) -> PredictorDistribution {
  if (values.empty()) throw ValidationError("empirical sample is empty", "values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const Interval domain{*lo, *hi};
  return empirical(std::move(values), domain);
}

auto PredictorDistribution::empirical(std::vector<double> values, Interval domain)
    -> PredictorDistribution {
  if (values.empty()) throw ValidationError("empirical sample is empty", "values");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("empirical values must be finite", "values");
    if (!domain.contains(v)) throw ValidationError("empirical value outside domain", "values");
  }
  if (domain.hi < domain.lo) throw ValidationError("empty distribution domain", "domain");
  PredictorDistribution d;
  d.kind_ = DistributionKind::empirical;
  d.domain_ = domain;
  std::sort(values.begin(), values.end());
  d.sample_ = std::move(values);
  return d;
}

auto PredictorDistribution::pdf(double x) const -> double {
  if (kind_ == DistributionKind::empirical)
    throw UnsupportedOperationError("pdf is not defined for an empirical distribution");
  if (!domain_.contains(x)) throw DomainError("x outside distribution domain", "x");
  const double width = domain_.length();
  const double u = (x - domain_.lo) / width;
  // Boundary values follow the limits of u^(a-1) (1-u)^(b-1).
  auto edge = [&](double exponent) {
    if (exponent > 0.0) return 0.0;
    if (exponent < 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
  };
  if (u <= 0.0) {
    const double e = edge(alpha_ - 1.0);
    return std::isinf(e) || e == 0.0 ? e : std::exp(log_norm_) / width;
  }
  if (u >= 1.0) {
    const double e = edge(beta_ - 1.0);
    return std::isinf(e) || e == 0.0 ? e : std::exp(log_norm_) / width;
  }
  return std::exp(log_norm_ + (alpha_ - 1.0) * std::log(u) + (beta_ - 1.0) * std::log1p(-u)) /
         width;
}

auto PredictorDistribution::cdf(double x) const -> double {
  if (kind_ == DistributionKind::empirical) {
    if (x < domain_.lo) return 0.0;
    const auto it = std::upper_bound(sample_.begin(), sample_.end(), x);
    return static_cast<double>(std::distance(sample_.begin(), it)) /
           static_cast<double>(sample_.size());
  }
  const double u = (x - domain_.lo) / domain_.length();
  return incomplete_beta(alpha_, beta_, std::clamp(u, 0.0, 1.0));
}

auto PredictorDistribution::quantile(double p) const -> double {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability must lie in [0, 1]", "p");
  if (kind_ == DistributionKind::empirical) {
    if (p <= 0.0) return domain_.lo;
    const auto n = static_cast<double>(sample_.size());
    auto k = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
    k = std::clamp<std::size_t>(k, 1, sample_.size());
    return sample_[k - 1];
  }
  if (p <= 0.0) return domain_.lo;
  if (p >= 1.0) return domain_.hi;

  // Safeguarded Newton on the unit interval: Newton steps that leave the
  // current bracket are replaced by bisection.
  double lo = 0.0;
  double hi = 1.0;
  double u = alpha_ / (alpha_ + beta_);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = incomplete_beta(alpha_, beta_, u) - p;
    if (std::abs(f) <= kQuantileTolerance * 0.01) break;
    if (f < 0.0) lo = u; else hi = u;
    const double density =
        std::exp(log_norm_ + (alpha_ - 1.0) * std::log(u) + (beta_ - 1.0) * std::log1p(-u));
    double next = u - f / density;
    if (!(density > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-16 * std::max(1.0, u)) {
      u = next;
      break;
    }
    u = next;
    if (hi - lo < 1e-17) break;
  }
  return domain_.lo + domain_.length() * u;
}

auto PredictorDistribution::label() const -> std::string {
  std::ostringstream out;
  if (kind_ == DistributionKind::empirical) {
    out << "empirical(n=" << sample_.size() << ")";
  } else {
    out << "Beta(" << alpha_ << "," << beta_ << ")";
    if (domain_ != Interval{0.0, 1.0}) out << " on [" << domain_.lo << "," << domain_.hi << "]";
  }
  return out.str();
}

auto truncated_prob_grid(const PredictorDistribution& d, Interval scope, std::size_t n)
    -> std::vector<double> {
  if (n < 1) throw ValidationError("grid size must be positive", "n");
  const Interval s = intersect(scope, d.domain());
  if (!(s.hi >= s.lo)) throw DegenerateScopeError("scope does not intersect the distribution domain");
  // Mass strictly below the scope, so sample points sitting on s.lo count.
  double lower = d.cdf(s.lo);
  if (d.kind() == DistributionKind::empirical) {
    const auto sample = d.sample();
    const auto below = std::lower_bound(sample.begin(), sample.end(), s.lo) - sample.begin();
    lower = static_cast<double>(below) / static_cast<double>(sample.size());
  }
  const double mass = d.cdf(s.hi) - lower;
  if (!(mass > 0.0)) throw DegenerateScopeError("scope carries zero probability mass");
  std::vector<double> xs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = lower + mass * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    xs[k] = s.clamp(d.quantile(std::min(p, 1.0)));
  }
  return xs;
}

}  // namespace curvemetrics
