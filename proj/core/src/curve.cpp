#include "curvemetrics/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

constexpr double kContinuityTolerance = 1e-9;

// Re-express a polynomial in t = x - x0 as one in t' = x - (x0 + shift).
auto taylor_shift(std::span<const double> c, double shift) -> std::vector<double> {
  std::vector<double> out(c.begin(), c.end());
  // Repeated synthetic division; O(n^2) is fine for degree <= 5.
  const auto n = out.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k > i; --k) out[k - 1] += shift * out[k];
  }
  return out;
}

auto differentiate(std::span<const double> c) -> std::vector<double> {
  if (c.size() <= 1) return {0.0};
  std::vector<double> out(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) out[k - 1] = static_cast<double>(k) * c[k];
  return out;
}

auto trim(std::vector<double> c) -> std::vector<double> {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

auto power_sum(std::span<const PowerTerm> terms, double t) -> double {
  double sum = 0.0;
  for (const auto& term : terms) sum += term.coefficient * std::pow(t, term.exponent);
  return sum;
}

}  // namespace

auto horner(std::span<const double> c, double t) noexcept -> double {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Curve::Curve(std::vector<double> knots, std::vector<std::vector<double>> coefficients,
             int smoothness, std::vector<PowerTerm> power_terms)
    : knots_(std::move(knots)),
      coefficients_(std::move(coefficients)),
      power_terms_(std::move(power_terms)),
      smoothness_(smoothness) {
  if (knots_.size() < 2) throw ValidationError("curve needs at least two knots", "knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw ValidationError("knots must be finite", "knots");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw ValidationError("knots must be strictly increasing", "knots");
  }
  if (coefficients_.size() != knots_.size() - 1)
    throw ValidationError("expected one coefficient vector per knot interval", "coefficients");
  for (auto& c : coefficients_) {
    if (c.empty()) c.push_back(0.0);
    c = trim(std::move(c));
    if (static_cast<int>(c.size()) > kMaxDegree + 1)
      throw ValidationError("segment degree exceeds 5", "coefficients");
    for (double v : c)
      if (!std::isfinite(v)) throw ValidationError("coefficients must be finite", "coefficients");
  }
  if (smoothness_ < kDiscontinuous || smoothness_ > 2)
    throw ValidationError("smoothness must be -1, 0, 1 or 2", "smoothness");
  for (const auto& term : power_terms_)
    if (!std::isfinite(term.coefficient) || !std::isfinite(term.exponent))
      throw ValidationError("power terms must be finite", "power_terms");

  // Power terms are shared by all segments, so only the polynomial parts
  // need to join up.
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    std::vector<double> left = coefficients_[i - 1];
    std::vector<double> right = coefficients_[i];
    const double width = knots_[i] - knots_[i - 1];
    for (int order = 0; order <= smoothness_; ++order) {
      const double l = horner(left, width);
      const double r = right.front();
      const double scale = std::max({1.0, std::abs(l), std::abs(r)});
      if (std::abs(l - r) > kContinuityTolerance * scale) {
        std::ostringstream msg;
        msg << "segments disagree in derivative " << order << " at knot " << knots_[i]
            << " (" << l << " vs " << r << ")";
        throw ValidationError(msg.str(), "coefficients");
      }
      left = differentiate(left);
      right = differentiate(right);
    }
  }
}

auto Curve::polynomial(Interval domain, std::span<const double> monomials) -> Curve {
  if (!(domain.hi > domain.lo)) throw ValidationError("empty domain", "domain");
  std::vector<double> global(monomials.begin(), monomials.end());
  if (global.empty()) global.push_back(0.0);
  return Curve({domain.lo, domain.hi}, {taylor_shift(global, domain.lo)}, 2);
}

auto Curve::constant(Interval domain, double value) -> Curve {
  const double c[] = {value};
  return polynomial(domain, c);
}

auto Curve::from_samples(std::span<const SamplePoint> points, Interpolation method) -> Curve {
  const std::size_t n = points.size();
  if (n < 2) throw ValidationError("need at least two sample points", "points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
      throw ValidationError("sample points must be finite", "points");
    if (i > 0 && !(points[i].x > points[i - 1].x))
      throw ValidationError("sample x values must be strictly increasing", "points");
  }

  std::vector<double> knots(n);
  for (std::size_t i = 0; i < n; ++i) knots[i] = points[i].x;

  std::vector<std::vector<double>> segments(n - 1);
  if (method == Interpolation::piecewise_linear) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = points[i + 1].x - points[i].x;
      segments[i] = {points[i].y, (points[i + 1].y - points[i].y) / h};
    }
    return Curve(std::move(knots), std::move(segments), 0);
  }

  // Natural cubic: solve the tridiagonal system for second derivatives m with
  // m[0] = m[n-1] = 0 (Thomas algorithm).
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    const std::size_t k = n - 2;
    std::vector<double> diag(k), upper(k), rhs(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = j + 1;
      const double h0 = points[i].x - points[i - 1].x;
      const double h1 = points[i + 1].x - points[i].x;
      diag[j] = 2.0 * (h0 + h1);
      upper[j] = h1;
      rhs[j] = 6.0 * ((points[i + 1].y - points[i].y) / h1 - (points[i].y - points[i - 1].y) / h0);
    }
    for (std::size_t j = 1; j < k; ++j) {
      const double lower = points[j + 1].x - points[j].x;
      const double w = lower / diag[j - 1];
      diag[j] -= w * upper[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t j = k - 1; j-- > 0;) m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = points[i + 1].x - points[i].x;
    const double slope = (points[i + 1].y - points[i].y) / h;
    segments[i] = {points[i].y, slope - h * (2.0 * m[i] + m[i + 1]) / 6.0, m[i] / 2.0,
                   (m[i + 1] - m[i]) / (6.0 * h)};
  }
  return Curve(std::move(knots), std::move(segments), 2);
}

auto Curve::segment_index(double x) const noexcept -> std::size_t {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, coefficients_.size() - 1);
}

auto Curve::operator()(double x) const -> double {
  const Interval d = domain();
  const double slack = 1e-12 * d.length();
  if (!(x >= d.lo - slack && x <= d.hi + slack)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside curve domain [" << d.lo << ", " << d.hi << "]";
    throw DomainError(msg.str(), "x");
  }
  x = d.clamp(x);
  const std::size_t i = segment_index(x);
  double value = horner(coefficients_[i], x - knots_[i]);
  if (!power_terms_.empty()) value += power_sum(power_terms_, x - d.lo);
  return value;
}

auto Curve::derivative(int order) const -> Curve {
  if (order != 1 && order != 2) throw ValidationError("derivative order must be 1 or 2", "order");
  auto segments = coefficients_;
  auto terms = power_terms_;
  for (int step = 0; step < order; ++step) {
    for (auto& c : segments) c = differentiate(c);
    std::vector<PowerTerm> next;
    for (const auto& term : terms) {
      const double coefficient = term.coefficient * term.exponent;
      if (coefficient != 0.0) next.push_back({coefficient, term.exponent - 1.0});
    }
    terms = std::move(next);
  }
  return Curve(knots_, std::move(segments), std::max(kDiscontinuous, smoothness_ - order), std::move(terms));
}

auto Curve::degree() const noexcept -> int {
  std::size_t d = 0;
  for (const auto& c : coefficients_) d = std::max(d, c.size() - 1);
  return static_cast<int>(d);
}

auto Curve::sample(std::size_t count) const -> std::vector<SamplePoint> {
  if (count < 2) throw ValidationError("sample count must be at least 2", "count");
  const Interval d = domain();
  std::vector<SamplePoint> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = i + 1 == count ? d.hi
                                    : d.lo + d.length() * static_cast<double>(i) /
                                                 static_cast<double>(count - 1);
    out[i] = {x, (*this)(x)};
  }
  return out;
}

namespace {

auto combine(const Curve& a, const Curve& b, double sign) -> Curve {
  const Interval da = a.domain();
  const Interval db = b.domain();
  if (std::abs(da.lo - db.lo) > 1e-12 * da.length() || std::abs(da.hi - db.hi) > 1e-12 * da.length())
    throw ValidationError("curves must share the domain", "domain");

  std::vector<double> knots;
  std::merge(a.knots().begin(), a.knots().end(), b.knots().begin(), b.knots().end(),
             std::back_inserter(knots));
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [&](double x, double y) { return std::abs(x - y) <= 1e-14 * da.length(); }),
              knots.end());
  knots.front() = da.lo;
  knots.back() = da.hi;

  std::vector<std::vector<double>> segments;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double mid = 0.5 * (knots[i] + knots[i + 1]);
    const std::size_t ia = a.segment_index(mid);
    const std::size_t ib = b.segment_index(mid);
    auto ca = taylor_shift(a.coefficients()[ia], knots[i] - a.knots()[ia]);
    auto cb = taylor_shift(b.coefficients()[ib], knots[i] - b.knots()[ib]);
    std::vector<double> c(std::max(ca.size(), cb.size()), 0.0);
    for (std::size_t k = 0; k < ca.size(); ++k) c[k] += ca[k];
    for (std::size_t k = 0; k < cb.size(); ++k) c[k] += sign * cb[k];
    segments.push_back(std::move(c));
  }
  std::vector<PowerTerm> terms(a.power_terms().begin(), a.power_terms().end());
  for (const auto& t : b.power_terms()) terms.push_back({sign * t.coefficient, t.exponent});
  return Curve(std::move(knots), std::move(segments), std::min(a.smoothness(), b.smoothness()),
               std::move(terms));
}

}  // namespace

auto operator+(const Curve& a, const Curve& b) -> Curve { return combine(a, b, 1.0); }
auto operator-(const Curve& a, const Curve& b) -> Curve { return combine(a, b, -1.0); }

auto Curve::scaled(double factor) const -> Curve {
  auto segments = coefficients_;
  for (auto& c : segments)
    for (double& v : c) v *= factor;
  auto terms = power_terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return Curve(knots_, std::move(segments), smoothness_, std::move(terms));
}

}  // namespace curvemetrics
