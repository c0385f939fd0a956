#include "curvemetrics/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <optional>
#include <cmath>
#include <numeric>
#include <sstream>

#include "curvemetrics/error.hpp"
#include "curvemetrics/kernels.hpp"

namespace curvemetrics {
namespace {

constexpr double kRankTolerance = 1e-10;

auto fp_transform(double p, double x) -> double { return p == 0.0 ? std::log(x) : std::pow(x, p); }

// Span index i with knots[i] <= x < knots[i+1], clamped to the last
// non-empty span at the right boundary.
auto find_span(std::span<const double> knots, int degree, double x) -> std::size_t {
  const std::size_t n = knots.size() - static_cast<std::size_t>(degree) - 2;  // last basis index
  if (x >= knots[n + 1]) {
    std::size_t s = n;
    while (s > static_cast<std::size_t>(degree) && knots[s] == knots[s + 1]) --s;
    return s;
  }
  if (x <= knots[static_cast<std::size_t>(degree)]) return static_cast<std::size_t>(degree);
  const auto it = std::upper_bound(knots.begin() + degree, knots.begin() + static_cast<long>(n) + 1, x);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

// Non-zero basis functions N_{span-degree..span} at x (Cox-de Boor).
auto basis_funs(std::span<const double> knots, int degree, std::size_t span, double x)
    -> std::vector<double> {
  const auto p = static_cast<std::size_t>(degree);
  std::vector<double> N(p + 1, 0.0);
  std::vector<double> left(p + 1);
  std::vector<double> right(p + 1);
  N[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = x - knots[span + 1 - j];
    right[j] = knots[span + j] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom == 0.0 ? 0.0 : N[r] / denom;
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
  return N;
}

auto spline_value(const BasisSpec& b, std::span<const double> coef, std::size_t span, double x)
    -> double {
  const auto N = basis_funs(b.knots, b.degree, span, x);
  double v = 0.0;
  const std::size_t first = span - static_cast<std::size_t>(b.degree);
  for (std::size_t r = 0; r < N.size(); ++r) v += coef[first + r] * N[r];
  return v;
}

// Piecewise-polynomial form of a B-spline combination: on every non-empty
// span interpolate degree+1 interior Chebyshev nodes in the local variable.
auto bspline_curve(const BasisSpec& b, std::span<const double> coef) -> Curve {
  const auto p = static_cast<std::size_t>(b.degree);
  std::vector<double> knots;
  std::vector<std::vector<double>> coefficients;
  const std::size_t last = b.knots.size() - p - 1;
  for (std::size_t span = p; span < last; ++span) {
    const double a = b.knots[span];
    const double h = b.knots[span + 1] - a;
    if (!(h > 0.0)) continue;
    Eigen::MatrixXd V(p + 1, p + 1);
    Eigen::VectorXd rhs(p + 1);
    for (std::size_t i = 0; i <= p; ++i) {
      const double u =
          0.5 * (1.0 - std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(p + 1))));
      double pw = 1.0;
      for (std::size_t k = 0; k <= p; ++k, pw *= u) V(static_cast<long>(i), static_cast<long>(k)) = pw;
      rhs(static_cast<long>(i)) = spline_value(b, coef, span, a + u * h);
    }
    const Eigen::VectorXd sol = V.colPivHouseholderQr().solve(rhs);
    std::vector<double> local(p + 1);
    double scale = 1.0;
    for (std::size_t k = 0; k <= p; ++k, scale *= h) local[k] = sol(static_cast<long>(k)) / scale;
    knots.push_back(a);
    coefficients.push_back(std::move(local));
  }
  knots.push_back(b.knots[last]);
  std::size_t max_mult = 1;
  for (std::size_t i = p + 1; i < last;) {
    std::size_t j = i;
    while (j + 1 < last && b.knots[j + 1] == b.knots[i]) ++j;
    max_mult = std::max(max_mult, j - i + 1);
    i = j + 1;
  }
  const int smoothness =
      std::clamp(b.degree - static_cast<int>(max_mult), 0, 2);
  return Curve(std::move(knots), std::move(coefficients), smoothness);
}

auto polynomial_curve(Interval domain, std::span<const double> coef) -> Curve {
  return Curve::polynomial(domain, coef);
}

// Exact form when every transform is a positive power of (x - lo); otherwise
// a dense natural cubic through the fitted values.
auto fp_curve(const BasisSpec& b, std::span<const double> coef, Interval domain) -> Curve {
  bool exact = b.shift == -domain.lo;
  for (std::size_t i = 0; i < b.powers.size(); ++i) {
    const double p = b.powers[i];
    const bool repeated = i > 0 && b.powers[i - 1] == p;
    if (repeated || p <= 0.0) exact = false;
  }
  if (exact) {
    std::vector<double> local(4, 0.0);
    std::vector<PowerTerm> terms;
    local[0] = coef[0];
    for (std::size_t i = 0; i < b.powers.size(); ++i) {
      const double p = b.powers[i];
      if (p == 1.0 || p == 2.0 || p == 3.0) {
        local[static_cast<std::size_t>(p)] += coef[i + 1];
      } else {
        terms.push_back({coef[i + 1], p});
      }
    }
    return Curve({domain.lo, domain.hi}, {local}, 2, std::move(terms));
  }
  std::vector<SamplePoint> pts(kPrecisionGridPoints);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = domain.lo + domain.length() * static_cast<double>(i) /
                                     static_cast<double>(pts.size() - 1);
    const auto row = b.row(x);
    pts[i] = {x, std::inner_product(row.begin(), row.end(), coef.begin(), 0.0)};
  }
  pts.back().x = domain.hi;
  return Curve::from_samples(pts, Interpolation::natural_cubic);
}

auto format_power(double p) -> std::string {
  std::ostringstream out;
  out << p;
  return out.str();
}

auto distance_to_one(std::span<const double> powers) -> double {
  double d = 0.0;
  for (double p : powers) d += std::abs(p - 1.0);
  return d;
}

}  // namespace

auto Dataset::make(std::vector<double> x, std::vector<double> y) -> Dataset {
  if (x.empty()) throw ValidationError("dataset is empty", "x");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const Interval domain{*lo, *hi};
  return make(std::move(x), std::move(y), domain);
}

auto Dataset::make(std::vector<double> x, std::vector<double> y, Interval domain) -> Dataset {
  if (x.size() != y.size()) throw ValidationError("x and y differ in length", "y");
  if (x.size() < 2) throw ValidationError("dataset needs at least two rows", "x");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw ValidationError("dataset values must be finite", "x");
    if (x[i] < domain.lo || x[i] > domain.hi)
      throw ValidationError("dataset x outside the stated domain", "x");
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
    throw ValidationError("x values are all equal", "x");
  if (!(domain.hi > domain.lo)) throw ValidationError("domain must have positive length", "domain");
  return Dataset{std::move(x), std::move(y), domain};
}

auto to_string(BasisKind kind) -> std::string_view {
  switch (kind) {
    case BasisKind::linear: return "linear";
    case BasisKind::polynomial: return "polynomial";
    case BasisKind::bspline: return "bspline";
    case BasisKind::fractional_polynomial: return "fractional_polynomial";
  }
  return "?";
}

auto BasisSpec::linear() -> BasisSpec { return BasisSpec{}; }

auto BasisSpec::polynomial(int degree) -> BasisSpec {
  if (degree < 0 || degree > Curve::kMaxDegree)
    throw ValidationError("polynomial degree must lie in [0, 5]", "degree");
  BasisSpec b;
  b.kind = BasisKind::polynomial;
  b.degree = degree;
  return b;
}

auto BasisSpec::bspline(int degree, std::size_t n_basis, std::span<const double> x) -> BasisSpec {
  if (x.empty()) throw ValidationError("no x values for knot placement", "x");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return bspline(degree, n_basis, x, Interval{*lo, *hi});
}

auto BasisSpec::bspline(int degree, std::size_t n_basis, std::span<const double> x,
                        Interval boundary) -> BasisSpec {
  if (degree < 1 || degree > Curve::kMaxDegree)
    throw ValidationError("B-spline degree must lie in [1, 5]", "degree");
  const auto p = static_cast<std::size_t>(degree);
  if (n_basis < p + 1) throw ValidationError("B-spline needs at least degree + 1 basis functions", "n_basis");
  if (!(boundary.hi > boundary.lo)) throw ValidationError("B-spline boundary has zero length", "x");
  BasisSpec b;
  b.kind = BasisKind::bspline;
  b.degree = degree;
  b.n_basis = n_basis;
  const std::size_t inner = n_basis - p - 1;
  b.knots.assign(p + 1, boundary.lo);
  for (std::size_t j = 1; j <= inner; ++j) {
    const double q = static_cast<double>(j) / static_cast<double>(inner + 1);
    b.knots.push_back(std::clamp(empirical_quantile(x, q), boundary.lo, boundary.hi));
  }
  b.knots.insert(b.knots.end(), p + 1, boundary.hi);
  return b;
}

auto BasisSpec::fractional_polynomial(std::vector<double> powers, double shift) -> BasisSpec {
  if (powers.empty() || powers.size() > 2)
    throw ValidationError("fractional polynomial takes one or two powers", "powers");
  std::sort(powers.begin(), powers.end());
  BasisSpec b;
  b.kind = BasisKind::fractional_polynomial;
  b.degree = static_cast<int>(powers.size());
  b.powers = std::move(powers);
  b.shift = shift;
  return b;
}

auto BasisSpec::size() const -> std::size_t {
  switch (kind) {
    case BasisKind::linear: return 2;
    case BasisKind::polynomial: return static_cast<std::size_t>(degree) + 1;
    case BasisKind::bspline: return n_basis;
    case BasisKind::fractional_polynomial: return powers.size() + 1;
  }
  return 0;
}

auto BasisSpec::row(double x) const -> std::vector<double> {
  switch (kind) {
    case BasisKind::linear: return {1.0, x};
    case BasisKind::polynomial: {
      std::vector<double> r(size());
      double pw = 1.0;
      for (auto& v : r) {
        v = pw;
        pw *= x;
      }
      return r;
    }
    case BasisKind::bspline: return bspline_basis(knots, degree, x);
    case BasisKind::fractional_polynomial: {
      const double z = x + shift;
      std::vector<double> r{1.0};
      for (std::size_t i = 0; i < powers.size(); ++i) {
        const double h = fp_transform(powers[i], z);
        const bool repeated = i > 0 && powers[i - 1] == powers[i];
        r.push_back(repeated ? h * std::log(z) : h);
      }
      return r;
    }
  }
  return {};
}

auto BasisSpec::describe() const -> std::string {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case BasisKind::linear: break;
    case BasisKind::polynomial: out << "(degree=" << degree << ')'; break;
    case BasisKind::bspline: out << "(degree=" << degree << ", n_basis=" << n_basis << ')'; break;
    case BasisKind::fractional_polynomial:
      out << "(powers=";
      for (std::size_t i = 0; i < powers.size(); ++i) out << (i ? "," : "") << format_power(powers[i]);
      out << ", shift=" << shift << ')';
      break;
  }
  return out.str();
}

auto bspline_basis(std::span<const double> knots, int degree, double x) -> std::vector<double> {
  const auto p = static_cast<std::size_t>(degree);
  if (knots.size() < 2 * p + 2) throw ValidationError("knot vector too short", "knots");
  const std::size_t n = knots.size() - p - 1;
  std::vector<double> out(n, 0.0);
  const std::size_t span = find_span(knots, degree, x);
  const auto N = basis_funs(knots, degree, span, x);
  for (std::size_t r = 0; r <= p; ++r) out[span - p + r] = N[r];
  return out;
}

auto FittedModel::predict(double x) const -> double {
  const auto r = basis.row(x);
  return std::inner_product(r.begin(), r.end(), coefficients.begin(), 0.0);
}

auto FittedModel::prediction_variance(double x) const -> double {
  const auto r = basis.row(x);
  const std::size_t k = r.size();
  double v = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) v += r[i] * covariance[i * k + j] * r[j];
  return v;
}

auto fit_basis(const Dataset& data, const BasisSpec& basis) -> FittedModel {
  const std::size_t n = data.size();
  const std::size_t k = basis.size();
  if (n <= k)
    throw SingularFitError(basis.describe() + ": needs more observations than coefficients");
  Eigen::MatrixXd X(n, k);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = basis.row(data.x[i]);
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(r[j]))
        throw ValidationError(basis.describe() + ": transform undefined at x = " +
                                  format_power(data.x[i]), "x");
      X(static_cast<long>(i), static_cast<long>(j)) = r[j];
    }
    y(static_cast<long>(i)) = data.y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankTolerance);
  if (static_cast<std::size_t>(qr.rank()) < k)
    throw SingularFitError(basis.describe() + ": design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;

  FittedModel m;
  m.basis = basis;
  m.n = n;
  m.domain = data.domain;
  m.rss = resid.squaredNorm();
  m.sigma2 = m.rss / static_cast<double>(n - k);
  m.coefficients.assign(beta.data(), beta.data() + k);

  const auto kk = static_cast<long>(k);
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(kk, kk).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(kk, kk));
  // X P = Q R, so (X'X)^-1 = (P R^-1)(P R^-1)'.
  const Eigen::MatrixXd PRinv = qr.colsPermutation() * Rinv;
  Eigen::MatrixXd cov = PRinv * PRinv.transpose();
  cov = (0.5 * m.sigma2) * (cov + cov.transpose()).eval();
  m.covariance.resize(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      m.covariance[i * k + j] = cov(static_cast<long>(i), static_cast<long>(j));

  switch (basis.kind) {
    case BasisKind::linear:
    case BasisKind::polynomial: m.curve = polynomial_curve(data.domain, m.coefficients); break;
    case BasisKind::bspline: {
      if (basis.knots.front() > data.domain.lo || basis.knots.back() < data.domain.hi)
        throw ValidationError("B-spline boundary knots must cover the domain", "knots");
      if (basis.knots.front() != data.domain.lo || basis.knots.back() != data.domain.hi)
        throw ValidationError("B-spline boundary knots must equal the domain bounds", "knots");
      m.curve = bspline_curve(basis, m.coefficients);
      break;
    }
    case BasisKind::fractional_polynomial:
      m.curve = fp_curve(basis, m.coefficients, data.domain);
      break;
  }
  return m;
}

auto fp_powers() -> std::span<const double> {
  static constexpr std::array<double, 8> kPowers{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
  return kPowers;
}

auto fp_shift(const Dataset& data) -> double {
  const double lo = std::min(*std::min_element(data.x.begin(), data.x.end()), data.domain.lo);
  if (lo > 0.0) return 0.0;
  std::vector<double> xs = data.x;
  std::sort(xs.begin(), xs.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) gap = std::min(gap, xs[i] - xs[i - 1]);
  return -lo + gap;
}

auto fit_fractional_polynomial(const Dataset& data, int degree) -> FittedModel {
  if (degree != 1 && degree != 2)
    throw ValidationError("fractional polynomial degree must be 1 or 2", "degree");
  const double shift = fp_shift(data);
  const auto powers = fp_powers();
  std::vector<std::vector<double>> candidates;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (degree == 1) {
      candidates.push_back({powers[i]});
      continue;
    }
    for (std::size_t j = i; j < powers.size(); ++j) candidates.push_back({powers[i], powers[j]});
  }
  const double scale = std::inner_product(data.y.begin(), data.y.end(), data.y.begin(), 0.0);
  std::optional<FittedModel> best;
  for (const auto& c : candidates) {
    FittedModel m;
    try {
      m = fit_basis(data, BasisSpec::fractional_polynomial(c, shift));
    } catch (const SingularFitError&) {
      continue;
    }
    if (!best) {
      best = std::move(m);
      continue;
    }
    const double tol = 1e-10 * std::max(m.rss, best->rss) + 1e-14 * scale;
    if (m.rss < best->rss - tol) {
      best = std::move(m);
    } else if (std::abs(m.rss - best->rss) <= tol &&
               distance_to_one(m.basis.powers) < distance_to_one(best->basis.powers)) {
      best = std::move(m);
    }
  }
  if (!best) throw SingularFitError("fractional polynomial: every candidate fit is singular");
  return *std::move(best);
}

auto precision_curve(const FittedModel& model) -> PrecisionCurve {
  PrecisionCurve out{Curve::constant(model.domain, 0.0), false};
  std::vector<SamplePoint> pts(kPrecisionGridPoints);
  const Interval d = model.domain;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = i + 1 == pts.size()
                         ? d.hi
                         : d.lo + d.length() * static_cast<double>(i) /
                                      static_cast<double>(pts.size() - 1);
    const double v = model.prediction_variance(x);
    double p = kPrecisionCap;
    if (v > 0.0 && std::isfinite(v)) p = std::min(1.0 / v, kPrecisionCap);
    if (!(v > 0.0) || p == kPrecisionCap) out.capped = true;
    pts[i] = {x, p};
  }
  out.curve = Curve::from_samples(pts, Interpolation::natural_cubic);
  return out;
}

}  // namespace curvemetrics
