// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvemetrics/error.hpp"
#include "curvemetrics/fitting.hpp"
#include "curvemetrics/measures.hpp"
#include "curvemetrics/study.hpp"
#include "oracles.hpp"

using namespace curvemetrics;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

auto seconds_since(Clock::time_point t0) -> double {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failures of one criterion and prints its verdict line.
class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)), start_(Clock::now()) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }

  void note(std::string s) { notes_.push_back(std::move(s)); }

  auto finish() -> bool {
    const bool ok = failed_ == 0 && checks_ > 0;
    std::cout << (ok ? "PASS " : "FAIL ") << name_ << ": " << checks_ << " checks, " << failed_ << " failed";
    for (const auto& n : notes_) std::cout << "; " << n;
    std::cout << " (" << seconds_since(start_) << " s)\n";
    for (const auto& f : failures_) std::cout << "    " << f << '\n';
    std::cout.flush();
    return ok;
  }

 private:
  std::string name_;
  Clock::time_point start_;
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

auto fmt(double v) -> std::string {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

const std::vector<Scenario>& scenarios() {
  static const auto s = bundled_scenarios();
  return s;
}

constexpr Interval kUnit{0.0, 1.0};

auto tabulate(const std::function<double(double)>& f, int n) -> Curve {
  std::vector<SamplePoint> pts;
  for (int i = 0; i <= n; ++i) pts.push_back({static_cast<double>(i) / n, f(static_cast<double>(i) / n)});
  return Curve::from_samples(pts, Interpolation::natural_cubic);
}

// Exact integral of a piecewise cubic over [lo, hi] by Simpson's rule on
// every piece.
auto simpson_over_knots(const Curve& c, Interval s) -> double {
  std::vector<double> cuts{s.lo};
  for (double k : c.knots())
    if (k > s.lo && k < s.hi) cuts.push_back(k);
  cuts.push_back(s.hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    total += (b - a) / 6.0 * (c(a) + 4.0 * c(0.5 * (a + b)) + c(b));
  }
  return total;
}

auto oracle_cdf(const PredictorDistribution& d) -> std::function<double(double)> {
  const double a = d.alpha();
  const double b = d.beta_param();
  const Interval dom = d.domain();
  return [=](double x) { return oracle::beta_cdf(a, b, (x - dom.lo) / dom.length()); };
}

// Scope computed from the oracle quantiles.
auto oracle_scope(const MeasureSpec& spec, const PredictorDistribution& d) -> Interval {
  const Scope s = spec.effective_scope();
  if (s.kind == ScopeKind::full) return d.domain();
  const auto cdf = oracle_cdf(d);
  return {oracle::bisect_quantile(cdf, s.l, d.domain().lo, d.domain().hi),
          oracle::bisect_quantile(cdf, s.u, d.domain().lo, d.domain().hi)};
}

// ---------------------------------------------------------------------------

auto identity_suite() -> bool {
  Criterion c("identity suite (estimate == truth over the lattice, tol 1e-9, < 30 s)");
  const auto t0 = Clock::now();
  const auto specs = enumerate_lattice({Scope::full(), Scope::quantile_band(0.05, 0.95)}, {0.25, 0.5, 0.75},
                                       {0.1, 0.5, 0.9}, true);
  std::size_t evaluated = 0;
  for (const auto& s : scenarios()) {
    const Curve& truth = s.truth;
    const Curve& precision = *s.estimate("A").precision;
    for (const auto& spec : specs) {
      const std::string where = s.name + " " + label(spec);
      EvalValue v;
      try {
        v = evaluate(spec, truth, truth, s.distribution, &precision);
      } catch (const std::exception& e) {
        c.check(false, where + " threw " + e.what());
        continue;
      }
      ++evaluated;
      if (!v.is_finite()) {
        c.check(false, where + " not finite: " + v.to_string());
        continue;
      }
      double expected = 0.0;
      if (spec.loss == Loss::eps_accuracy) {
        expected = 1.0;
        if (spec.is_range() && *spec.axis == Axis::y) {
          const Interval S = oracle_scope(spec, s.distribution);
          const auto cdf = oracle_cdf(s.distribution);
          switch (*spec.aggregation) {
            case Aggregation::integral_dx: expected = S.length(); break;
            case Aggregation::expectation_dfx: expected = cdf(S.hi) - cdf(S.lo); break;
            case Aggregation::precision_weighted: expected = simpson_over_knots(precision, S); break;
            default: expected = 1.0;
          }
        }
      }
      const double got = spec.loss == Loss::difference ? std::abs(v.value) : v.value;
      c.check(std::abs(got - expected) <= 1e-9 * std::max(1.0, std::abs(expected)),
              where + " = " + fmt(v.value) + ", expected " + fmt(expected));
    }
  }
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  c.note(std::to_string(specs.size()) + " specs x " + std::to_string(scenarios().size()) + " truths, " +
         std::to_string(evaluated) + " evaluations");
  return c.finish();
}

auto closed_form_suite() -> bool {
  Criterion c("closed-form oracles (offset, sine cancellation, Beta(2,2) expectation and quantiles)");
  const auto beta22 = PredictorDistribution::beta(2.0, 2.0);
  const auto uniform = PredictorDistribution::uniform();
  auto y = [](Aggregation a, Loss l) { return MeasureSpec::range(Axis::y, a, Characteristic::function, l); };
  auto near = [&](const std::string& what, EvalValue v, double expected, double tol) {
    c.check(v.is_finite() && std::abs(v.value - expected) <= tol,
            what + " = " + v.to_string() + ", expected " + fmt(expected) + " +- " + fmt(tol));
  };

  for (const auto& s : scenarios()) {
    const Curve offset = s.truth + Curve::constant(s.domain(), 0.3);
    near(s.name + " offset integral abs", evaluate(y(Aggregation::integral_dx, Loss::absolute), s.truth, offset, beta22),
         0.3, 1e-6);
    near(s.name + " offset integral squared",
         evaluate(y(Aggregation::integral_dx, Loss::squared), s.truth, offset, beta22), 0.09, 1e-6);
    near(s.name + " offset max abs", evaluate(y(Aggregation::max, Loss::absolute), s.truth, offset, beta22), 0.3,
         1e-6);
  }

  const Curve zero = Curve::constant(kUnit, 0.0);
  const Curve sine = tabulate([](double x) { return std::sin(2.0 * std::numbers::pi * x); }, 2000);
  near("sine integral difference", evaluate(y(Aggregation::integral_dx, Loss::difference), zero, sine, uniform), 0.0,
       1e-3);
  near("sine integral abs", evaluate(y(Aggregation::integral_dx, Loss::absolute), zero, sine, uniform),
       2.0 / std::numbers::pi, 2e-3);

  const double id[] = {0.0, 1.0};
  near("Beta(2,2) expectation of x",
       evaluate(y(Aggregation::expectation_dfx, Loss::difference), zero, Curve::polynomial(kUnit, id), beta22), 0.5,
       1e-4);

  const auto band = MeasureSpec::range(Axis::y, Aggregation::integral_dx, Characteristic::function, Loss::absolute,
                                       Scope::quantile_band(0.05, 0.95));
  const Interval S = resolve_scope(band, beta22);
  const double l = oracle::bisect_quantile(oracle::beta22_cdf, 0.05);
  const double u = oracle::bisect_quantile(oracle::beta22_cdf, 0.95);
  c.check(std::abs(S.lo - l) <= 1e-8, "F^-1(0.05) = " + fmt(S.lo) + ", oracle " + fmt(l));
  c.check(std::abs(S.hi - u) <= 1e-8, "F^-1(0.95) = " + fmt(S.hi) + ", oracle " + fmt(u));
  c.check(std::abs(beta22.quantile(0.05) - l) <= 1e-8, "quantile(0.05)");
  c.check(std::abs(beta22.quantile(0.95) - u) <= 1e-8, "quantile(0.95)");
  c.note("band [" + fmt(S.lo) + ", " + fmt(S.hi) + "]");
  return c.finish();
}

auto divergence_suite() -> bool {
  Criterion c("divergence reproduction (sqrt-type estimate, band scope, divergent ranks last)");
  const Scenario& s = scenarios()[2];
  c.check(s.name == "asymptote", "scenario order");
  const Estimate& d = s.estimate("D");
  c.check(!d.curve.power_terms().empty(), "estimate D has a sqrt term");

  auto spec = [](Aggregation a, Characteristic ch, Loss l, Scope sc = Scope::full()) {
    return MeasureSpec::range(Axis::y, a, ch, l, sc);
  };
  const auto band = Scope::quantile_band(0.05, 0.95);
  const auto sq = evaluate(spec(Aggregation::expectation_dfx, Characteristic::first_derivative, Loss::squared),
                           s.truth, d.curve, s.distribution);
  const auto ab = evaluate(spec(Aggregation::expectation_dfx, Characteristic::first_derivative, Loss::absolute),
                           s.truth, d.curve, s.distribution);
  c.check(sq.kind() == ValueKind::positive_infinity && sq.divergent, "squared slope expectation = " + sq.to_string());
  c.check(ab.is_finite(), "absolute slope expectation = " + ab.to_string());

  // Beta(2,2) weighting vanishes at the boundary: the same expectation
  // stays finite there, the plain integral does not.
  const auto beta22 = PredictorDistribution::beta(2.0, 2.0);
  const auto sq_dx = evaluate(spec(Aggregation::integral_dx, Characteristic::first_derivative, Loss::squared),
                              s.truth, d.curve, beta22);
  c.check(sq_dx.kind() == ValueKind::positive_infinity, "squared slope integral dx = " + sq_dx.to_string());

  const auto curv_full = evaluate(spec(Aggregation::integral_dx, Characteristic::second_derivative, Loss::absolute),
                                  s.truth, d.curve, s.distribution);
  const auto curv_band =
      evaluate(spec(Aggregation::integral_dx, Characteristic::second_derivative, Loss::absolute, band), s.truth,
               d.curve, s.distribution);
  c.check(curv_full.kind() == ValueKind::positive_infinity, "curvature integral full = " + curv_full.to_string());
  c.check(curv_band.is_finite(), "curvature integral band = " + curv_band.to_string());

  const auto table = evaluate_panel(s, showcase_panel());
  std::size_t divergent_cells = 0;
  for (const auto& col : table.columns) {
    int worst_finite = 0;
    for (const auto& cell : col.cells)
      if (cell.value.is_finite() && !cell.error) worst_finite = std::max(worst_finite, cell.rank);
    for (const auto& cell : col.cells) {
      if (cell.value.is_finite()) continue;
      ++divergent_cells;
      c.check(cell.rank > worst_finite, col.label + ": divergent cell ranked " + std::to_string(cell.rank));
    }
  }
  c.check(divergent_cells >= 2, "showcase panel has " + std::to_string(divergent_cells) + " divergent cells");
  c.note("sq=" + sq.to_string() + " abs=" + ab.to_string() + " curvature band=" + curv_band.to_string());
  return c.finish();
}

auto derivative_suite() -> bool {
  Criterion c("derivative checks (central differences h=1e-5, 100 interior points, every bundled curve)");
  constexpr double h = 1e-5;
  std::size_t curves = 0;
  std::size_t points = 0;
  auto check_curve = [&](const std::string& name, const Curve& f) {
    ++curves;
    const Curve d1 = f.derivative(1);
    const Curve d2 = f.derivative(2);
    const Interval dom = f.domain();
    for (int k = 0; k < 100; ++k) {
      const double x = dom.lo + dom.length() * (k + 0.5) / 100.0;
      const bool near_knot = std::any_of(f.knots().begin(), f.knots().end(),
                                         [&](double t) { return std::abs(t - x) < 2.0 * h; });
      if (near_knot) continue;
      ++points;
      const double fd1 = oracle::central_difference([&](double t) { return f(t); }, x, h);
      const double an1 = d1(x);
      c.check(std::abs(fd1 - an1) <= 1e-5 * std::abs(an1) + 1e-7,
              name + " f' at " + fmt(x) + ": " + fmt(an1) + " vs " + fmt(fd1));
      if (d1.smoothness() < 0) continue;  // f' jumps: f'' only exists piecewise
      const double fd2 = oracle::central_difference([&](double t) { return d1(t); }, x, h);
      const double an2 = d2(x);
      c.check(std::abs(fd2 - an2) <= 1e-5 * std::abs(an2) + 1e-7,
              name + " f'' at " + fmt(x) + ": " + fmt(an2) + " vs " + fmt(fd2));
    }
  };
  for (const auto& s : scenarios()) {
    check_curve(s.name + "/truth", s.truth);
    for (const auto& e : s.estimates) {
      check_curve(s.name + "/" + e.name, e.curve);
      if (e.precision) check_curve(s.name + "/" + e.name + "/precision", *e.precision);
    }
  }
  c.note(std::to_string(curves) + " curves, " + std::to_string(points) + " points");
  return c.finish();
}

auto grid_convergence_suite() -> bool {
  Criterion c("grid convergence (2001 vs 4001 cells, integral-type values, |change| < 1e-4)");
  const auto lattice = enumerate_lattice({Scope::full(), Scope::quantile_band(0.05, 0.95)}, {0.5}, {}, true);
  std::vector<MeasureSpec> specs;
  for (const auto& s : lattice) {
    const auto a = *s.aggregation;
    if (a == Aggregation::integral_dx || a == Aggregation::expectation_dfx || a == Aggregation::precision_weighted)
      specs.push_back(s);
  }
  EvaluationOptions coarse;
  coarse.grid_cells = 2001;
  EvaluationOptions fine;
  fine.grid_cells = 4001;
  std::size_t finite = 0;
  double worst = 0.0;
  for (const auto& s : scenarios()) {
    for (const auto& e : s.estimates) {
      for (const auto& spec : specs) {
        if (*spec.aggregation == Aggregation::precision_weighted && !e.precision) continue;
        const Curve* p = e.precision ? &*e.precision : nullptr;
        const std::string where = s.name + "/" + e.name + " " + label(spec);
        const auto a = evaluate(spec, s.truth, e.curve, s.distribution, p, coarse);
        const auto b = evaluate(spec, s.truth, e.curve, s.distribution, p, fine);
        if (!a.is_finite() || !b.is_finite()) {
          c.check(a.kind() == b.kind(), where + ": " + a.to_string() + " vs " + b.to_string());
          continue;
        }
        ++finite;
        const double diff = std::abs(a.value - b.value);
        worst = std::max(worst, diff);
        c.check(diff < 1e-4, where + ": " + fmt(a.value) + " vs " + fmt(b.value));
      }
    }
  }
  c.note(std::to_string(finite) + " finite values, worst change " + fmt(worst));
  return c.finish();
}

struct QuantileCase {
  std::size_t scenario;
  std::string estimate;
  Characteristic characteristic;
  Loss loss;
  double q;
  bool band;
  double alpha;
  double beta;
};

auto quantile_suite() -> bool {
  Criterion c("quantile aggregation vs 10^6-draw Monte Carlo (fixed seed, tol 0.01)");
  using C = Characteristic;
  const QuantileCase cases[] = {
      {0, "A", C::function, Loss::absolute, 0.5, false, 2, 2},
      {0, "C", C::function, Loss::squared, 0.9, false, 2, 2},
      {1, "B", C::first_derivative, Loss::absolute, 0.25, true, 2, 2},
      {1, "E", C::function, Loss::difference, 0.75, false, 2, 5},
      {2, "D", C::first_derivative, Loss::absolute, 0.5, false, 1, 1},
      {2, "C", C::second_derivative, Loss::absolute, 0.75, true, 1, 1},
      {3, "A", C::function, Loss::absolute, 0.5, false, 5, 2},
      {3, "D", C::first_derivative, Loss::squared, 0.9, true, 2, 2},
      {0, "B", C::first_derivative, Loss::difference, 0.1, false, 2, 2},
      {0, "D", C::function, Loss::absolute, 0.95, false, 2, 2},
  };
  std::uint64_t seed = 20240917;
  for (const auto& qc : cases) {
    const Scenario s = scenarios()[qc.scenario].with_distribution(PredictorDistribution::beta(qc.alpha, qc.beta));
    auto spec = MeasureSpec::range(Axis::y, Aggregation::quantile_fx, qc.characteristic, qc.loss,
                                   qc.band ? Scope::quantile_band(0.05, 0.95) : Scope::full());
    spec.q = qc.q;
    const auto& est = s.estimate(qc.estimate).curve;
    const auto v = evaluate(spec, s.truth, est, s.distribution);
    const Curve gt = characteristic_curve(s.truth, qc.characteristic);
    const Curve ge = characteristic_curve(est, qc.characteristic);
    const Interval S = oracle_scope(spec, s.distribution);
    auto loss = [&](double x) {
      const double d = ge(x) - gt(x);
      switch (qc.loss) {
        case Loss::difference: return d;
        case Loss::absolute: return std::abs(d);
        case Loss::squared: return d * d;
        case Loss::eps_accuracy: break;
      }
      return 0.0;
    };
    const double mc = oracle::monte_carlo_quantile(qc.alpha, qc.beta, S.lo, S.hi, loss, qc.q, 1'000'000, seed++);
    c.check(v.is_finite() && std::abs(v.value - mc) <= 0.01,
            s.name + "/" + qc.estimate + " " + label(spec) + ": " + v.to_string() + " vs MC " + fmt(mc));
  }
  return c.finish();
}

auto fitting_suite() -> bool {
  Criterion c("fitting (noiseless recovery, FP selection vs brute force, precision vs hat values)");
  auto grid = [](std::size_t n, double lo, double hi) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
  };
  auto data = [&](std::size_t n, double lo, double hi, const std::function<double(double)>& f) {
    auto x = grid(n, lo, hi);
    std::vector<double> y;
    for (double v : x) y.push_back(f(v));
    return Dataset::make(std::move(x), std::move(y), {lo, hi});
  };

  // Noiseless recovery.
  {
    const auto m = fit_basis(data(40, -2.0, 3.0, [](double x) { return 2.0 - 0.7 * x; }), BasisSpec::linear());
    c.check(std::abs(m.coefficients[0] - 2.0) <= 1e-6 && std::abs(m.coefficients[1] + 0.7) <= 1e-6, "linear");
  }
  {
    const auto m = fit_basis(data(40, -1.0, 2.0, [](double x) { return 1.0 + 0.5 * x - 1.5 * x * x; }),
                             BasisSpec::polynomial(2));
    const double expected[] = {1.0, 0.5, -1.5};
    for (std::size_t k = 0; k < 3; ++k)
      c.check(std::abs(m.coefficients[k] - expected[k]) <= 1e-6, "quadratic coefficient " + std::to_string(k));
  }
  for (int degree : {1, 2, 3}) {
    const auto x = grid(120, 0.0, 1.0);
    const auto basis = BasisSpec::bspline(degree, 9, x, kUnit);
    std::vector<double> coef;
    for (std::size_t j = 0; j < basis.size(); ++j) coef.push_back(std::sin(1.0 + 1.7 * static_cast<double>(j)));
    auto spline = [&](double t) {
      double v = 0.0;
      for (std::size_t j = 0; j < coef.size(); ++j) v += coef[j] * oracle::cox_de_boor(basis.knots, degree, j, t);
      return v;
    };
    std::vector<double> y;
    for (double v : x) y.push_back(spline(v));
    const auto m = fit_basis(Dataset::make(x, y, kUnit), basis);
    double worst = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j) worst = std::max(worst, std::abs(m.coefficients[j] - coef[j]));
    for (int k = 0; k <= 500; ++k) worst = std::max(worst, std::abs(m.curve(k / 500.0) - spline(k / 500.0)));
    c.check(worst <= 1e-6, "B-spline degree " + std::to_string(degree) + " round trip error " + fmt(worst));
  }

  // FP selection on eight functions with deterministic perturbations.
  struct Fn {
    std::string name;
    double lo, hi;
    std::function<double(double)> f;
  };
  auto noise = [](double x) { return 0.02 * std::sin(53.0 * x) + 0.015 * std::cos(117.0 * x); };
  const Fn fns[] = {
      {"log", 0.5, 5.0, [](double x) { return 1.0 + 2.0 * std::log(x); }},
      {"inverse+square", 0.5, 3.0, [](double x) { return 1.0 + 2.0 / x + 0.5 * x * x; }},
      {"sqrt", 0.1, 4.0, [](double x) { return std::sqrt(x); }},
      {"exp decay", 0.0, 3.0, [](double x) { return std::exp(-x); }},
      {"logistic", 0.0, 1.0, [](double x) { return 1.0 / (1.0 + std::exp(-8.0 * (x - 0.5))); }},
      {"repeated power", 0.3, 4.0, [](double x) { return x * x * (1.0 + std::log(x)); }},
      {"cubic", -1.0, 1.0, [](double x) { return x * x * x - x; }},
      {"bump", 0.0, 2.0, [](double x) { return std::exp(-4.0 * (x - 0.8) * (x - 0.8)); }},
  };
  for (const auto& fn : fns) {
    const auto d = data(80, fn.lo, fn.hi, [&](double x) { return fn.f(x) + noise(x); });
    for (int degree : {1, 2}) {
      const auto m = fit_fractional_polynomial(d, degree);
      const auto ref = oracle::fp_scan(d.x, d.y, degree, fp_shift(d));
      std::string got, want;
      for (double p : m.basis.powers) got += fmt(p) + " ";
      for (double p : ref.powers) want += fmt(p) + " ";
      c.check(m.basis.powers == ref.powers, fn.name + " FP" + std::to_string(degree) + ": " + got + "vs " + want);
    }
  }

  // Precision curve of simple linear regression.
  {
    const auto d = data(41, 0.0, 2.0, [&](double x) { return 0.5 + 1.2 * x + noise(x); });
    const auto m = fit_basis(d, BasisSpec::linear());
    const oracle::SimpleRegression ref(d.x, d.y);
    const auto p = precision_curve(m);
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double x = 2.0 * k / 400.0;
      worst = std::max(worst, std::abs(p.curve(x) - ref.precision(x)) / ref.precision(x));
    }
    c.check(!p.capped && worst <= 1e-6, "precision vs hat values, worst relative error " + fmt(worst));
  }
  return c.finish();
}

auto same(const EvalValue& a, const EvalValue& b) -> bool {
  if (a.kind() != b.kind()) return false;
  return !a.is_finite() || a.value == b.value;
}

auto similarity_suite() -> bool {
  Criterion c("similarity mode (exact symmetry on 50 random pairs, max/min difference pairs)");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_curve = [&] {
    std::vector<SamplePoint> pts;
    const int n = 8 + static_cast<int>(rng() % 8);
    for (int i = 0; i <= n; ++i) pts.push_back({static_cast<double>(i) / n, u(rng)});
    return Curve::from_samples(pts, rng() % 4 == 0 ? Interpolation::piecewise_linear : Interpolation::natural_cubic);
  };
  const auto specs = enumerate_lattice({Scope::full(), Scope::quantile_band(0.05, 0.95)}, {0.5}, {0.3}, false);
  const auto dists = {PredictorDistribution::beta(2, 2), PredictorDistribution::beta(2, 5),
                      PredictorDistribution::beta(5, 2)};
  std::size_t pairs_checked = 0;
  for (int pair = 0; pair < 50; ++pair) {
    const Curve a = random_curve();
    const Curve b = random_curve();
    const auto& d = *(dists.begin() + pair % 3);
    for (const auto& spec : specs) {
      const std::string where = "pair " + std::to_string(pair) + " " + label(spec);
      SimilarityResult ab, ba;
      std::string err_ab, err_ba;
      try {
        ab = similarity(spec, a, b, d);
      } catch (const std::exception& e) {
        err_ab = e.what();
      }
      try {
        ba = similarity(spec, b, a, d);
      } catch (const std::exception& e) {
        err_ba = e.what();
      }
      if (!err_ab.empty() || !err_ba.empty()) {
        // An undefined measure (e.g. default epsilon of a flat f'' difference)
        // must be undefined in both orders.
        c.check(err_ab == err_ba, where + ": '" + err_ab + "' vs '" + err_ba + "'");
        continue;
      }
      const bool extremum = spec.loss == Loss::difference && spec.is_range() &&
                            (*spec.aggregation == Aggregation::max || *spec.aggregation == Aggregation::min);
      c.check(ab.is_pair() == extremum && ba.is_pair() == extremum, where + ": pair shape");
      if (extremum) {
        ++pairs_checked;
        if (!ab.is_pair() || !ba.is_pair()) continue;
        const auto neg = [](EvalValue v) {
          v.value = -v.value;
          return v;
        };
        c.check(same(ab.values[0], neg(ba.values[1])) && same(ab.values[1], neg(ba.values[0])),
                where + ": (max,min) does not mirror");
        c.check(ab.values[0].value >= ab.values[1].value, where + ": max < min");
        auto hi = spec;
        hi.aggregation = Aggregation::max;
        c.check(same(ab.values[0], evaluate(hi, b, a, d)), where + ": max differs from the a - b maximum");
      } else {
        c.check(same(ab.values[0], ba.values[0]),
                where + ": " + ab.values[0].to_string() + " vs " + ba.values[0].to_string());
      }
    }
    // Precision-weighted similarity with a shared precision curve.
    const Curve p = tabulate([](double x) { return 1.0 + x * x; }, 50);
    auto pw = MeasureSpec::range(Axis::y, Aggregation::precision_weighted, Characteristic::function, Loss::difference);
    c.check(same(similarity(pw, a, b, d, &p).values[0], similarity(pw, b, a, d, &p).values[0]),
            "pair " + std::to_string(pair) + " precision weighted");
  }
  c.note(std::to_string(specs.size()) + " specs per pair, " + std::to_string(pairs_checked) + " max/min pairs");
  return c.finish();
}

// ---------------------------------------------------------------------------

auto run_command(const std::string& cmd) -> int {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

auto slurp(const fs::path& p) -> std::string {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

auto determinism_suite(const std::string& cli, const fs::path& work) -> bool {
  Criterion c("determinism (cli panel byte-identical on rerun; full CLI suite < 2 min)");
  if (cli.empty()) {
    c.check(false, "no --cli binary given");
    return c.finish();
  }
  fs::remove_all(work);
  fs::create_directories(work);
  const auto t0 = Clock::now();
  std::size_t commands = 0;
  auto sh = [&](const std::string& args, int expected_code = 0) {
    ++commands;
    const std::string cmd = cli + " " + args + " > " + (work / "stdout.txt").string() + " 2> " +
                            (work / "stderr.txt").string();
    const int code = run_command(cmd);
    c.check(code == expected_code, "`" + args + "` exited " + std::to_string(code));
  };

  sh("scenarios list");
  sh("scenarios export --dir " + (work / "store").string());
  for (const auto& s : scenarios()) {
    for (const std::string format : {"csv", "json"}) {
      const auto a = work / (s.name + "_1." + format);
      const auto b = work / (s.name + "_2." + format);
      sh("panel --scenario " + s.name + " --preset showcase --format " + format + " -o " + a.string());
      sh("panel --scenario " + s.name + " --preset showcase --format " + format + " --threads 1 -o " + b.string());
      const auto ta = slurp(a);
      c.check(!ta.empty() && ta == slurp(b), s.name + " " + format + " panel differs between runs");
    }
    const auto c1 = work / (s.name + "_store.csv");
    sh("--scenario-dir " + (work / "store").string() + " panel --scenario " + s.name + " --preset showcase -o " +
       c1.string());
    c.check(slurp(c1) == slurp(work / (s.name + "_1.csv")), s.name + " panel from exported store differs");
    for (const std::string est : {"A", "B", "C", "D", "E"}) {
      sh("evaluate --scenario " + s.name + " --estimate " + est);
      sh("evaluate --scenario " + s.name + " --estimate " + est +
         " --loss eps_accuracy --aggregation quantile_Fx --q 0.5 --scope quantile_band");
      sh("evaluate --scenario " + s.name + " --estimate " + est +
         " --localization point --x-star 0.5 --characteristic second_derivative --loss squared");
      sh("evaluate --scenario " + s.name + " --estimate " + est + " --axis X --aggregation num_roots");
    }
    sh("similarity --scenario " + s.name + " --first B --second C --loss difference --aggregation max");
    sh("similarity --scenario " + s.name + " --first A --second E --loss eps_accuracy");
  }
  {
    std::ofstream f(work / "data.csv");
    f << "x,y\n";
    for (int i = 0; i <= 100; ++i) f << i / 100.0 << ',' << std::exp(-3.0 * i / 100.0) + 0.01 * std::sin(i) << '\n';
  }
  for (const std::string basis : {"linear", "polynomial", "bspline", "fp"})
    sh("fit --data " + (work / "data.csv").string() + " --basis " + basis + " -o " + (work / (basis + ".json")).string());

  sh("evaluate --scenario sigmoid --estimate A --aggregation quantile_Fx", 2);
  sh("evaluate --scenario sigmoid --estimate A --localization point --x-star 2", 2);
  sh("evaluate --scenario sigmoid --estimate A --scope interval --interval 2,3", 3);
  sh("panel --scenario sigmoid --preset showcase -o " + (work / "missing" / "x.csv").string(), 4);

  const double elapsed = seconds_since(t0);
  c.check(elapsed < 120.0, "CLI suite took " + fmt(elapsed) + " s");
  c.note(std::to_string(commands) + " commands in " + fmt(elapsed) + " s");
  return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path work = fs::temp_directory_path() / "curvemetrics_acceptance";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--cli") cli = argv[i + 1];
    else if (key == "--work-dir") work = argv[i + 1];
  }
  std::cout << "curvemetrics acceptance suite\n";
  bool ok = true;
  ok &= identity_suite();
  ok &= closed_form_suite();
  ok &= divergence_suite();
  ok &= derivative_suite();
  ok &= grid_convergence_suite();
  ok &= quantile_suite();
  ok &= fitting_suite();
  ok &= similarity_suite();
  ok &= determinism_suite(cli, work);
  std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
  return ok ? 0 : 1;
}
