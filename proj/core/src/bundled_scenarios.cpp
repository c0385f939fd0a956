#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "curvemetrics/scenario.hpp"

namespace curvemetrics {
namespace {

constexpr Interval kUnit{0.0, 1.0};
constexpr std::size_t kTableSize = 512;
constexpr double kNoiseSd = 0.1;

// splitmix64; fixed so the bundled fits do not depend on the standard
// library's distributions.
class Noise {
 public:
  explicit Noise(std::uint64_t seed) : state_(seed) {}

  auto normal() -> double {
    const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  auto next() -> std::uint64_t {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

auto tabulate(const std::function<double(double)>& f) -> Curve {
  std::vector<SamplePoint> pts(kTableSize);
  for (std::size_t i = 0; i < kTableSize; ++i) {
    const double x = i + 1 == kTableSize ? 1.0 : static_cast<double>(i) / (kTableSize - 1);
    pts[i] = {x, f(x)};
  }
  return Curve::from_samples(pts, Interpolation::natural_cubic);
}

auto noisy_design(const Curve& truth, std::uint64_t seed) -> Dataset {
  Dataset d = truth_design(truth);
  Noise noise(seed);
  for (double& y : d.y) y += kNoiseSd * noise.normal();
  return d;
}

auto from_fit(std::string name, const FittedModel& m) -> Estimate {
  return {std::move(name), m.curve, precision_curve(m).curve};
}

// A: OLS line through the noiseless truth; B: linear B-spline with three
// basis functions; C: cubic B-spline with fifteen; D: `fourth` fitted to the
// noisy data; E: tabulated truth with a superimposed wiggle.
auto build(std::string name, std::string description, const Curve& truth,
           PredictorDistribution dist, std::uint64_t seed,
           const std::function<FittedModel(const Dataset&)>& fourth) -> Scenario {
  const Dataset clean = truth_design(truth);
  const Dataset noisy = noisy_design(truth, seed);
  std::vector<Estimate> estimates;
  estimates.push_back(from_fit("A", fit_basis(clean, BasisSpec::linear())));
  estimates.push_back(from_fit("B", fit_basis(noisy, BasisSpec::bspline(1, 3, noisy.x, kUnit))));
  estimates.push_back(from_fit("C", fit_basis(noisy, BasisSpec::bspline(3, 15, noisy.x, kUnit))));
  estimates.push_back(from_fit("D", fourth(noisy)));
  estimates.push_back({"E",
                       tabulate([&](double x) {
                         return truth(x) + 0.06 * std::sin(18.0 * std::numbers::pi * x);
                       }),
                       std::nullopt});
  Scenario s{std::move(name), std::move(description), truth, std::move(estimates), std::move(dist)};
  validate(s);
  return s;
}

auto fp2(const Dataset& d) -> FittedModel { return fit_fractional_polynomial(d, 2); }

}  // namespace

auto truth_design(const Curve& truth) -> Dataset {
  const Interval dom = truth.domain();
  std::vector<double> x(kBundledDesignPoints);
  std::vector<double> y(kBundledDesignPoints);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = i + 1 == x.size() ? dom.hi
                             : dom.lo + dom.length() * static_cast<double>(i) /
                                            static_cast<double>(x.size() - 1);
    y[i] = truth(x[i]);
  }
  return Dataset::make(std::move(x), std::move(y), dom);
}

auto bundled_scenarios() -> std::vector<Scenario> {
  std::vector<Scenario> out;

  out.push_back(build("sigmoid", "Logistic step centred at 0.5 (analog scenario)",
                      tabulate([](double x) { return 1.0 / (1.0 + std::exp(-12.0 * (x - 0.5))); }),
                      PredictorDistribution::beta(2.0, 2.0), 0x5167'0001, fp2));

  out.push_back(build("unimodal", "Gaussian bump peaking at 0.4 (analog scenario)",
                      tabulate([](double x) {
                        const double z = (x - 0.4) / 0.15;
                        return 0.2 + 0.8 * std::exp(-0.5 * z * z);
                      }),
                      PredictorDistribution::beta(2.0, 2.0), 0x5167'0002, fp2));

  // Estimate D is a*sqrt(x) + b*x + c: its slope is unbounded at 0, so
  // squared-slope integrals over the full range diverge.
  out.push_back(build("asymptote", "Saturating rise 1 - exp(-6x) (analog scenario)",
                      tabulate([](double x) { return 1.0 - std::exp(-6.0 * x); }),
                      PredictorDistribution::uniform(), 0x5167'0003, [](const Dataset& d) {
                        return fit_basis(d, BasisSpec::fractional_polynomial({0.5, 1.0}, 0.0));
                      }));

  {
    // 1 + 4(x - 0.3)^2 - 6(x - 0.3)^3 expanded.
    const double c[] = {1.522, -4.02, 9.4, -6.0};
    out.push_back(build("u_then_decline",
                        "Dip near 0.3, rise, then decline past 0.75 (synthetic analog of an "
                        "applied exposure curve)",
                        Curve::polynomial(kUnit, c), PredictorDistribution::beta(2.0, 2.0),
                        0x5167'0004, fp2));
  }
  return out;
}

}  // namespace curvemetrics
