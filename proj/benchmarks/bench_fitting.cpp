#include <benchmark/benchmark.h>

#include <cmath>

#include "curvemetrics/fitting.hpp"

using namespace curvemetrics;

namespace {

auto sample(std::size_t n) -> Dataset {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 0.05 + 0.95 * static_cast<double>(i) / static_cast<double>(n - 1);
    y[i] = std::log(x[i]) + 0.05 * std::sin(37.0 * x[i]);
  }
  return Dataset::make(std::move(x), std::move(y));
}

void BM_BSplineFit(benchmark::State& state) {
  const auto d = sample(static_cast<std::size_t>(state.range(0)));
  const auto basis = BasisSpec::bspline(3, 8, d.x);
  for (auto _ : state) benchmark::DoNotOptimize(fit_basis(d, basis));
}

void BM_FractionalPolynomial(benchmark::State& state) {
  const auto d = sample(static_cast<std::size_t>(state.range(0)));
  const int degree = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fit_fractional_polynomial(d, degree));
}

void BM_PrecisionCurve(benchmark::State& state) {
  const auto d = sample(500);
  const auto m = fit_basis(d, BasisSpec::bspline(3, 8, d.x));
  for (auto _ : state) benchmark::DoNotOptimize(precision_curve(m));
}

}  // namespace

BENCHMARK(BM_BSplineFit)->Arg(200)->Arg(2000);
BENCHMARK(BM_FractionalPolynomial)->Args({500, 1})->Args({500, 2});
BENCHMARK(BM_PrecisionCurve);
