#include <benchmark/benchmark.h>

#include "curvemetrics/measures.hpp"
#include "curvemetrics/study.hpp"

using namespace curvemetrics;

namespace {

const Scenario& sigmoid() {
  static const Scenario s = bundled_scenarios().front();
  return s;
}

void run(benchmark::State& state, const MeasureSpec& spec) {
  const Scenario& s = sigmoid();
  const Estimate& e = s.estimate("C");
  EvaluationOptions opt;
  opt.grid_cells = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate(spec, s.truth, e.curve, s.distribution, &*e.precision, opt));
}

void BM_IntegralAbsolute(benchmark::State& state) {
  run(state, MeasureSpec::range(Axis::y, Aggregation::integral_dx, Characteristic::function, Loss::absolute));
}

void BM_ExpectationSquaredSlope(benchmark::State& state) {
  run(state,
      MeasureSpec::range(Axis::y, Aggregation::expectation_dfx, Characteristic::first_derivative, Loss::squared));
}

void BM_QuantileBand(benchmark::State& state) {
  auto spec = MeasureSpec::range(Axis::y, Aggregation::quantile_fx, Characteristic::function, Loss::absolute,
                                 Scope::quantile_band(0.05, 0.95));
  spec.q = 0.9;
  run(state, spec);
}

void BM_MaxCurvature(benchmark::State& state) {
  run(state, MeasureSpec::range(Axis::y, Aggregation::max, Characteristic::second_derivative, Loss::absolute));
}

void BM_EpsAccuracyPrecisionWeighted(benchmark::State& state) {
  run(state, MeasureSpec::range(Axis::y, Aggregation::precision_weighted, Characteristic::function,
                                Loss::eps_accuracy));
}

}  // namespace

BENCHMARK(BM_IntegralAbsolute)->Arg(500)->Arg(2001)->Arg(8001);
BENCHMARK(BM_ExpectationSquaredSlope)->Arg(2001);
BENCHMARK(BM_QuantileBand)->Arg(2001);
BENCHMARK(BM_MaxCurvature)->Arg(2001);
BENCHMARK(BM_EpsAccuracyPrecisionWeighted)->Arg(2001);
