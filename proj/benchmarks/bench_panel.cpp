#include <benchmark/benchmark.h>

#include "curvemetrics/study.hpp"

using namespace curvemetrics;

namespace {

void BM_ShowcasePanel(benchmark::State& state) {
  const auto scenarios = bundled_scenarios();
  const Scenario& s = scenarios[static_cast<std::size_t>(state.range(0))];
  const auto specs = showcase_panel();
  PanelOptions opt;
  opt.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_panel(s, specs, opt));
  state.SetLabel(s.name);
}

void BM_LatticePanel(benchmark::State& state) {
  const auto scenarios = bundled_scenarios();
  const auto specs = enumerate_lattice({Scope::full()}, {0.5}, {0.5}, true);
  PanelOptions opt;
  opt.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_panel(scenarios[1], specs, opt));
  state.counters["cells"] = static_cast<double>(specs.size() * scenarios[1].estimates.size());
}

}  // namespace

BENCHMARK(BM_ShowcasePanel)->Args({0, 1})->Args({2, 1})->Args({2, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticePanel)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
