// Serial reference against the OpenMP path on the hot kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "pertlab/growth.hpp"
#include "pertlab/parallel.hpp"
#include "pertlab/scenario.hpp"
#include "pertlab/synth.hpp"

using namespace pertlab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

const Scenario& ex2_4() {
  static const Scenario s = open_scenario("ex2_4");
  return s;
}

const Scenario& ex2_3() {
  static const Scenario s = open_scenario("ex2_3");
  return s;
}

void BM_growth_table(benchmark::State& st) {
  const Context c = ex2_3().context();
  const std::vector<double> ns{1, 2, 4, 8, 16, 32, 64, 128}, ks{1, 2, 4};
  for (auto _ : st) benchmark::DoNotOptimize(growth_table(c, ns, ks, Variant::super, exec_of(st)));
}

void BM_finite_table(benchmark::State& st) {
  const Context c = ex2_4().context();
  for (auto _ : st) benchmark::DoNotOptimize(finite_table(c, 256, exec_of(st)));
}

void BM_run_rate(benchmark::State& st) {
  const Scenario& s = ex2_4();
  const Context c = s.context();
  for (auto _ : st) benchmark::DoNotOptimize(run_rate(s, c, s.theorem, exec_of(st)));
}

void BM_map_indexed(benchmark::State& st) {
  auto f = [](std::size_t i) {
    double x = 0.0;
    for (int j = 1; j < 200; ++j) x += std::log1p(static_cast<double>(i + j));
    return x;
  };
  for (auto _ : st) benchmark::DoNotOptimize(map_indexed<double>(exec_of(st), 1 << 14, f));
}

}  // namespace

BENCHMARK(BM_growth_table)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_finite_table)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_rate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_map_indexed)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
