#include <benchmark/benchmark.h>

#include <cmath>

#include "vacblow/grid.hpp"
#include "vacblow/kernels.hpp"

using namespace vacblow;

namespace {

struct Data {
  std::vector<double> y, f, v, c, s, out;
  explicit Data(long n) {
    y = *graded_grid(static_cast<int>(n) - 1, 100.0, 1.5);
    for (double x : y) {
      f.push_back(std::sin(x) * std::exp(-0.05 * x));
      v.push_back(x - 0.4 * x / (1 + x));
      c.push_back(-0.5);
      s.push_back(1e-3 * x * std::exp(-x));
    }
  }
};

using Step = void (*)(const std::vector<double>&, const std::vector<double>&, const TransportCoeffs&, double,
                      std::vector<double>&);

void run(benchmark::State& state, Step step) {
  Data d(state.range(0));
  const TransportCoeffs k{&d.v, &d.c, &d.s};
  const double dt = cfl_dt(d.y, d.v, 0.5);
  for (auto _ : state) {
    step(d.y, d.f, k, dt, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_upwind_serial(benchmark::State& s) { run(s, upwind_step_serial); }
void BM_upwind_omp(benchmark::State& s) { run(s, upwind_step_omp); }
void BM_semilag_serial(benchmark::State& s) { run(s, semilag_step_serial); }
void BM_semilag_omp(benchmark::State& s) { run(s, semilag_step_omp); }

}  // namespace

BENCHMARK(BM_upwind_serial)->RangeMultiplier(4)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_upwind_omp)->RangeMultiplier(4)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_semilag_serial)->RangeMultiplier(4)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_semilag_omp)->RangeMultiplier(4)->Range(1 << 12, 1 << 20);

BENCHMARK_MAIN();
