// Serial vs OpenMP point sweeps over the two heaviest residuals: the Jacobi
// residual of an algebroid and the field strength of a gauge field.

#include <benchmark/benchmark.h>

#include "nlg/algebroid.hpp"
#include "nlg/gauge.hpp"
#include "nlg/models.hpp"
#include "nlg/sweep.hpp"

namespace {

using namespace nlg;

template <class Sweep>
void jacobi_sweep(benchmark::State& state, Sweep sweep) {
  const LieAlgebroid A = builtin_model("su2").A;
  const auto pts = sample_points(A.base(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    const ArgMax r = sweep(pts.size(), [&](std::size_t i) { return max_abs(jacobi_residual(A, pts[i])); });
    benchmark::DoNotOptimize(r.value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Sweep>
void curvature_sweep(benchmark::State& state, Sweep sweep) {
  const GaugeField g = random_gauge_field(builtin_model("so3_action").A, 2, 3);
  const auto pts = sample_points(g.source, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    const ArgMax r = sweep(pts.size(), [&](std::size_t i) { return max_abs(field_strength(g, pts[i])); });
    benchmark::DoNotOptimize(r.value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

auto serial_sweep = [](std::size_t n, const auto& f) { return serial::max_over(n, f); };
auto parallel_sweep = [](std::size_t n, const auto& f) { return parallel::max_over(n, f); };

void BM_JacobiSerial(benchmark::State& s) { jacobi_sweep(s, serial_sweep); }
void BM_JacobiParallel(benchmark::State& s) { jacobi_sweep(s, parallel_sweep); }
void BM_FieldStrengthSerial(benchmark::State& s) { curvature_sweep(s, serial_sweep); }
void BM_FieldStrengthParallel(benchmark::State& s) { curvature_sweep(s, parallel_sweep); }

}  // namespace

BENCHMARK(BM_JacobiSerial)->Arg(100)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_JacobiParallel)->Arg(100)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_FieldStrengthSerial)->Arg(100)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_FieldStrengthParallel)->Arg(100)->Arg(1000)->Arg(10000)->UseRealTime();

BENCHMARK_MAIN();
