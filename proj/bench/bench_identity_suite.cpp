// Identity suite over sampled points: OpenMP-parallel vs serial evaluation.
#include <benchmark/benchmark.h>

#include "lpr/christoffel.hpp"
#include "lpr/models.hpp"

namespace {

void run_suite(benchmark::State& state, const char* model_name, bool parallel) {
  auto model = lpr::instantiate(model_name);
  const auto points = lpr::sample_reduced_points(*model, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    lpr::CheckReport r = parallel ? lpr::identity_suite(*model, points) : lpr::identity_suite_serial(*model, points);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Serial(benchmark::State& state, const char* model) { run_suite(state, model, false); }
void BM_OpenMP(benchmark::State& state, const char* model) { run_suite(state, model, true); }

}  // namespace

BENCHMARK_CAPTURE(BM_Serial, abelian, "abelian_disk")->Arg(100)->Arg(1000)->UseRealTime();
BENCHMARK_CAPTURE(BM_OpenMP, abelian, "abelian_disk")->Arg(100)->Arg(1000)->UseRealTime();
BENCHMARK_CAPTURE(BM_Serial, so3, "so3_coupled")->Arg(100)->Arg(1000)->UseRealTime();
BENCHMARK_CAPTURE(BM_OpenMP, so3, "so3_coupled")->Arg(100)->Arg(1000)->UseRealTime();

BENCHMARK_MAIN();
