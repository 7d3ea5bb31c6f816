#include <benchmark/benchmark.h>

#include "potts_af/potts_af.hpp"

using namespace potts_af;

namespace {

void BM_LogPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto j = sample_couplings(n, 4.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(log_partition(j, 2, 1.0, 1u << 20));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config_count(2, n)));
}
BENCHMARK(BM_LogPartition)->Arg(8)->Arg(12)->Arg(16);

void BM_QuenchedExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quenched_pressure_exact({2, 1.0, 4.0}, n, 1e-6).value);
}
BENCHMARK(BM_QuenchedExact)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_G1(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(g1(1.0, 4.0, q, 0.5, 1e-10).value);
}
BENCHMARK(BM_G1)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Optimize(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimize(1.5, 6.0, q).max_gap);
}
BENCHMARK(BM_Optimize)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CascadeG1(benchmark::State& state) {
  const CascadeSpec spec{2, {0.3, 0.7}, LimitFlag::none, LimitFlag::none};
  const auto h = SpinHierarchySpec::symmetric(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(cavity_g1({2, 1.0, 4.0}, 5, spec, h, 0, 1).value);
}
BENCHMARK(BM_CascadeG1)->Unit(benchmark::kMillisecond);

void BM_PdAtoms(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_pd_atoms(0.5, 4096, ++seed).atoms.back());
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_PdAtoms);

}  // namespace

BENCHMARK_MAIN();
