#include <benchmark/benchmark.h>

#include "dpllstat/dp.hpp"
#include "dpllstat/kernels.hpp"
#include "dpllstat/solver.hpp"

namespace {

using namespace dpllstat;

void BM_CountUC(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CnfInstance f = gen_ksat(n, 4 * n, 3, 42);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpll_count_sat(f, Heuristic::uc, ++seed).count);
  }
}
BENCHMARK(BM_CountUC)->Arg(12)->Arg(16)->Arg(20);

void BM_CountGUC(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CnfInstance f = gen_ksat(n, 4 * n, 3, 42);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpll_count_sat(f, Heuristic::guc, ++seed).count);
  }
}
BENCHMARK(BM_CountGUC)->Arg(12)->Arg(16)->Arg(20);

void BM_ColCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Graph g = gen_gnp(n, 5.0, 42);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpll_col(g, SolveMode::count, ++seed).count);
  }
}
BENCHMARK(BM_ColCount)->Arg(10)->Arg(12);

void BM_DpExpect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DpOptions opt;
  opt.prune = 1e-30;
  opt.keep_states = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp_expect(n, 10 * n, DpProblem::sat_uc, opt).total_leaves());
  }
}
BENCHMARK(BM_DpExpect)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_KernelRow(benchmark::State& state) {
  ClauseVector c{3, 8, 12};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_unit_prop<double>(c, 5, 30).target_mass());
  }
}
BENCHMARK(BM_KernelRow);

}  // namespace

BENCHMARK_MAIN();
