#include <benchmark/benchmark.h>

#include "radial/delta_consistency.hpp"
#include "radial/oracle.hpp"

using namespace radial;

namespace {

RadialProblem hydrogen(int points) {
  return RadialProblem(Channel{0, 1.0}, Coulomb{1.0}, U0Strict{},
                       RadialGrid(GridScheme::log_uniform, 1e-6, 80.0, points));
}

void BM_NumerovOutward(benchmark::State& state) {
  const auto p = hydrogen(static_cast<int>(state.range(0)));
  const Discretization d(p);
  const auto start = series_start(p.indicial_report(), p.coefficients(), p.channel(), -0.5,
                                  U0Strict{}, d.r(0), d.r(1));
  for (auto _ : state) {
    auto half = numerov_outward(d, -0.5, start, d.size() - 1);
    benchmark::DoNotOptimize(half.u.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NumerovOutward)->Arg(5000)->Arg(20000)->Arg(80000);

void BM_SolveHydrogen(benchmark::State& state) {
  const auto p = hydrogen(20000);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_state(p, n).E);
}
BENCHMARK(BM_SolveHydrogen)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_FdSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RadialProblem p(Channel{0, 1.0}, Coulomb{1.0}, U0Strict{}, oracle_grid(40.0, n, 0));
  const auto m = build_fd_matrix(p);
  for (auto _ : state) benchmark::DoNotOptimize(fd_spectrum(m, 3).back());
}
BENCHMARK(BM_FdSpectrum)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_WeakDefect(benchmark::State& state) {
  const auto t = builtin_trial("polyexp");
  for (auto _ : state) benchmark::DoNotOptimize(weak_defect(t, 0.5));
}
BENCHMARK(BM_WeakDefect);

}  // namespace

BENCHMARK_MAIN();
