#include <benchmark/benchmark.h>

#include "mpencil/gamma_kernels.hpp"
#include "mpencil/oracle.hpp"
#include "mpencil/random.hpp"

using namespace mpencil;

namespace {

PencilProblem problem(Index m, Index n) {
  RandomStream rs(42, 0);
  return {rs.complex_matrix(m, n), rs.complex_matrix(m, n), rs.complex_matrix(m, n)};
}

void BM_gamma_serial(benchmark::State& st) {
  const Index n = st.range(0);
  const PencilProblem p = problem(n + 1, n);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gamma_serial(p.A1, p.A2));
}

void BM_gamma_parallel(benchmark::State& st) {
  const Index n = st.range(0);
  const PencilProblem p = problem(n + 1, n);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gamma_parallel(p.A1, p.A2));
}

void BM_scan_serial(benchmark::State& st) {
  const PencilProblem p = problem(5, 4);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::scan_chart_serial(p, 0, static_cast<int>(st.range(0))));
}

void BM_scan_parallel(benchmark::State& st) {
  const PencilProblem p = problem(5, 4);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::scan_chart_parallel(p, 0, static_cast<int>(st.range(0))));
}

} // namespace

BENCHMARK(BM_gamma_serial)->Arg(4)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gamma_parallel)->Arg(4)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_scan_serial)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
