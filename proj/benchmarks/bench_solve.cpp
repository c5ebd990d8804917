#include <benchmark/benchmark.h>

#include "gammalab/solve.hpp"

namespace {

using namespace gammalab;

void BM_CellSolve(benchmark::State& state) {
    MediumSpec s;
    s.dim = 2;
    s.p = 2.0;
    s.field = CheckerboardField{1.0, 4.0};
    s.c1 = 1.0;
    s.c2 = 4.0;
    const Medium medium = Medium(s).rescaled(0.25);
    const int cells = static_cast<int>(state.range(0));
    const CellProblem problem = CellProblem::cube(Tensor{1.0, 0.2, 0.2, -0.5}, {0.0, 0.0}, 1.0, medium, cells);
    int iterations = 0;
    for (auto _ : state) {
        const CellValue v = minimize_cell(problem, {});
        iterations = v.iterations;
        benchmark::DoNotOptimize(v.value);
    }
    state.counters["iterations"] = iterations;
}
BENCHMARK(BM_CellSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
