#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gammalab/energy.hpp"
#include "gammalab/kernel.hpp"

namespace {

using namespace gammalab;

Medium laminate_medium() {
    MediumSpec s;
    s.dim = 2;
    s.p = 2.0;
    s.field = LaminateField{0, 1.0, 4.0, 0.5};
    s.c1 = 1.0;
    s.c2 = 4.0;
    return Medium(s).rescaled(1.0 / 16);
}

std::vector<double> random_field(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    std::vector<double> u(n);
    for (double& v : u) v = 0.01 * n01(rng);
    return u;
}

// Unit square at h = eps / 8; the argument is 1 / eps.
void BM_Convolution(benchmark::State& state) {
    const double eps = 1.0 / static_cast<double>(state.range(0));
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, eps / 8);
    const Convolution conv(g.cell_shape(), make_stencil(KernelSpec::uniform(SupportBody::ball(2, 1.0)), eps, g.h),
                           BoundaryPolicy::restrict_renormalize);
    const std::vector<double> field = random_field(g.cell_count());
    for (auto _ : state) benchmark::DoNotOptimize(conv.apply(field));
    state.counters["cells"] = static_cast<double>(g.cell_count());
    state.counters["stencil"] = static_cast<double>(conv.stencil().offsets.size());
}
BENCHMARK(BM_Convolution)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_EnergyAndGradient(benchmark::State& state) {
    const double eps = 1.0 / static_cast<double>(state.range(0));
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, eps / 8);
    const FunctionalParams params{eps, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 1.0), laminate_medium()};
    const NonlocalFunctional F(params, g);
    const std::vector<double> u = random_field(g.node_count() * 2);
    std::vector<double> grad(u.size());
    for (auto _ : state) benchmark::DoNotOptimize(F.value_and_gradient(u, grad));
    state.counters["unknowns"] = static_cast<double>(u.size());
}
BENCHMARK(BM_EnergyAndGradient)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
