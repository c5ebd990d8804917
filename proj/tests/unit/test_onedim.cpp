#include <gtest/gtest.h>

#include <random>

#include "gammalab/energy.hpp"
#include "gammalab/errors.hpp"
#include "gammalab/onedim.hpp"

using namespace gammalab;

namespace {

OneDProblem problem(double eps, int cells_per_eps, double alpha = 1.0, double beta = 1.0) {
    OneDProblem p;
    p.epsilon = eps;
    p.cells = static_cast<int>(std::lround(cells_per_eps / eps));
    p.f = FProfile::truncated_affine(alpha, beta);
    return p;
}

}  // namespace

TEST(OneDim, ZeroFieldHasZeroEnergy) {
    const OneDProblem p = problem(0.05, 16);
    EXPECT_EQ(g_eps_energy(std::vector<double>(p.cells + 1, 0.0), p), 0.0);
}

TEST(OneDim, AffineIsExactInElasticRegime) {
    OneDProblem p = problem(0.01, 16, 1.5, 2.0);
    for (double lambda : {0.3, 1.0, 2.5}) {
        p.lambda = lambda;
        p.p = 2.0;
        EXPECT_NEAR(g_eps_energy(affine_nodes(p), p), 1.5 * lambda * lambda, 1e-12 * lambda * lambda);
    }
}

TEST(OneDim, OneCellRampSaturatesTwoEpsilonWindow) {
    OneDProblem p = problem(0.01, 16);
    p.lambda = 50.0;
    const int m = p.window();
    EXPECT_EQ(m, 16);
    const double e = g_eps_energy(ramp_nodes(p), p);
    EXPECT_NEAR(e, (2.0 * m + 1.0) / m, 1e-12);
    EXPECT_NEAR(e, 2.0, 2.0 * p.epsilon * 4.0);
}

TEST(OneDim, SaturationCeilingAndSymmetry) {
    OneDProblem p = problem(0.05, 8, 1.0, 0.2);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01;
    std::vector<double> w(p.cells + 1);
    for (double& v : w) v = 3.0 * n01(rng);
    EXPECT_LE(g_eps_energy(w, p), 0.2 / p.epsilon * (1.0 + 1e-12));
    std::vector<double> mirrored(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mirrored[i] = -w[i];
    EXPECT_EQ(g_eps_energy(w, p), g_eps_energy(mirrored, p));
}

TEST(OneDim, GradientMatchesCentralDifferences) {
    OneDProblem p = problem(0.1, 8);
    p.f = FProfile::exponential(1.0, 0.5);
    p.p = 2.5;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    std::vector<double> w(p.cells + 1);
    for (double& v : w) v = 0.1 * n01(rng);
    std::vector<double> g(w.size());
    g_eps_energy_and_gradient(w, p, g);
    for (std::size_t i = 0; i < w.size(); i += 7) {
        const double t = 1e-7;
        std::vector<double> up = w;
        std::vector<double> dn = w;
        up[i] += t;
        dn[i] -= t;
        EXPECT_NEAR(g[i], (g_eps_energy(up, p) - g_eps_energy(dn, p)) / (2 * t), 1e-5 * (std::abs(g[i]) + 1e-3));
    }
}

TEST(OneDim, AgreesWithGeneralFunctionalForUniformKernel) {
    OneDProblem p = problem(0.05, 8);
    p.f = FProfile::exponential(1.0, 0.3);
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n01;
    std::vector<double> w(p.cells + 1);
    for (double& v : w) v = 0.2 * n01(rng);

    MediumSpec spec;
    spec.dim = 1;
    spec.p = p.p;
    spec.field = ConstantField{1.0};
    const Grid grid = make_grid(1, Box{{0.0, 0.0}, {1.0, 0.0}}, p.h());
    const FunctionalParams params{p.epsilon, KernelSpec::uniform(SupportBody::box({1.0})), p.f, Medium(spec)};
    EXPECT_NEAR(NonlocalFunctional(params, grid).value(w), g_eps_energy(w, p), 1e-12);
}

TEST(OneDim, LimitFunctionalExamples) {
    EXPECT_DOUBLE_EQ(g_limit(OneDCompetitor::affine(1.5), 2.0, 1.0, 2.0), 2.0 * 2.25);
    EXPECT_DOUBLE_EQ(g_limit(OneDCompetitor::step(3.0), 2.0, 0.7, 2.0), 1.4);
    const OneDCompetitor two{{0.3, 0.6}, {0.5, 0.5, 0.5}, {1.0, -2.0}};
    EXPECT_DOUBLE_EQ(g_limit(two, 1.0, 1.0, 2.0), 0.25 + 4.0);
    EXPECT_DOUBLE_EQ(g_limit_minimum(0.5, 1.0, 1.0, 2.0), 0.25);
    EXPECT_DOUBLE_EQ(g_limit_minimum(5.0, 1.0, 1.0, 2.0), 2.0);
    EXPECT_THROW(g_limit(OneDCompetitor{{0.5}, {1.0}, {1.0}}, 1.0, 1.0, 2.0), std::invalid_argument);
}

TEST(OneDim, ResolutionGuard) {
    OneDProblem p = problem(0.01, 4);
    EXPECT_THROW(validate(p), ResolutionError);
    p = problem(0.01, 8);
    p.lambda = -1.0;
    EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(OneDim, BranchesAtCoarseEpsilon) {
    OneDProblem p = problem(0.02, 16);
    p.lambda = 0.5 * std::sqrt(2.0);
    const OneDSolve elastic = minimize_g_eps(p);
    EXPECT_EQ(elastic.branch, "elastic");
    EXPECT_NEAR(elastic.energy / 0.5, 1.0, 0.05);
    p.lambda = 2.0 * std::sqrt(2.0);
    const OneDSolve fracture = minimize_g_eps(p);
    EXPECT_EQ(fracture.branch, "fracture");
    EXPECT_NEAR(fracture.energy / 2.0, 1.0, 0.05);
    EXPECT_GE(fracture.energy, g_limit_minimum(p.lambda, 1.0, 1.0, 2.0) * 0.95);
}

TEST(OneDim, CrossoverBracketsAnalyticValue) {
    const OneDProblem p = problem(0.02, 16);
    std::vector<double> lambdas;
    for (int k = 0; k <= 12; ++k) lambdas.push_back(1.0 + 0.075 * k);
    const CrossoverResult r = crossover(p, lambdas);
    EXPECT_NEAR(r.analytic, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r.lambda_star / r.analytic, 1.0, 0.05);
    EXPECT_GE(r.first_fracture, r.lambda_star);
    for (const CrossoverRow& row : r.rows) EXPECT_GE(row.energy, row.limit * 0.95);
    EXPECT_THROW(crossover(p, std::vector{1.0, 1.1}), NumericalError);
}
