#include <gtest/gtest.h>

#include <random>

#include "gammalab/cell.hpp"
#include "gammalab/errors.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

MediumSpec laminate(int dim, double p, double a1 = 1.0, double a2 = 4.0) {
    MediumSpec s;
    s.dim = dim;
    s.p = p;
    s.field = LaminateField{0, a1, a2, 0.5};
    s.c1 = std::min(a1, a2);
    s.c2 = std::max(a1, a2);
    return s;
}

}  // namespace

TEST(Cell, LaminateOracleClosedForm) {
    EXPECT_NEAR(laminate_1d_oracle(1.0, 4.0, 0.5, 2.0, 1.0), 1.6, 1e-15);
    EXPECT_NEAR(laminate_1d_oracle(1.0, 4.0, 0.5, 2.0, -2.0), 6.4, 1e-14);
    for (double p : {1.5, 3.0}) EXPECT_NEAR(laminate_1d_oracle(2.0, 5.0, 0.3, p, 0.7), oracle::harmonic(2.0, 5.0, 0.3, p, 0.7), 1e-14);
}

TEST(Cell, OneDimensionalLaminateMatchesDiscreteAndContinuumOracles) {
    for (double p : {1.5, 2.0, 3.0}) {
        const Medium medium(laminate(1, p));
        const std::vector<double> ts{8.0, 16.0, 32.0};
        SolveOptions solve;
        solve.tolerance = 1e-12;
        const HomogenizationEstimate h = homogenize_det(medium, Tensor{1.0, 0, 0, 0}, ts, {0.0, 0.0}, {16, 8, solve});
        const double limit = oracle::harmonic(1.0, 4.0, 0.5, p, 1.0);
        EXPECT_NEAR(h.estimate / limit, 1.0, 0.02) << "p = " << p;
        EXPECT_LE(h.error_bar, 0.02 * limit);

        // Finite-grid value, including the pinned end cells.
        const Grid g = make_grid(1, cube({0.0, 0.0}, 32.0, 1), 1.0 / 8);
        const std::vector<double> a = medium.cell_coefficients(g);
        EXPECT_NEAR(h.values.back() / oracle::discrete_1d_cell(a, p, 1.0), 1.0, 1e-6) << "p = " << p;
    }
}

TEST(Cell, ValueConvergesTowardsTheLimitInT) {
    const HomogenizationEstimate h = homogenize_det(Medium(laminate(1, 2.0)), Tensor{1.0, 0, 0, 0}, std::vector{4.0, 8.0, 16.0, 32.0});
    for (std::size_t k = 1; k < h.values.size(); ++k) {
        EXPECT_LT(std::abs(h.values[k] - 1.6), std::abs(h.values[k - 1] - 1.6));
    }
    EXPECT_THROW(homogenize_det(Medium(laminate(1, 2.0)), Tensor{}, std::vector{2.0, 8.0}), std::invalid_argument);
    EXPECT_THROW(homogenize_det(Medium(laminate(1, 2.0)), Tensor{}, std::vector{8.0, 4.0}), std::invalid_argument);
}

TEST(Cell, RescalingIdentityOnMatchedGrids) {
    for (int dim : {1, 2}) {
        const Medium medium(laminate(dim, 2.0));
        const RescalingCheck r = rescaling_identity_check(medium, Tensor{1.0, 0.2, 0.2, -0.5}, 1.0, 0.25,
                                                          {0.125, 0.25}, 1.0 / 32);
        EXPECT_LE(r.residual, 1e-8) << "dim " << dim;
        EXPECT_TRUE(r.converged);
        EXPECT_GT(r.scaled, 0.0);
    }
    EXPECT_THROW(rescaling_identity_check(Medium(laminate(1, 2.0)), Tensor{1.0, 0, 0, 0}, 1.0, 0.25, {0.0, 0.0}, 0.3),
                 GridMismatchError);
}

TEST(Cell, ConstantMediumCellFormulaIsW) {
    MediumSpec s = laminate(2, 2.0, 2.0, 2.0);
    const Tensor m{0.5, 0.2, 0.2, -0.1};
    const CellFormulaEstimate e = estimate_W_prime_second({0.1, 0.2}, m, Medium(s), std::vector{1.0 / 32, 1.0 / 64, 1.0 / 128},
                                                          std::vector{1.0, 0.5, 0.25});
    EXPECT_NEAR(e.w_prime, 2.0 * oracle::power(m, 2, true, 2.0), 1e-10);
    EXPECT_NEAR(e.w_second, e.w_prime, 1e-10);
    EXPECT_FALSE(e.flagged);
    EXPECT_EQ(e.table.size(), 9u);
}

TEST(Cell, CellFormulaPreconditions) {
    const Medium medium(laminate(1, 2.0));
    EXPECT_THROW(estimate_W_prime_second({0, 0}, Tensor{}, medium, std::vector{0.1, 0.05}, std::vector{1.0, 0.5, 0.25}),
                 std::invalid_argument);
    EXPECT_THROW(estimate_W_prime_second({0, 0}, Tensor{}, medium, std::vector{0.1, 0.05, 0.025},
                                         std::vector{1.0, 0.5, 0.5}),
                 std::invalid_argument);
    EXPECT_THROW(estimate_W_prime_second({0, 0}, Tensor{}, medium, std::vector{0.1, 0.05, 0.025},
                                         std::vector{1.0, 0.5, 0.25}),
                 std::invalid_argument);
}

TEST(Cell, SubadditiveProcessProperties) {
    MediumSpec s;
    s.dim = 2;
    s.field = RandomCheckerboardField{1.0, 4.0, 0.5};
    s.c1 = 1.0;
    s.c2 = 4.0;
    const RandomMedium omega = RandomMedium::sample(s, 31, IntBox{{0, 0}, {4, 4}});
    const std::vector<std::vector<IntBox>> partitions{
        {IntBox{{0, 0}, {2, 4}}, IntBox{{2, 0}, {4, 4}}},
        {IntBox{{0, 0}, {4, 1}}, IntBox{{0, 1}, {3, 4}}, IntBox{{3, 1}, {4, 4}}},
    };
    const std::vector<Index2> shifts{{1, 0}, {-2, 3}};
    const Tensor m{1.0, 0.0, 0.0, 0.0};
    const SubadditivityReport r = subadditive_properties_check(omega, m, IntBox{{0, 0}, {4, 4}}, partitions, shifts,
                                                               1.0 / 16);
    EXPECT_TRUE(r.bounded);
    EXPECT_TRUE(r.all_converged);
    EXPECT_TRUE(r.violations.empty()) << r.violations.front();
    for (const PartitionCheck& p : r.partitions) {
        EXPECT_TRUE(p.holds);
        EXPECT_GT(p.slack, 0.0);
        EXPECT_LE(p.whole, p.parts_sum * (1.0 + 1e-6));
    }
    for (const CovarianceCheck& c : r.covariance) EXPECT_LE(c.difference, 1e-10);

    const std::vector<std::vector<IntBox>> bad{{IntBox{{0, 0}, {2, 4}}, IntBox{{1, 0}, {4, 4}}}};
    EXPECT_THROW(subadditive_properties_check(omega, m, IntBox{{0, 0}, {4, 4}}, bad, {}, 1.0 / 16), std::invalid_argument);
}
