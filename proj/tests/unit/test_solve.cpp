#include <gtest/gtest.h>

#include <random>

#include "gammalab/errors.hpp"
#include "gammalab/solve.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

// Separable quadratic Σ c_i (x_i - t_i)^2.
class Quadratic : public Objective {
public:
    Quadratic(std::vector<double> c, std::vector<double> t) : c_(std::move(c)), t_(std::move(t)) {}
    double value(std::span<const double> x) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += c_[i] * (x[i] - t_[i]) * (x[i] - t_[i]);
        return s;
    }
    double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * c_[i] * (x[i] - t_[i]);
        return value(x);
    }

private:
    std::vector<double> c_;
    std::vector<double> t_;
};

MediumSpec constant_spec(int dim, double a = 1.0) {
    MediumSpec s;
    s.dim = dim;
    s.field = ConstantField{a};
    s.c1 = s.c2 = a;
    return s;
}

Tensor random_symmetric(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double off = u(rng);
    return {u(rng), off, off, u(rng)};
}

}  // namespace

TEST(Solve, DescentFindsQuadraticMinimum) {
    const Quadratic q({1.0, 10.0, 100.0, 0.5}, {1.0, -2.0, 0.5, 3.0});
    for (int history : {0, 10}) {
        std::vector<double> x(4, 0.0);
        SolveOptions o;
        o.history = history;
        o.tolerance = 1e-14;
        const DescentResult r = descend(q, x, {}, o);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.energy, 0.0, 1e-8);
        EXPECT_NEAR(x[2], 0.5, 1e-4);
    }
}

TEST(Solve, FixedUnknownsNeverMove) {
    const Quadratic q({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
    std::vector<double> x{5.0, 0.0, -2.0};
    const std::vector<std::uint8_t> fixed{1, 0, 1};
    SolveOptions o;
    o.record_trace = true;
    const DescentResult r = descend(q, x, fixed, o);
    EXPECT_EQ(x[0], 5.0);
    EXPECT_EQ(x[2], -2.0);
    EXPECT_NEAR(x[1], 1.0, 1e-6);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
}

TEST(Solve, NonlocalGradientVanishesOnMask) {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 16);
    DisplacementField u = DisplacementField::affine(g, Tensor{0.3, 0.0, 0.1, -0.2});
    pin_boundary_layer(u, 1);
    const FunctionalParams params{0.25, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 1.0), Medium(constant_spec(2))};
    const auto grad = grad_nonlocal(u, params);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (u.pinned(n)) {
            EXPECT_EQ(grad[2 * n], 0.0);
            EXPECT_EQ(grad[2 * n + 1], 0.0);
        }
    }
}

TEST(Solve, ZeroDatumGivesZero) {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 16);
    DisplacementField datum = DisplacementField::zeros(g);
    pin_boundary_layer(datum, 1);
    const FunctionalParams params{0.25, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 1.0), Medium(constant_spec(2))};
    SolveOptions o;
    o.restarts = 4;
    const SolveResult r = minimize_nonlocal(params, datum, o);
    EXPECT_EQ(r.energy, 0.0);
    for (double v : r.field.values) EXPECT_EQ(v, 0.0);
}

TEST(Solve, ElasticRegimeStaysNearAffine) {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 32);
    const Tensor m{0.1, 0.02, 0.02, -0.05};
    DisplacementField datum = DisplacementField::affine(g, m);
    pin_boundary_layer(datum, 1);
    const FunctionalParams params{0.125, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 1.0), Medium(constant_spec(2))};
    SolveOptions o;
    o.init = Initialization::zero;
    const SolveResult r = minimize_nonlocal(params, datum, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.energy / oracle::power(m, 2, true, 2.0), 1.0, 0.03);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (datum.pinned(n)) EXPECT_EQ(r.field.values[2 * n], datum.values[2 * n]);
    }
}

TEST(Solve, RestartsAreDeterministic) {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 16);
    DisplacementField datum = DisplacementField::affine(g, Tensor{1.0, 0.0, 0.0, 0.0});
    pin_boundary_layer(datum, 1);
    const FunctionalParams params{0.25, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 0.1), Medium(constant_spec(2))};
    SolveOptions o;
    o.restarts = 4;
    o.seed = 9;
    o.max_iterations = 300;
    const SolveResult a = minimize_nonlocal(params, datum, o);
    const SolveResult b = minimize_nonlocal(params, datum, o);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_EQ(a.restart, b.restart);
    EXPECT_EQ(a.field.values, b.field.values);
}

TEST(Solve, MissingMaskIsRejected) {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 16);
    const FunctionalParams params{0.25, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(1.0, 1.0), Medium(constant_spec(2))};
    EXPECT_THROW(minimize_nonlocal(params, DisplacementField::zeros(g), {}), std::invalid_argument);
}

TEST(Solve, ConstantMediumCellIsExact) {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 5; ++k) {
        const Tensor m = random_symmetric(rng);
        const CellValue v = minimize_cell(CellProblem::cube(m, {0.3, -0.1}, 1.0, Medium(constant_spec(2, 2.0)), 16));
        EXPECT_NEAR(v.value, 2.0 * oracle::power(m, 2, true, 2.0), 1e-12);
        EXPECT_NEAR(v.energy, v.value, 1e-12);
        EXPECT_TRUE(v.converged);
    }
}

TEST(Solve, CellValuesIgnoreSkewPart) {
    MediumSpec s = constant_spec(2);
    s.field = CheckerboardField{1.0, 3.0};
    s.c2 = 3.0;
    const Medium medium = Medium(s).rescaled(0.25);
    const Tensor m{0.4, 0.1, 0.1, -0.2};
    const CellValue a = minimize_cell(CellProblem::cube(m, {0.0, 0.0}, 1.0, medium, 32));
    const CellValue b = minimize_cell(CellProblem::cube(m + Tensor{0.0, 0.8, -0.8, 0.0}, {0.0, 0.0}, 1.0, medium, 32));
    EXPECT_NEAR(a.value, b.value, 2e-8 * a.value);
    EXPECT_LT(a.value, 1.0 * oracle::power(m, 2, true, 2.0) * 3.0);
}

TEST(Solve, CellResolutionGuards) {
    const Medium c(constant_spec(2));
    EXPECT_THROW(minimize_cell(CellProblem::cube(Tensor{}, {0.0, 0.0}, 1.0, c, 8)), ResolutionError);
    MediumSpec s = constant_spec(2);
    s.field = LaminateField{0, 1.0, 2.0, 0.5};
    s.c2 = 2.0;
    const Medium fine = Medium(s).rescaled(1.0 / 16);
    EXPECT_THROW(minimize_cell(CellProblem::cube(Tensor{}, {0.0, 0.0}, 1.0, fine, 64)), ResolutionError);
    EXPECT_NO_THROW(minimize_cell(CellProblem::cube(Tensor{}, {0.0, 0.0}, 1.0, fine, 128)));
}

TEST(Solve, CellMinimizerKeepsRingAffine) {
    MediumSpec s = constant_spec(1);
    s.field = LaminateField{0, 1.0, 4.0, 0.5};
    s.c2 = 4.0;
    const CellValue v = minimize_cell(CellProblem::cube(Tensor{1.0, 0, 0, 0}, {0.0, 0.0}, 4.0, Medium(s), 32));
    const Grid& g = v.field.grid;
    for (int i : {0, 1, g.cells[0] - 1, g.cells[0]}) {
        EXPECT_NEAR(v.field.values[g.node_index(i, 0)], g.node_position(i, 0)[0], 1e-14);
        EXPECT_TRUE(v.field.pinned(g.node_index(i, 0)));
    }
}
