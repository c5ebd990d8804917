// Acceptance criteria 1-10. One PASS/FAIL line per criterion on stdout;
// exit status is the number of failures. Optional arguments select criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gammalab/cell.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/kernel.hpp"
#include "gammalab/onedim.hpp"
#include "gammalab/solve.hpp"
#include "gammalab/stoch.hpp"
#include "gammalab/tools/studies.hpp"
#include "gammalab/tools/table.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

MediumSpec constant_spec(int dim, double a = 1.0) {
    MediumSpec s;
    s.dim = dim;
    s.p = 2.0;
    s.field = ConstantField{a};
    s.c1 = s.c2 = a;
    return s;
}

MediumSpec two_phase(int dim, double p, bool random) {
    MediumSpec s;
    s.dim = dim;
    s.p = p;
    if (random) {
        s.field = RandomCheckerboardField{1.0, 4.0, 0.5};
    } else {
        s.field = LaminateField{0, 1.0, 4.0, 0.5};
    }
    s.c1 = 1.0;
    s.c2 = 4.0;
    return s;
}

Outcome kernel_geometry() {
    const SupportBody ball = SupportBody::ball(2, 1.0);
    const SupportBody box = SupportBody::box({1.0, 1.0});
    double ball_err = 0.0;
    for (int k = 0; k < 720; ++k) ball_err = std::max(ball_err, std::abs(phi_rho(oracle::direction(2 * M_PI * k / 720 + 0.3), ball) - 2.0));
    const double box_err = std::abs(phi_rho({M_SQRT1_2, M_SQRT1_2}, box) - 2.0 * std::sqrt(2.0));
    double slicing = 0.0;
    for (const SupportBody* s : {&ball, &box}) {
        for (int k = 0; k < 97; ++k) {
            const Point nu = oracle::direction(0.0647 * k + 0.011);
            slicing = std::max(slicing, std::abs(phi_via_slicing(nu, *s, 720) / phi_rho(nu, *s) - 1.0));
        }
    }
    return {ball_err <= 1e-10 && box_err <= 1e-10 && slicing <= 1e-3,
            "ball err " + fmt("%.1e", ball_err) + ", box diag err " + fmt("%.1e", box_err) + ", slicing gap " +
                fmt("%.2e", slicing)};
}

Outcome tube_limit() {
    const Segment seg{{0.0, 0.0}, {1.0, 0.0}};
    const double h = 1.0 / 256;
    const Box domain{{-1.0, -1.0}, {2.0, 1.0}};
    double worst = 0.0;
    std::string detail;
    for (const auto& [name, s] : {std::pair{"ball", SupportBody::ball(2, 1.0)}, std::pair{"box", SupportBody::box({1.0, 0.5})}}) {
        const double ratio = tube_volume(std::span(&seg, 1), h, s, domain) / h;
        const double target = phi_rho({0.0, 1.0}, s) * 1.0;
        const double err = std::abs(ratio / target - 1.0);
        worst = std::max(worst, err);
        detail += std::string(detail.empty() ? "" : ", ") + name + " rel err " + fmt("%.3e", err);
    }
    return {worst <= 0.02, detail};
}

Outcome gradient_oracle() {
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, 1.0 / 16);
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> n01;
    double worst = 0.0;
    int checks = 0;
    for (GradientMode mode : {GradientMode::symmetrized, GradientMode::full}) {
        for (int kind = 0; kind < 2; ++kind) {
            MediumSpec spec = two_phase(2, 2.0, false);
            spec.mode = mode;
            std::vector<double> u(g.node_count() * 2);
            for (double& v : u) v = 0.1 * n01(rng);
            // beta between two central values of eps (W * rho), away from every kink.
            const double eps = 0.25;
            const FunctionalParams probe{eps, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                         FProfile::truncated_affine(1.0, 1.0), Medium(spec)};
            const NonlocalFunctional pf(probe, g);
            std::vector<double> conv = pf.convolution().apply(pf.local_density(u));
            std::sort(conv.begin(), conv.end());
            conv.erase(std::unique(conv.begin(), conv.end()), conv.end());
            const std::size_t mid = conv.size() / 2;
            const double beta = eps * 0.5 * (conv[mid - 1] + conv[mid]);
            const FProfile f = kind == 0 ? FProfile::truncated_affine(1.0, beta) : FProfile::exponential(1.0, beta);
            const NonlocalFunctional F({eps, probe.kernel, f, Medium(spec)}, g);
            std::vector<double> grad(u.size());
            F.value_and_gradient(u, grad);
            for (int k = 0; k < 20; ++k) {
                std::vector<double> d(u.size());
                for (double& v : d) v = n01(rng);
                double analytic = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) analytic += grad[i] * d[i];
                const double t = 1e-6;
                std::vector<double> up = u;
                std::vector<double> dn = u;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    up[i] += t * d[i];
                    dn[i] -= t * d[i];
                }
                const double fd = (F.value(up) - F.value(dn)) / (2 * t);
                worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(fd), std::abs(analytic)));
                ++checks;
            }
        }
    }
    return {worst <= 1e-5, std::to_string(checks) + " directions, max rel err " + fmt("%.2e", worst)};
}

Outcome elastic_decoupling() {
    const double eps = 1.0 / 64;
    const Grid g = make_grid(2, Box{{0.0, 0.0}, {1.0, 1.0}}, eps / 8);
    const Tensor m{0.1, 0.05, 0.05, -0.05};
    DisplacementField datum = DisplacementField::affine(g, m);
    pin_boundary_layer(datum, 1);
    const double alpha = 1.0;
    const FunctionalParams params{eps, KernelSpec::uniform(SupportBody::ball(2, 1.0)),
                                  FProfile::truncated_affine(alpha, 1.0), Medium(constant_spec(2))};
    const SolveResult r = minimize_nonlocal(params, datum, {});
    const double target = alpha * 1.0 * oracle::power(m, 2, true, 2.0);
    const double err = std::abs(r.energy / target - 1.0);
    return {err <= 0.03, std::to_string(g.cells[0]) + "^2 cells, energy " + fmt("%.6g", r.energy) + " vs " +
                             fmt("%.6g", target) + ", rel err " + fmt("%.2e", err) + ", " +
                             std::to_string(r.iterations) + " iterations" + (r.converged ? "" : " (not converged)")};
}

Outcome one_dim_limit() {
    OneDProblem p;
    p.epsilon = 1.0 / 200;
    p.cells = 3200;
    p.p = 2.0;
    p.f = FProfile::truncated_affine(1.0, 1.0);
    const double star = std::sqrt(2.0);
    std::vector<double> lambdas;
    for (int k = 0; k <= 30; ++k) lambdas.push_back(star * (0.5 + 1.5 * k / 30.0));
    const CrossoverResult r = crossover(p, lambdas);
    const CrossoverRow& lo = r.rows.front();
    const CrossoverRow& hi = r.rows.back();
    const double e_lo = std::abs(lo.energy / lo.limit - 1.0);
    const double e_hi = std::abs(hi.energy / hi.limit - 1.0);
    const double e_star = std::abs(r.lambda_star / star - 1.0);
    return {e_lo <= 0.05 && e_hi <= 0.05 && e_star <= 0.05,
            "elastic err " + fmt("%.2e", e_lo) + ", fracture err " + fmt("%.2e", e_hi) + ", lambda* " +
                fmt("%.5f", r.lambda_star) + " (rel err " + fmt("%.2e", e_star) + ")"};
}

Outcome convex_cell() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const SolveOptions options;
    double worst = 0.0;
    double skew = 0.0;
    const Medium constant(constant_spec(2, 1.0));
    const Medium layered = Medium(two_phase(2, 2.0, false)).rescaled(0.25);
    for (int k = 0; k < 5; ++k) {
        const double off = u(rng);
        const Tensor m{u(rng), off, off, u(rng)};
        const Tensor s{0.0, u(rng), 0.0, 0.0};
        const Tensor skew_part{0.0, s.xy, -s.xy, 0.0};
        const CellValue v = minimize_cell(CellProblem::cube(m, {0.0, 0.0}, 1.0, constant, 32), options);
        worst = std::max(worst, std::abs(v.value / oracle::power(m, 2, true, 2.0) - 1.0));
        for (const Medium* medium : {&constant, &layered}) {
            const CellValue a = minimize_cell(CellProblem::cube(m, {0.0, 0.0}, 1.0, *medium, 32), options);
            const CellValue b = minimize_cell(CellProblem::cube(m + skew_part, {0.0, 0.0}, 1.0, *medium, 32), options);
            skew = std::max(skew, std::abs(a.value - b.value) / std::max(a.value, 1e-300));
        }
    }
    return {worst <= 0.01 && skew <= 2.0 * options.tolerance,
            "max rel err vs W(sym M) " + fmt("%.2e", worst) + ", skew shift rel diff " + fmt("%.2e", skew)};
}

Outcome deterministic_homogenization() {
    std::string detail;
    bool pass = true;
    for (double p : {2.0, 1.5, 3.0}) {
        const HomogenizationEstimate h = homogenize_det(Medium(two_phase(1, p, false)), Tensor{1.0, 0, 0, 0},
                                                        std::vector{16.0, 32.0});
        const double target = oracle::harmonic(1.0, 4.0, 0.5, p, 1.0);
        const double err = std::abs(h.estimate / target - 1.0);
        pass = pass && err <= 0.02;
        detail += "p=" + fmt("%g", p) + " err " + fmt("%.2e", err) + ", ";
    }
    double residual = 0.0;
    for (int dim : {1, 2}) {
        const RescalingCheck r = rescaling_identity_check(Medium(two_phase(dim, 2.0, false)), Tensor{1.0, 0.3, 0.3, -0.2},
                                                          1.0, 0.25, {0.125, 0.375}, 1.0 / 32);
        residual = std::max(residual, r.residual);
    }
    pass = pass && residual <= 1e-8;
    return {pass, detail + "rescaling residual " + fmt("%.2e", residual)};
}

std::vector<std::vector<IntBox>> guillotine_partitions(const IntBox& a, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<IntBox>> out;
    for (int k = 0; k < count; ++k) {
        const int axis = static_cast<int>(rng() % 2);
        const int cut = a.lo[axis] + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(a.extent()[axis] - 1));
        IntBox first = a;
        IntBox second = a;
        first.hi[axis] = cut;
        second.lo[axis] = cut;
        std::vector<IntBox> parts{first};
        // Every other partition splits the second piece again across the other axis.
        if (k % 2 == 1) {
            const int other = 1 - axis;
            const int cut2 = second.lo[other] + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(second.extent()[other] - 1));
            IntBox third = second;
            second.hi[other] = cut2;
            third.lo[other] = cut2;
            parts.push_back(third);
        }
        parts.push_back(second);
        out.push_back(parts);
    }
    return out;
}

Outcome subadditive_process() {
    const IntBox a{{0, 0}, {4, 4}};
    const RandomMedium omega = RandomMedium::sample(two_phase(2, 2.0, true), 8128, a);
    const auto partitions = guillotine_partitions(a, 3, 77);
    const std::vector<Index2> shifts{{1, 0}, {-2, 3}};
    const Tensor m{1.0, 0.0, 0.0, 0.0};
    const SubadditivityReport coarse = subadditive_properties_check(omega, m, a, partitions, shifts, 1.0 / 32);
    const SubadditivityReport fine = subadditive_properties_check(omega, m, a, partitions, shifts, 1.0 / 64);

    double cov = 0.0;
    for (const auto* r : {&coarse, &fine}) {
        for (const CovarianceCheck& c : r->covariance) cov = std::max(cov, c.difference);
    }
    double ratio = 0.0;
    double halving_lo = INFINITY;
    double halving_hi = 0.0;
    bool holds = true;
    for (std::size_t k = 0; k < coarse.partitions.size(); ++k) {
        ratio = std::max(ratio, coarse.partitions[k].slack_ratio);
        const double q = fine.partitions[k].slack / coarse.partitions[k].slack;
        halving_lo = std::min(halving_lo, q);
        halving_hi = std::max(halving_hi, q);
        holds = holds && coarse.partitions[k].holds && fine.partitions[k].holds;
    }
    const bool bounded = coarse.bounded && fine.bounded;
    const bool pass = cov <= 1e-10 && ratio <= 0.03 && halving_lo >= 0.25 && halving_hi <= 0.75 && holds && bounded;
    return {pass, "covariance diff " + fmt("%.1e", cov) + ", slack ratio " + fmt("%.2e", ratio) +
                      " at h=1/32, slack(1/64)/slack(1/32) in [" + fmt("%.3f", halving_lo) + ", " +
                      fmt("%.3f", halving_hi) + "], subadditive " + (holds ? "yes" : "no") + ", bounded " +
                      (bounded ? "yes" : "no")};
}

Outcome stochastic_homogenization() {
    StochStudy st;
    st.spec = two_phase(1, 2.0, true);
    st.m = Tensor{1.0, 0.0, 0.0, 0.0};
    st.t_list = {8, 16, 32, 64};
    st.samples = 64;
    st.base_seed = 20240601;
    const StochResult r = ergodic_estimate(st);
    const double err = std::abs(r.estimate / 1.6 - 1.0);
    bool decreasing = true;
    std::string sds;
    for (std::size_t l = 0; l < r.levels.size(); ++l) {
        if (l > 0) decreasing = decreasing && r.levels[l].sd < r.levels[l - 1].sd;
        sds += (l ? "/" : "") + fmt("%.3f", r.levels[l].sd);
    }
    return {err <= 0.03 && decreasing, "mean(t=64) " + fmt("%.4f", r.estimate) + " +- " + fmt("%.4f", r.levels.back().std_error) +
                                           " (rel err " + fmt("%.2e", err) + "), sd " + sds};
}

Outcome determinism() {
    using nlohmann::json;
    const std::vector<std::pair<std::string, json>> studies{
        {"phi", json::parse(R"({"phi": {"support": {"type": "box", "half_widths": [1, 0.5]}, "directions": 90}})")},
        {"tube", json::parse(R"({"tube": {"support": {"type": "ball"}, "interface": {"a": [0, 0], "b": [1, 0.5]},
                                 "h_list": [0.0625, 0.03125]}})")},
        {"gamma1d", json::parse(R"({"gamma1d": {"alpha": 1, "beta": 1, "epsilon": 0.05,
                                    "lambda_sweep": {"min": 0.8, "max": 2.4, "count": 9}}})")},
        {"elastic2d", json::parse(R"({"elastic2d": {"epsilons": [0.125], "side": 0.5, "M": [[0.1, 0], [0.05, 0]],
                                      "profile": {"kind": "exponential", "alpha": 1, "beta": 0.5},
                                      "kernel": {"support": {"type": "box", "half_widths": [1, 1]}},
                                      "solver": {"restarts": 3, "seed": 4}}})")},
        {"cell", json::parse(R"({"cell": {"medium": {"dim": 1, "field": {"type": "laminate", "a1": 1, "a2": 4}},
                                 "M": 1, "radii": [2, 1.5, 1], "deltas": [0.125, 0.0625, 0.03125]}})")},
        {"homdet", json::parse(R"({"homdet": {"medium": {"dim": 2, "field": {"type": "checkerboard", "a1": 1, "a2": 2}},
                                   "M": [[1, 0], [0, 0]], "t_list": [4, 6]}})")},
        {"homstoch", json::parse(R"({"homstoch": {"medium": {"dim": 2, "field": {"type": "randomCheckerboard", "a1": 1, "a2": 4}},
                                     "M": [[0, 1], [0, 0]], "t_list": [4, 5], "samples": 8, "seed": 3}})")},
    };
    std::string failed;
    for (const auto& [name, config] : studies) {
        std::vector<std::string> runs;
        for (const char* threads : {"1", "3"}) {
            setenv("GAMMALAB_THREADS", threads, 1);
            std::string bytes;
            for (const auto& t : tools::run_study(name, config).tables) bytes += tools::to_csv(t.table);
            runs.push_back(bytes);
        }
        if (runs[0] != runs[1] || runs[0].empty()) failed += (failed.empty() ? "" : ", ") + name;
    }
    unsetenv("GAMMALAB_THREADS");
    return {failed.empty(), failed.empty() ? "7 studies, CSV bytes identical across re-runs (1 and 3 threads)"
                                           : "differing CSVs: " + failed};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"kernel geometry", kernel_geometry},
        {"tube limit", tube_limit},
        {"gradient oracle", gradient_oracle},
        {"elastic decoupling", elastic_decoupling},
        {"1D Gamma-limit", one_dim_limit},
        {"convex cell formula", convex_cell},
        {"deterministic homogenization", deterministic_homogenization},
        {"subadditive process", subadditive_process},
        {"stochastic homogenization", stochastic_homogenization},
        {"determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures;
}
