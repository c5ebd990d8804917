#include "gammalab/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/parallel.hpp"

namespace gammalab {

int OneDProblem::window() const { return static_cast<int>(std::floor(epsilon * cells + 1e-9)); }

void validate(const OneDProblem& problem) {
    if (!(problem.lambda >= 0.0)) throw std::invalid_argument("boundary value lambda must be non-negative");
    if (!(problem.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
    if (!(problem.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (problem.cells < 2) throw std::invalid_argument("at least two cells are required");
    if (problem.h() > problem.epsilon / 8.0 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "1D grid under-resolved: h = " << problem.h() << " > eps/8 = " << problem.epsilon / 8.0;
        throw ResolutionError(msg.str());
    }
}

namespace {

struct Window {
    int lo;
    int hi;  // inclusive
};

Window window_of(int c, int m, int n) { return {std::max(0, c - m), std::min(n - 1, c + m)}; }

}  // namespace

double g_eps_energy_and_gradient(std::span<const double> w, const OneDProblem& problem, std::span<double> gradient) {
    const int n = problem.cells;
    if (w.size() != static_cast<std::size_t>(n + 1)) throw std::invalid_argument("node vector size must be cells + 1");
    const bool want_gradient = !gradient.empty();
    if (want_gradient && gradient.size() != w.size()) throw std::invalid_argument("gradient size mismatch");
    const int m = problem.window();
    const double eps = problem.epsilon;
    const double h = problem.h();

    std::vector<double> slope(static_cast<std::size_t>(n));
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int c = 0; c < n; ++c) {
        slope[c] = (w[c + 1] - w[c]) * n;
        prefix[c + 1] = prefix[c] + std::pow(std::abs(slope[c]), problem.p);
    }

    double energy = 0.0;
    std::vector<double> q(want_gradient ? static_cast<std::size_t>(n) : 0);
    for (int c = 0; c < n; ++c) {
        const Window win = window_of(c, m, n);
        const double count = win.hi - win.lo + 1;
        const double t = eps * (prefix[win.hi + 1] - prefix[win.lo]) / count;
        energy += problem.f.value(t);
        if (want_gradient) q[c] = problem.f.slope(t) / count;
    }
    energy *= h / eps;
    if (!want_gradient) return energy;

    // dG/dg_j = h Σ_{c : j in window(c)} q_c; windows are symmetric so this
    // is again a window sum.
    std::vector<double> qp(static_cast<std::size_t>(n) + 1, 0.0);
    for (int c = 0; c < n; ++c) qp[c + 1] = qp[c] + q[c];
    std::fill(gradient.begin(), gradient.end(), 0.0);
    for (int j = 0; j < n; ++j) {
        const Window win = window_of(j, m, n);
        const double dg = h * (qp[win.hi + 1] - qp[win.lo]);
        const double s = slope[j];
        const double ds = s == 0.0 ? 0.0 : dg * problem.p * std::pow(std::abs(s), problem.p - 1.0) * (s > 0 ? 1.0 : -1.0);
        gradient[j + 1] += n * ds;
        gradient[j] -= n * ds;
    }
    return energy;
}

double g_eps_energy(std::span<const double> w, const OneDProblem& problem) {
    return g_eps_energy_and_gradient(w, problem, {});
}

GEpsilonObjective::GEpsilonObjective(OneDProblem problem) : problem_(std::move(problem)) {
    fixed_.assign(static_cast<std::size_t>(problem_.cells) + 1, 0);
    fixed_.front() = 1;
    fixed_.back() = 1;
}

double GEpsilonObjective::value(std::span<const double> w) const { return g_eps_energy(w, problem_); }

double GEpsilonObjective::value_and_gradient(std::span<const double> w, std::span<double> gradient) const {
    return g_eps_energy_and_gradient(w, problem_, gradient);
}

OneDCompetitor OneDCompetitor::affine(double lambda) { return {{}, {lambda}, {}}; }

OneDCompetitor OneDCompetitor::step(double lambda, double x) { return {{x}, {0.0, 0.0}, {lambda}}; }

double g_limit(const OneDCompetitor& w, double alpha, double beta, double p) {
    if (w.slopes.size() != w.breaks.size() + 1 || w.jumps.size() != w.breaks.size()) {
        throw std::invalid_argument("competitor needs one slope per piece and one jump per break");
    }
    double bulk = 0.0;
    double left = 0.0;
    for (std::size_t k = 0; k < w.slopes.size(); ++k) {
        const double right = k < w.breaks.size() ? w.breaks[k] : 1.0;
        if (!(right > left) || right > 1.0) throw std::invalid_argument("breaks must be sorted inside (0,1)");
        bulk += std::pow(std::abs(w.slopes[k]), p) * (right - left);
        left = right;
    }
    const auto jumps = std::count_if(w.jumps.begin(), w.jumps.end(), [](double j) { return j != 0.0; });
    return alpha * bulk + 2.0 * beta * static_cast<double>(jumps);
}

double g_limit_minimum(double lambda, double alpha, double beta, double p) {
    return std::min(alpha * std::pow(std::abs(lambda), p), 2.0 * beta);
}

std::vector<double> affine_nodes(const OneDProblem& problem) {
    std::vector<double> w(static_cast<std::size_t>(problem.cells) + 1);
    for (int i = 0; i <= problem.cells; ++i) w[i] = problem.lambda * i / problem.cells;
    w.back() = problem.lambda;
    return w;
}

std::vector<double> ramp_nodes(const OneDProblem& problem) {
    std::vector<double> w(static_cast<std::size_t>(problem.cells) + 1, 0.0);
    for (int i = problem.cells / 2 + 1; i <= problem.cells; ++i) w[i] = problem.lambda;
    return w;
}

OneDSolve minimize_g_eps(const OneDProblem& problem, const SolveOptions& options) {
    validate(problem);
    const GEpsilonObjective objective(problem);
    std::vector<double> affine = affine_nodes(problem);
    std::vector<double> ramp = ramp_nodes(problem);
    const DescentResult ra = descend(objective, affine, objective.fixed(), options);
    const DescentResult rr = descend(objective, ramp, objective.fixed(), options);

    OneDSolve out;
    out.affine_energy = ra.energy;
    out.ramp_energy = rr.energy;
    const bool fracture = rr.energy < ra.energy;
    out.branch = fracture ? "fracture" : "elastic";
    out.energy = fracture ? rr.energy : ra.energy;
    out.w = fracture ? std::move(ramp) : std::move(affine);
    out.iterations = fracture ? rr.iterations : ra.iterations;
    out.converged = ra.converged && rr.converged;
    return out;
}

CrossoverResult crossover(const OneDProblem& base, std::span<const double> lambdas, const SolveOptions& options) {
    if (lambdas.size() < 2) throw std::invalid_argument("lambda sweep needs at least two values");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) throw std::invalid_argument("lambda sweep must be strictly increasing");
    }
    const double alpha = base.f.alpha();
    const double beta = base.f.beta();

    CrossoverResult result;
    result.analytic = std::pow(2.0 * beta / alpha, 1.0 / base.p);
    result.rows.resize(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t k) {
        OneDProblem problem = base;
        problem.lambda = lambdas[k];
        const OneDSolve s = minimize_g_eps(problem, options);
        result.rows[k] = {lambdas[k], s.energy, s.branch, s.affine_energy, s.ramp_energy, s.iterations, s.converged,
                          g_limit_minimum(lambdas[k], alpha, beta, base.p)};
    });

    bool found = false;
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const CrossoverRow& row = result.rows[k];
        if (row.branch != "fracture") continue;
        result.first_fracture = row.lambda;
        if (k > 0) {
            const CrossoverRow& prev = result.rows[k - 1];
            const double d0 = prev.ramp_energy - prev.affine_energy;
            const double d1 = row.ramp_energy - row.affine_energy;
            result.lambda_star = prev.lambda + (row.lambda - prev.lambda) * d0 / (d0 - d1);
        } else {
            result.lambda_star = row.lambda;
        }
        found = true;
        break;
    }
    if (!found) throw NumericalError("lambda sweep does not reach the fracture branch");
    return result;
}

}  // namespace gammalab
