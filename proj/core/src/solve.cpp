#include "gammalab/solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/parallel.hpp"
#include "gammalab/random.hpp"

namespace gammalab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void mask(std::span<double> v, std::span<const std::uint8_t> fixed) {
    if (fixed.empty()) return;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (fixed[i]) v[i] = 0.0;
    }
}

struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// d = -H g by the two-loop recursion.
std::vector<double> quasi_newton_direction(const std::deque<Pair>& pairs, std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
        alpha[k] = pairs[k].rho * dot(pairs[k].s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * pairs[k].y[i];
    }
    if (!pairs.empty()) {
        const Pair& last = pairs.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double beta = pairs[k].rho * dot(pairs[k].y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * pairs[k].s[i];
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

DescentResult descend(const Objective& objective, std::vector<double>& x, std::span<const std::uint8_t> fixed,
                      const SolveOptions& options) {
    if (!(options.tolerance > 0.0) || options.window < 1) throw std::invalid_argument("solve tolerances must be positive");
    if (!(options.shrink > 0.0 && options.shrink < 1.0)) throw std::invalid_argument("backtracking shrink must lie in (0,1)");
    if (!fixed.empty() && fixed.size() != x.size()) throw std::invalid_argument("fixed mask size mismatch");

    const std::size_t n = x.size();
    std::vector<double> g(n);
    double energy = objective.value_and_gradient(x, g);
    mask(g, fixed);

    DescentResult result;
    std::vector<double> energies{energy};
    std::deque<Pair> pairs;
    std::vector<double> trial(n);
    std::vector<double> g_trial(n);

    for (int it = 0; it < options.max_iterations; ++it) {
        const double gnorm = std::sqrt(dot(g, g));
        if (gnorm == 0.0) {
            result.converged = true;
            break;
        }

        std::vector<double> d = options.history > 0 ? quasi_newton_direction(pairs, g) : std::vector<double>(n);
        if (options.history == 0) {
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        }
        mask(d, fixed);
        double slope = dot(g, d);
        bool steepest = pairs.empty();
        if (!(slope < 0.0)) {
            pairs.clear();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            slope = -gnorm * gnorm;
            steepest = true;
        }

        double step = 1.0;
        if (steepest) {
            double gmax = 0.0;
            for (double v : g) gmax = std::max(gmax, std::abs(v));
            step = std::min(1.0, 1.0 / gmax);
        }

        bool accepted = false;
        double e_trial = energy;
        while (step > 1e-20) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * d[i];
            e_trial = objective.value(trial);
            if (e_trial <= energy + options.sufficient_decrease * step * slope) {
                accepted = true;
                break;
            }
            step *= options.shrink;
        }
        if (!accepted) {
            if (!steepest) {
                pairs.clear();
                continue;
            }
            // No representable decrease along -g: the iterate is stationary
            // to machine precision.
            result.converged = true;
            break;
        }

        e_trial = objective.value_and_gradient(trial, g_trial);
        mask(g_trial, fixed);
        if (options.history > 0) {
            Pair pr{std::vector<double>(n), std::vector<double>(n), 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                pr.s[i] = trial[i] - x[i];
                pr.y[i] = g_trial[i] - g[i];
            }
            const double sy = dot(pr.s, pr.y);
            if (sy > 1e-12 * std::sqrt(dot(pr.s, pr.s) * dot(pr.y, pr.y))) {
                pr.rho = 1.0 / sy;
                pairs.push_back(std::move(pr));
                if (pairs.size() > static_cast<std::size_t>(options.history)) pairs.pop_front();
            }
        }
        x.swap(trial);
        g.swap(g_trial);
        energy = e_trial;
        energies.push_back(energy);
        ++result.iterations;

        const std::size_t w = static_cast<std::size_t>(options.window);
        if (energies.size() > w) {
            const double drop = energies[energies.size() - 1 - w] - energy;
            if (drop <= options.tolerance * std::abs(energy)) {
                result.converged = true;
                break;
            }
        }
    }

    result.energy = energy;
    result.gradient_norm = std::sqrt(dot(g, g));
    if (options.record_trace) result.trace = std::move(energies);
    return result;
}

namespace {

class NonlocalObjective : public Objective {
public:
    explicit NonlocalObjective(const NonlocalFunctional& f) : f_(f) {}
    double value(std::span<const double> x) const override { return f_.value(x); }
    double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
        return f_.value_and_gradient(x, g);
    }

private:
    const NonlocalFunctional& f_;
};

}  // namespace

std::vector<double> grad_nonlocal(const DisplacementField& u, const FunctionalParams& params) {
    NonlocalFunctional f(params, u.grid);
    std::vector<double> g(u.values.size());
    f.value_and_gradient(u.values, g);
    mask(g, u.fixed_unknowns());
    return g;
}

SolveResult minimize_nonlocal(const FunctionalParams& params, const DisplacementField& datum, const SolveOptions& options) {
    if (datum.mask.empty()) throw std::invalid_argument("minimize_nonlocal needs a Dirichlet mask");
    const NonlocalFunctional functional(params, datum.grid);
    const NonlocalObjective objective(functional);
    const std::vector<std::uint8_t> fixed = datum.fixed_unknowns();

    double scale = 0.0;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (fixed[i]) scale = std::max(scale, std::abs(datum.values[i]));
    }
    if (scale == 0.0) scale = 1.0;

    const int restarts = std::max(1, options.restarts);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(restarts));
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x = datum.values;
        const Initialization kind = r == 0 ? options.init : (r == 1 ? Initialization::zero : Initialization::datum_extension);
        if (kind == Initialization::zero) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!fixed[i]) x[i] = 0.0;
            }
        } else if (kind == Initialization::supplied) {
            if (!options.supplied || options.supplied->values.size() != x.size()) {
                throw std::invalid_argument("supplied initialization missing or of the wrong size");
            }
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!fixed[i]) x[i] = options.supplied->values[i];
            }
        }
        if (r >= 2) {
            std::mt19937_64 rng(mix_keys(options.seed, {r}));
            std::uniform_real_distribution<double> noise(-1.0, 1.0);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = noise(rng);
                if (!fixed[i]) x[i] += options.perturbation * scale * v;
            }
        }
        starts[static_cast<std::size_t>(r)] = std::move(x);
    }

    std::vector<DescentResult> runs(starts.size());
    parallel_for(starts.size(), [&](std::size_t r) { runs[r] = descend(objective, starts[r], fixed, options); });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].energy < runs[best].energy - 1e-12 * std::abs(runs[best].energy)) best = r;
    }
    SolveResult out;
    out.field = datum;
    out.field.values = std::move(starts[best]);
    out.energy = runs[best].energy;
    out.iterations = runs[best].iterations;
    out.converged = runs[best].converged;
    out.gradient_norm = runs[best].gradient_norm;
    out.restart = static_cast<int>(best);
    return out;
}

CellProblem CellProblem::cube(const Tensor& m, const Point& center, double side, Medium medium, int cells_per_side) {
    if (cells_per_side < 1) throw std::invalid_argument("cells_per_side must be positive");
    const int dim = medium.dim();
    return CellProblem{m, gammalab::cube(center, side, dim), std::move(medium), side / cells_per_side};
}

void check_cell_resolution(const CellProblem& problem) {
    const Grid grid = make_grid(problem.medium.dim(), problem.domain, problem.h);
    for (int a = 0; a < grid.dim; ++a) {
        if (grid.cells[a] < 16) {
            std::ostringstream msg;
            msg << "cell problem under-resolved: " << grid.cells[a] << " cells along axis " << a << " (need >= 16)";
            throw ResolutionError(msg.str());
        }
    }
    const double structure = problem.medium.structure_length();
    if (structure > 0.0 && structure / problem.h < 8.0 - 1e-9) {
        std::ostringstream msg;
        msg << "cell problem under-resolved: " << structure / problem.h << " cells per coefficient period (need >= 8)";
        throw ResolutionError(msg.str());
    }
}

CellObjective::CellObjective(const CellProblem& problem)
    : m_(problem.m),
      dim_(problem.medium.dim()),
      p_(problem.medium.p()),
      mode_(problem.medium.mode()),
      grid_(make_grid(problem.medium.dim(), problem.domain, problem.h)),
      coefficients_(problem.medium.cell_coefficients(grid_)) {
    DisplacementField shape = DisplacementField::zeros(grid_);
    pin_boundary_layer(shape, 2);
    fixed_ = shape.fixed_unknowns();
}

double CellObjective::value(std::span<const double> psi) const {
    std::vector<Tensor> g(grid_.cell_count());
    cell_gradients(grid_, psi, 1.0, g);
    double sum = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) sum += power_density(coefficients_[c], m_ + g[c], dim_, mode_, p_);
    return sum / static_cast<double>(g.size());
}

double CellObjective::value_and_gradient(std::span<const double> psi, std::span<double> gradient) const {
    std::vector<Tensor> g(grid_.cell_count());
    cell_gradients(grid_, psi, 1.0, g);
    const double inv = 1.0 / static_cast<double>(g.size());
    double sum = 0.0;
    std::vector<Tensor> dual(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) {
        const Tensor total = m_ + g[c];
        sum += power_density(coefficients_[c], total, dim_, mode_, p_);
        dual[c] = inv * power_density_derivative(coefficients_[c], total, dim_, mode_, p_);
    }
    std::fill(gradient.begin(), gradient.end(), 0.0);
    cell_gradients_adjoint(grid_, dual, 1.0, gradient);
    return sum * inv;
}

CellValue minimize_cell(const CellProblem& problem, const SolveOptions& options) {
    check_cell_resolution(problem);
    const CellObjective objective(problem);
    std::vector<double> psi(objective.unknowns(), 0.0);
    const DescentResult run = descend(objective, psi, objective.fixed(), options);

    CellValue out;
    out.value = run.energy;
    out.energy = run.energy * problem.domain.volume(problem.medium.dim());
    out.converged = run.converged;
    out.iterations = run.iterations;
    out.field = DisplacementField::affine(objective.grid(), problem.m);
    for (std::size_t i = 0; i < psi.size(); ++i) out.field.values[i] += problem.h * psi[i];
    pin_boundary_layer(out.field, 2);
    return out;
}

}  // namespace gammalab
