#include "gammalab/stoch.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/parallel.hpp"
#include "gammalab/random.hpp"

namespace gammalab {

namespace {

IntBox centered_cube(int t, int dim) {
    const Box q = cube({0.0, 0.0}, static_cast<double>(t), dim);
    return covering_cells(q, dim);
}

RandomMedium draw(const MediumSpec& spec, std::uint64_t seed, const IntBox& core,
                  const std::optional<std::filesystem::path>& cache_dir) {
    if (cache_dir) return load_or_sample(*cache_dir, spec, seed, core);
    return RandomMedium::sample(spec, seed, core);
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t base, int t, int i) { return mix_keys(base, {t, i}); }

void validate(const StochStudy& study) {
    if (!std::holds_alternative<RandomCheckerboardField>(study.spec.field)) {
        throw std::invalid_argument("stochastic study needs a randomCheckerboard law");
    }
    if (study.t_list.empty()) throw std::invalid_argument("t list is empty");
    for (int t : study.t_list) {
        if (t < 4) throw std::invalid_argument("cube sides must be integers >= 4");
    }
    if (study.samples < 8) throw std::invalid_argument("at least 8 samples per t are required");
    if (study.cells_per_unit < 1) throw std::invalid_argument("cells per unit must be positive");
}

CellValue solve_realization(const RandomMedium& omega, const Tensor& m, const IntBox& box, int cells_per_unit,
                            const SolveOptions& options) {
    const int dim = omega.spec().dim;
    Box domain;
    domain.lo = {static_cast<double>(box.lo[0]), dim > 1 ? static_cast<double>(box.lo[1]) : 0.0};
    domain.hi = {static_cast<double>(box.hi[0]), dim > 1 ? static_cast<double>(box.hi[1]) : 0.0};
    return minimize_cell(CellProblem{m, domain, Medium(omega), 1.0 / cells_per_unit}, options);
}

double sample_cell_value(const MediumSpec& spec, const Tensor& m, int t, std::uint64_t seed, int cells_per_unit,
                         const SolveOptions& options) {
    if (t < 4) throw std::invalid_argument("cube side must be an integer >= 4");
    const Box q = cube({0.0, 0.0}, static_cast<double>(t), spec.dim);
    const RandomMedium omega = RandomMedium::sample(spec, seed, covering_cells(q, spec.dim));
    return minimize_cell(CellProblem{m, q, Medium(omega), 1.0 / cells_per_unit}, options).value;
}

StochResult ergodic_estimate(const StochStudy& study) {
    validate(study);
    const int dim = study.spec.dim;
    const std::size_t levels = study.t_list.size();
    const std::size_t samples = static_cast<std::size_t>(study.samples);

    std::vector<CellValue> solved(levels * samples);
    parallel_for(solved.size(), [&](std::size_t job) {
        const int t = study.t_list[job / samples];
        const int i = static_cast<int>(job % samples);
        const Box q = cube({0.0, 0.0}, static_cast<double>(t), dim);
        const RandomMedium omega = draw(study.spec, realization_seed(study.base_seed, t, i), centered_cube(t, dim),
                                        study.cache_dir);
        CellValue v = minimize_cell(CellProblem{study.m, q, Medium(omega), 1.0 / study.cells_per_unit}, study.solve);
        v.field = {};
        solved[job] = std::move(v);
    });

    const double bound = study.spec.c2 * (std::pow(strain_norm(study.m, dim, study.spec.mode), study.spec.p) + 1.0);
    StochResult result;
    for (std::size_t l = 0; l < levels; ++l) {
        StochLevel level;
        level.t = study.t_list[l];
        double sum = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const CellValue& v = solved[l * samples + i];
            if (v.value < 0.0 || v.value > bound * (1.0 + 1e-9)) {
                std::ostringstream msg;
                msg << "cell value " << v.value << " at t = " << level.t << ", sample " << i << " violates the bound "
                    << bound;
                throw NumericalError(msg.str());
            }
            level.values.push_back(v.value);
            level.converged.push_back(v.converged);
            level.iterations.push_back(v.iterations);
            if (!v.converged) ++result.unconverged;
            sum += v.value;
        }
        level.mean = sum / static_cast<double>(samples);
        double ss = 0.0;
        for (double v : level.values) ss += (v - level.mean) * (v - level.mean);
        level.sd = std::sqrt(ss / static_cast<double>(samples - 1));
        level.std_error = level.sd / std::sqrt(static_cast<double>(samples));
        result.levels.push_back(std::move(level));
    }
    if (10 * result.unconverged > static_cast<int>(solved.size())) {
        std::ostringstream msg;
        msg << result.unconverged << " of " << solved.size() << " realization solves did not converge";
        throw NumericalError(msg.str());
    }

    // Largest t and the level nearest t_max / 2.
    std::size_t top = 0;
    for (std::size_t l = 1; l < levels; ++l) {
        if (result.levels[l].t > result.levels[top].t) top = l;
    }
    result.estimate = result.levels[top].mean;
    result.error_bar = result.levels[top].std_error;
    const int half = result.levels[top].t / 2;
    for (const StochLevel& level : result.levels) {
        if (level.t == half) result.error_bar = std::max(result.error_bar, std::abs(result.estimate - level.mean));
    }
    return result;
}

}  // namespace gammalab
