#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "gammalab/media.hpp"
#include "gammalab/solve.hpp"

namespace gammalab {

/// Monte-Carlo study of m_ω(u_M, Q_t(0)) / t^n for a random checkerboard law.
struct StochStudy {
    MediumSpec spec;
    Tensor m;
    std::vector<int> t_list;  ///< integer cube sides, each >= 4
    int samples = 8;          ///< per t, >= 8
    std::uint64_t base_seed = 0;
    int cells_per_unit = 8;   ///< grid cells per lattice cell
    SolveOptions solve;
    std::optional<std::filesystem::path> cache_dir;
};

struct StochLevel {
    int t = 0;
    std::vector<double> values;
    std::vector<bool> converged;
    std::vector<int> iterations;
    double mean = 0.0;
    double sd = 0.0;        ///< sample standard deviation (n - 1)
    double std_error = 0.0; ///< sd / sqrt(n)
};

struct StochResult {
    std::vector<StochLevel> levels;
    double estimate = 0.0;   ///< mean at the largest t
    double error_bar = 0.0;  ///< max(stderr, |mean(t_max) - mean(t_max/2)|)
    int unconverged = 0;
};

/// Seed of realization i at cube side t; independent of the rest of the t list.
std::uint64_t realization_seed(std::uint64_t base, int t, int i);

/// Throws std::invalid_argument unless t >= 4 for all t and samples >= 8.
void validate(const StochStudy& study);

/// Cell value m_ω(u_M, A) / |A| on a lattice box A for a given realization.
CellValue solve_realization(const RandomMedium& omega, const Tensor& m, const IntBox& box, int cells_per_unit,
                            const SolveOptions& options = {});

/// Draws ω from `seed` and solves on Q_t(0).
double sample_cell_value(const MediumSpec& spec, const Tensor& m, int t, std::uint64_t seed, int cells_per_unit = 8,
                         const SolveOptions& options = {});

/// Runs all (t, i) jobs; reduction is in index order. Throws NumericalError
/// if more than 10% of the solves did not converge or a value leaves
/// [0, c2 (|M+M^T|^p + 1)].
StochResult ergodic_estimate(const StochStudy& study);

}  // namespace gammalab
