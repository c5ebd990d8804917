#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gammalab/cell_problem.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/grid.hpp"

namespace gammalab {

enum class Initialization { datum_extension, zero, supplied };

struct SolveOptions {
    int max_iterations = 20000;
    /// Converged when the energy drops by at most tolerance * |E| over the
    /// last `window` iterations.
    double tolerance = 1e-8;
    int window = 25;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    /// Quasi-Newton memory for the descent direction; 0 gives steepest descent.
    int history = 10;
    Initialization init = Initialization::datum_extension;
    /// Non-local runs: 1 = init only; otherwise init, zero, then seeded perturbations.
    int restarts = 1;
    std::uint64_t seed = 0;
    /// Perturbation amplitude relative to max |datum|.
    double perturbation = 0.05;
    std::optional<DisplacementField> supplied;
    bool record_trace = false;
};

/// Smooth (or a.e. smooth) objective on a flat vector of unknowns.
class Objective {
public:
    virtual ~Objective() = default;
    virtual double value(std::span<const double> x) const = 0;
    virtual double value_and_gradient(std::span<const double> x, std::span<double> gradient) const = 0;
};

struct DescentResult {
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    std::vector<double> trace;  ///< energy after each accepted step (if recorded)
};

/// Monotone descent with Armijo backtracking. Unknowns with fixed[i] != 0
/// never move. x is updated in place to the final iterate.
DescentResult descend(const Objective& objective, std::vector<double>& x, std::span<const std::uint8_t> fixed,
                      const SolveOptions& options);

struct SolveResult {
    DisplacementField field;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    int restart = 0;
};

/// Gradient of the discrete non-local energy, zero on masked nodes.
std::vector<double> grad_nonlocal(const DisplacementField& u, const FunctionalParams& params);

/// Minimize the non-local energy with the datum's masked values held fixed.
/// The datum's unmasked values are the "datum extension" initialization.
SolveResult minimize_nonlocal(const FunctionalParams& params, const DisplacementField& datum, const SolveOptions& options);

/// Normalized local cell energy J(ψ) = |A|^{-1} ∫ W(x, M + ∇_h φ) with
/// φ = h ψ, so values are comparable across resolutions and scales.
class CellObjective : public Objective {
public:
    explicit CellObjective(const CellProblem& problem);

    double value(std::span<const double> psi) const override;
    double value_and_gradient(std::span<const double> psi, std::span<double> gradient) const override;

    const Grid& grid() const { return grid_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    /// Unknown flags: the boundary cell ring is fixed.
    const std::vector<std::uint8_t>& fixed() const { return fixed_; }
    std::size_t unknowns() const { return fixed_.size(); }

private:
    Tensor m_;
    int dim_;
    double p_;
    GradientMode mode_;
    Grid grid_;
    std::vector<double> coefficients_;
    std::vector<std::uint8_t> fixed_;
};

/// Throws ResolutionError below 16 cells per axis or 8 cells per
/// coefficient period.
void check_cell_resolution(const CellProblem& problem);

CellValue minimize_cell(const CellProblem& problem, const SolveOptions& options = {});

}  // namespace gammalab
