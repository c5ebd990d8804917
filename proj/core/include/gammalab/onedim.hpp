#pragma once

#include <span>
#include <string>
#include <vector>

#include "gammalab/energy.hpp"
#include "gammalab/solve.hpp"

namespace gammalab {

/// G_eps on I = (0,1) with w(0) = 0, w(1) = lambda and the uniform kernel
/// 1/2 on [-1,1]. Node values w_0..w_N, slopes per cell.
struct OneDProblem {
    double lambda = 1.0;
    double p = 2.0;
    FProfile f = FProfile::truncated_affine(1.0, 1.0);
    double epsilon = 0.01;
    int cells = 1600;

    double h() const { return 1.0 / cells; }
    /// Window half-width in cells: floor(eps / h).
    int window() const;
};

/// Throws std::invalid_argument for lambda < 0 or p < 1, ResolutionError
/// if h > eps/8.
void validate(const OneDProblem& problem);

/// (1/eps) Σ_c h f(eps A_c), A_c the restricted average of |w'|^p over the
/// cells within eps of cell c.
double g_eps_energy(std::span<const double> w, const OneDProblem& problem);
double g_eps_energy_and_gradient(std::span<const double> w, const OneDProblem& problem, std::span<double> gradient);

class GEpsilonObjective : public Objective {
public:
    explicit GEpsilonObjective(OneDProblem problem);
    double value(std::span<const double> w) const override;
    double value_and_gradient(std::span<const double> w, std::span<double> gradient) const override;
    /// End nodes fixed.
    const std::vector<std::uint8_t>& fixed() const { return fixed_; }

private:
    OneDProblem problem_;
    std::vector<std::uint8_t> fixed_;
};

/// Piecewise-affine competitor: pieces separated by `breaks` (sorted, in
/// (0,1)), slope per piece, jump at each break.
struct OneDCompetitor {
    std::vector<double> breaks;
    std::vector<double> slopes;
    std::vector<double> jumps;

    static OneDCompetitor affine(double lambda);
    /// Zero slope, one jump of height lambda at x.
    static OneDCompetitor step(double lambda, double x = 0.5);
};

/// α ∫ |w'|^p + 2β #(nonzero jumps).
double g_limit(const OneDCompetitor& w, double alpha, double beta, double p);
/// min over the datum class: min(α λ^p, 2β).
double g_limit_minimum(double lambda, double alpha, double beta, double p);

std::vector<double> affine_nodes(const OneDProblem& problem);
/// Zero up to the midpoint node, lambda after: one cell carries the jump.
std::vector<double> ramp_nodes(const OneDProblem& problem);

struct OneDSolve {
    std::vector<double> w;
    double energy = 0.0;
    std::string branch;  ///< "elastic" (affine start won) or "fracture" (ramp start won)
    double affine_energy = 0.0;
    double ramp_energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes from the affine and the ramp start and keeps the lower energy
/// (ties go to the affine branch).
OneDSolve minimize_g_eps(const OneDProblem& problem, const SolveOptions& options = {});

struct CrossoverRow {
    double lambda = 0.0;
    double energy = 0.0;
    std::string branch;
    double affine_energy = 0.0;
    double ramp_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double limit = 0.0;  ///< min(α λ^p, 2β)
};

struct CrossoverResult {
    std::vector<CrossoverRow> rows;
    double lambda_star = 0.0;       ///< zero of E_ramp - E_affine, linearly interpolated
    double first_fracture = 0.0;    ///< smallest swept λ where the ramp branch wins
    double analytic = 0.0;          ///< (2β/α)^{1/p}
};

/// Sweep over lambdas (strictly increasing, bracketing the analytic crossover).
CrossoverResult crossover(const OneDProblem& base, std::span<const double> lambdas, const SolveOptions& options = {});

}  // namespace gammalab
