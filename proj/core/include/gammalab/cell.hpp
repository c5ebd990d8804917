#pragma once

#include <span>
#include <string>
#include <vector>

#include "gammalab/cell_problem.hpp"
#include "gammalab/media.hpp"
#include "gammalab/solve.hpp"

namespace gammalab {

struct CellStudyOptions {
    int min_cells_per_side = 16;
    /// Grid cells per coefficient period (or lattice cell).
    int cells_per_structure = 8;
    SolveOptions solve;
};

struct CellTableEntry {
    double r = 0.0;
    double delta = 0.0;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    int cells_per_side = 0;
};

struct CellFormulaEstimate {
    double w_prime = 0.0;   ///< min over the deepest half of the δ-list, smallest r
    double w_second = 0.0;  ///< max over the same entries
    double spread = 0.0;    ///< (w_second - w_prime) / w_second
    bool flagged = false;   ///< spread above 5%
    std::vector<CellTableEntry> table;  ///< row-major: r outer, δ inner
};

/// Table of m_k(u_M, Q_r(x)) / r^n for W_k(y, M) = W(y/δ_k, M).
/// radii and deltas must be strictly decreasing with >= 3 entries each and
/// min(r) / max(δ) >= 8.
CellFormulaEstimate estimate_W_prime_second(const Point& x, const Tensor& m, const Medium& medium,
                                            std::span<const double> deltas, std::span<const double> radii,
                                            const CellStudyOptions& options = {});

struct HomogenizationEstimate {
    std::vector<double> t;
    std::vector<double> values;
    std::vector<bool> converged;
    std::vector<int> iterations;
    double estimate = 0.0;   ///< value at the largest t
    double error_bar = 0.0;  ///< |last - previous|
};

/// m(u_M, Q_t(t x)) / t^n along an increasing t-list (>= 4 periods per side
/// at the smallest t).
HomogenizationEstimate homogenize_det(const Medium& medium, const Tensor& m, std::span<const double> t_list,
                                      const Point& x = {0.0, 0.0}, const CellStudyOptions& options = {});

struct RescalingCheck {
    double scaled = 0.0;    ///< m_k(u_M, Q_r(x)) with W_k = W(·/δ)
    double unscaled = 0.0;  ///< δ^n m(u_M, Q_{r/δ}(x/δ))
    double residual = 0.0;  ///< relative difference
    bool converged = false;
};

/// Solves both sides on grids matched by y = δ ŷ (spacing h and h/δ).
/// Throws GridMismatchError if r is not a multiple of h.
RescalingCheck rescaling_identity_check(const Medium& medium, const Tensor& m, double r, double delta, const Point& x,
                                        double h, const SolveOptions& options = {});

/// Closed-form 1D laminate value (∫ a^{-1/(p-1)})^{-(p-1)} |m|^p.
double laminate_1d_oracle(double a1, double a2, double theta, double p, double slope);

struct PartitionCheck {
    double whole = 0.0;       ///< μ(A)
    double parts_sum = 0.0;   ///< Σ μ(A_i)
    double slack = 0.0;       ///< η(h): energy in the pinned rings along internal faces
    double slack_ratio = 0.0; ///< η / Σ μ(A_i)
    double gap = 0.0;         ///< Σ μ(A_i) - μ(A)
    bool holds = false;       ///< μ(A) <= Σ μ(A_i) + η
};

struct CovarianceCheck {
    Index2 z{0, 0};
    double shifted = 0.0;     ///< μ(τ_z ω, A) / |A|
    double translated = 0.0;  ///< μ(ω, A + z) / |A|
    double difference = 0.0;
};

struct SubadditivityReport {
    double whole = 0.0;
    double bound = 0.0;  ///< c2 (|M+M^T|^p + 1) per unit volume
    std::vector<PartitionCheck> partitions;
    std::vector<CovarianceCheck> covariance;
    bool bounded = true;
    bool all_converged = true;
    std::vector<std::string> violations;
};

/// Covariance, subadditivity and boundedness of A -> μ(ω, A) = m_ω(u_M, A)
/// on lattice-aligned boxes. Every box (A, the parts, A + z) must lie in
/// the realization's core.
SubadditivityReport subadditive_properties_check(const RandomMedium& medium, const Tensor& m, const IntBox& domain,
                                                 std::span<const std::vector<IntBox>> partitions,
                                                 std::span<const Index2> shifts, double h,
                                                 const SolveOptions& options = {});

}  // namespace gammalab
