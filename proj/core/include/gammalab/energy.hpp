#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gammalab/geometry.hpp"
#include "gammalab/grid.hpp"
#include "gammalab/kernel.hpp"
#include "gammalab/media.hpp"

namespace gammalab {

enum class FKind { truncated_affine, exponential, tabulated };

/// Increasing profile f with f(0) = 0, f(t)/t -> alpha at 0+, f -> beta at +inf.
class FProfile {
public:
    /// f(t) = min(alpha t, beta).
    static FProfile truncated_affine(double alpha, double beta);
    /// f(t) = beta (1 - exp(-alpha t / beta)).
    static FProfile exponential(double alpha, double beta);
    /// Piecewise-linear through (t_k, f_k) with t_0 = 0, f_0 = 0, constant
    /// after the last knot. Evaluation only: no truncation family.
    static FProfile tabulated(std::vector<double> t, std::vector<double> f);

    FKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    double value(double t) const;
    /// An element of the sub/super-differential. At the kink of the
    /// truncated-affine profile this is the left derivative alpha.
    double slope(double t) const;

private:
    FKind kind_ = FKind::truncated_affine;
    double alpha_ = 1.0;
    double beta_ = 1.0;
    std::vector<double> knots_;
    std::vector<double> knot_values_;
};

/// Throw std::invalid_argument for t < 0.
double f_eval(const FProfile& f, double t);
double f_slope(const FProfile& f, double t);

struct TruncationPair {
    double alpha;
    double beta;
};

/// (alpha_i, beta_i) with f(t) >= min(alpha_i t, beta_i) for all t >= 0 and
/// sup_i alpha_i = alpha, sup_i beta_i = beta. Truncated affine: both scale by
/// 1 - 1/(i+1). Exponential: odd i take alpha_i = alpha (1 - 1/(k+1)), k = (i+1)/2,
/// with beta_i at the crossing of f and alpha_i t; even i take
/// beta_i = beta (1 - 1/(k+1)), k = i/2, with alpha_i = beta_i / f^{-1}(beta_i).
TruncationPair truncation_family(const FProfile& f, int i);

struct FunctionalParams {
    double epsilon;
    KernelSpec kernel;
    FProfile f;
    Medium medium;
    BoundaryPolicy policy = BoundaryPolicy::restrict_renormalize;
};

/// Discrete F_eps(u) = (1/eps) Σ_cells h^n f(eps (W(·, ∇_h u) * ρ_eps)(x_c))
/// on a fixed grid, with its exact gradient. W sees the forward-difference
/// gradient ∇_h u; in symmetrized mode W depends on it only through e(u).
class NonlocalFunctional {
public:
    /// Throws ResolutionError if h > eps/4 or the stencil is under-resolved.
    NonlocalFunctional(const FunctionalParams& params, const Grid& grid);

    double value(std::span<const double> u) const;
    double value_and_gradient(std::span<const double> u, std::span<double> gradient) const;

    /// g(y) = W(y, ∇_h u(y)) per cell.
    std::vector<double> local_density(std::span<const double> u) const;
    /// ∫ (W * ρ_eps) dx with the same boundary policy.
    double convolved_local_energy(std::span<const double> u) const;

    const Grid& grid() const { return grid_; }
    const Convolution& convolution() const { return convolution_; }
    const FunctionalParams& params() const { return params_; }

private:
    FunctionalParams params_;
    Grid grid_;
    Convolution convolution_;
    std::vector<double> coefficients_;
};

double nonlocal_energy(const DisplacementField& u, const FunctionalParams& params);
/// ∫_U W(x, e(u)) dx by midpoint rule over cells.
double local_energy(const DisplacementField& u, const Medium& medium);
double convolved_local_energy(const DisplacementField& u, const FunctionalParams& params);

/// Smooth piece of a limit competitor: membership test plus closed-form ∇u.
struct CompetitorPiece {
    std::function<bool(const Point&)> contains;
    std::function<Tensor(const Point&)> gradient;
};

/// Flat jump facet with unit normal. In 1D the facet is the point segment.a.
struct JumpFacet {
    Segment segment;
    Point normal;
};

/// Piecewise-smooth competitor: pieces partition the domain up to the jump set.
struct PiecewiseCompetitor {
    int dim = 2;
    Box domain;
    std::vector<CompetitorPiece> pieces;
    std::vector<JumpFacet> jumps;

    /// Single affine piece u = M x, no jumps.
    static PiecewiseCompetitor affine(int dim, const Box& domain, const Tensor& m);
};

/// β Σ_facets φ_ρ(ν) H^{n-1}(facet).
double limit_surface_energy(const PiecewiseCompetitor& u, double beta, const SupportBody& s);
/// α ∫_U W(x, e(u)) by midpoint rule on `quadrature` points per axis.
double limit_bulk_energy(const PiecewiseCompetitor& u, const Medium& medium, double alpha, int quadrature = 512);
double limit_energy(const PiecewiseCompetitor& u, const Medium& medium, double alpha, double beta, const SupportBody& s,
                    int quadrature = 512);

}  // namespace gammalab
