#pragma once

#include <span>
#include <vector>

#include "gammalab/geometry.hpp"
#include "gammalab/grid.hpp"

namespace gammalab {

enum class SupportShape { box, ball, polytope };

/// Convex, symmetric support S of the convolution kernel, with 0 interior.
/// Polytopes are stored as the convex hull of the given vertices and their
/// negatives, so -S = S holds by construction.
class SupportBody {
public:
    static SupportBody box(std::vector<double> half_widths);
    static SupportBody ball(int dim, double radius);
    /// 2D: hull of {±v}. 1D: the interval [-max|v|, max|v|].
    static SupportBody polytope(int dim, const std::vector<Point>& vertices);

    int dim() const { return dim_; }
    SupportShape shape() const { return shape_; }
    const std::vector<double>& half_widths() const { return half_widths_; }
    double radius() const { return radius_; }
    /// Counter-clockwise hull vertices (polytope only).
    const std::vector<Point>& hull() const { return hull_; }

    /// Minkowski gauge |x|_S.
    double gauge(const Point& x) const;
    /// Support function sup_{y in S} y·v (finite for every v).
    double support(const Point& v) const;
    double volume() const;
    /// sup_{y in S} |y|.
    double circumradius() const;

private:
    int dim_ = 2;
    SupportShape shape_ = SupportShape::ball;
    std::vector<double> half_widths_;
    double radius_ = 1.0;
    std::vector<Point> hull_;
    std::vector<Point> facet_normals_;
    std::vector<double> facet_offsets_;
};

enum class ProfileKind { uniform, gauge_polynomial };

/// Kernel ρ: density c (1 - |x|_S)^q on S (q = 0 for the uniform profile),
/// zero outside, c chosen so that ∫ρ = 1.
class KernelSpec {
public:
    static KernelSpec uniform(SupportBody support);
    static KernelSpec gauge_polynomial(SupportBody support, double exponent);

    const SupportBody& support() const { return support_; }
    ProfileKind profile() const { return profile_; }
    double exponent() const { return exponent_; }
    double normalization() const { return normalization_; }
    int dim() const { return support_.dim(); }

    double density(const Point& x) const;

private:
    KernelSpec(SupportBody support, ProfileKind profile, double exponent);

    SupportBody support_;
    ProfileKind profile_;
    double exponent_;
    double normalization_;
};

double gauge(const Point& x, const SupportBody& s);

/// φ_ρ(ν) = 2 sup_{y∈S} |y·ν|. Requires |ν| = 1 within 1e-12.
double phi_rho(const Point& nu, const SupportBody& s);

/// Length of the chord of S through 0 in direction ξ: 2 / |ξ|_S.
double mu_xi(const Point& xi, const SupportBody& s);

/// max over ξ ∈ {ν} ∪ {n_directions uniform directions} of μ_ξ |<ν,ξ>|.
double phi_via_slicing(const Point& nu, const SupportBody& s, int n_directions);

/// Flat interface piece: a segment [a,b] in 2D, the point a in 1D.
struct Segment {
    Point a;
    Point b;
};

/// Anisotropic distance d_S(x, [a,b]) = inf_t |x - a - t(b-a)|_S.
double gauge_distance(const Point& x, const Segment& seg, const SupportBody& s);

/// Lebesgue measure of {x ∈ domain : d_S(x, J) < h}: midpoint rule over
/// columns of width at most h/16, each column intersected exactly.
double tube_volume(std::span<const Segment> interface, double h, const SupportBody& s, const Box& domain);

/// ρ_ε sampled on the lattice hℤ^n restricted to εS, weights summing to 1.
struct MollifierStencil {
    int dim = 2;
    std::vector<Index2> offsets;
    std::vector<double> weights;
    double epsilon = 0.0;
    double h = 0.0;
};

/// Throws ResolutionError("kernel under-resolved ...") if fewer than 3^n
/// lattice offsets carry positive weight.
MollifierStencil make_stencil(const KernelSpec& kernel, double epsilon, double h);

/// How samples outside the lattice are treated by convolve.
enum class BoundaryPolicy {
    restrict_renormalize,  ///< drop them, rescale remaining weights to 1
    zero_extend,           ///< treat them as 0
    clamp,                 ///< replace by the nearest in-lattice sample
};

/// Convolution operator on a fixed lattice; caches the in-lattice stencil
/// mass used by restrict_renormalize.
class Convolution {
public:
    Convolution(LatticeShape shape, MollifierStencil stencil, BoundaryPolicy policy);

    std::vector<double> apply(std::span<const double> field) const;
    std::vector<double> apply_adjoint(std::span<const double> field) const;

    const LatticeShape& shape() const { return shape_; }
    const MollifierStencil& stencil() const { return stencil_; }
    BoundaryPolicy policy() const { return policy_; }

private:
    LatticeShape shape_;
    MollifierStencil stencil_;
    BoundaryPolicy policy_;
    std::vector<double> mass_;
};

/// out(x) = Σ_i w_i field(x - o_i) with the boundary policy applied.
std::vector<double> convolve(const LatticeShape& shape, std::span<const double> field,
                             const MollifierStencil& stencil, BoundaryPolicy policy);

/// Transpose of convolve with the same arguments: <convolve(a), b> = <a, convolve_adjoint(b)>.
std::vector<double> convolve_adjoint(const LatticeShape& shape, std::span<const double> field,
                                     const MollifierStencil& stencil, BoundaryPolicy policy);

}  // namespace gammalab
