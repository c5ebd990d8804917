#include "gammalab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"

namespace gammalab {

FProfile FProfile::truncated_affine(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("f profile needs alpha > 0 and beta > 0");
    FProfile f;
    f.kind_ = FKind::truncated_affine;
    f.alpha_ = alpha;
    f.beta_ = beta;
    return f;
}

FProfile FProfile::exponential(double alpha, double beta) {
    FProfile f = truncated_affine(alpha, beta);
    f.kind_ = FKind::exponential;
    return f;
}

FProfile FProfile::tabulated(std::vector<double> t, std::vector<double> values) {
    if (t.size() < 2 || t.size() != values.size()) throw std::invalid_argument("tabulated f needs >= 2 matching knots");
    if (t.front() != 0.0 || values.front() != 0.0) throw std::invalid_argument("tabulated f must start at (0, 0)");
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw std::invalid_argument("tabulated f knots must increase");
        if (values[k] < values[k - 1]) throw std::invalid_argument("tabulated f must be non-decreasing");
    }
    FProfile f;
    f.kind_ = FKind::tabulated;
    f.alpha_ = (values[1] - values[0]) / (t[1] - t[0]);
    f.beta_ = values.back();
    if (!(f.alpha_ > 0.0)) throw std::invalid_argument("tabulated f must have positive initial slope");
    f.knots_ = std::move(t);
    f.knot_values_ = std::move(values);
    return f;
}

double FProfile::value(double t) const {
    switch (kind_) {
    case FKind::truncated_affine:
        return std::min(alpha_ * t, beta_);
    case FKind::exponential:
        return -beta_ * std::expm1(-alpha_ * t / beta_);
    case FKind::tabulated: {
        if (t >= knots_.back()) return knot_values_.back();
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
        const double s = (t - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
        return knot_values_[k - 1] + s * (knot_values_[k] - knot_values_[k - 1]);
    }
    }
    return 0.0;
}

double FProfile::slope(double t) const {
    switch (kind_) {
    case FKind::truncated_affine:
        return alpha_ * t <= beta_ ? alpha_ : 0.0;
    case FKind::exponential:
        return alpha_ * std::exp(-alpha_ * t / beta_);
    case FKind::tabulated: {
        if (t > knots_.back()) return 0.0;
        // Left derivative, the first segment at t = 0.
        auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
        std::size_t k = static_cast<std::size_t>(it - knots_.begin());
        if (k == 0) k = 1;
        return (knot_values_[k] - knot_values_[k - 1]) / (knots_[k] - knots_[k - 1]);
    }
    }
    return 0.0;
}

double f_eval(const FProfile& f, double t) {
    if (t < 0.0) throw std::invalid_argument("f is defined on [0, +inf)");
    return f.value(t);
}

double f_slope(const FProfile& f, double t) {
    if (t < 0.0) throw std::invalid_argument("f is defined on [0, +inf)");
    return f.slope(t);
}

TruncationPair truncation_family(const FProfile& f, int i) {
    if (i < 1) throw std::invalid_argument("truncation index must be >= 1");
    switch (f.kind()) {
    case FKind::truncated_affine: {
        const double shrink = 1.0 - 1.0 / (i + 1.0);
        return {f.alpha() * shrink, f.beta() * shrink};
    }
    case FKind::exponential: {
        const double a = f.alpha();
        const double b = f.beta();
        if (i % 2 == 0) {
            const double k = i / 2;
            const double beta_i = b * (1.0 - 1.0 / (k + 1.0));
            // f(t) = beta_i at t = (b / a) ln(k + 1); the chord to it lies below the concave f.
            return {beta_i / ((b / a) * std::log(k + 1.0)), beta_i};
        }
        const double alpha_i = a * (1.0 - 1.0 / ((i + 1) / 2 + 1.0));
        // Positive crossing of f(t) = alpha_i t. Keep the lower bracket end,
        // where f >= alpha_i t, so the bound f >= min(alpha_i t, beta_i) is exact.
        double lo = b * (a - alpha_i) / (a * a);
        double hi = b / alpha_i;
        while (hi - lo > 1e-12 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            if (f.value(mid) - alpha_i * mid >= 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return {alpha_i, alpha_i * lo};
    }
    case FKind::tabulated:
        break;
    }
    throw std::invalid_argument("tabulated f profiles have no truncation family");
}

namespace {

Convolution build_convolution(const FunctionalParams& params, const Grid& grid) {
    if (params.kernel.dim() != grid.dim || params.medium.dim() != grid.dim) {
        throw std::invalid_argument("kernel, medium and grid dimensions differ");
    }
    if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (grid.h > 0.25 * params.epsilon * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "grid spacing h = " << grid.h << " exceeds epsilon/4 = " << 0.25 * params.epsilon;
        throw ResolutionError(msg.str());
    }
    return Convolution(grid.cell_shape(), make_stencil(params.kernel, params.epsilon, grid.h), params.policy);
}

}  // namespace

NonlocalFunctional::NonlocalFunctional(const FunctionalParams& params, const Grid& grid)
    : params_(params),
      grid_(grid),
      convolution_(build_convolution(params, grid)),
      coefficients_(params.medium.cell_coefficients(grid)) {}

std::vector<double> NonlocalFunctional::local_density(std::span<const double> u) const {
    std::vector<Tensor> g(grid_.cell_count());
    cell_gradients(grid_, u, 1.0 / grid_.h, g);
    const Medium& m = params_.medium;
    std::vector<double> w(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) w[c] = power_density(coefficients_[c], g[c], m.dim(), m.mode(), m.p());
    return w;
}

double NonlocalFunctional::value(std::span<const double> u) const {
    const std::vector<double> conv = convolution_.apply(local_density(u));
    const double eps = params_.epsilon;
    double sum = 0.0;
    for (double v : conv) sum += params_.f.value(eps * v);
    return grid_.cell_volume() * sum / eps;
}

double NonlocalFunctional::value_and_gradient(std::span<const double> u, std::span<double> gradient) const {
    const Medium& m = params_.medium;
    std::vector<Tensor> g(grid_.cell_count());
    cell_gradients(grid_, u, 1.0 / grid_.h, g);
    std::vector<double> w(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) w[c] = power_density(coefficients_[c], g[c], m.dim(), m.mode(), m.p());
    const std::vector<double> conv = convolution_.apply(w);

    const double eps = params_.epsilon;
    const double vol = grid_.cell_volume();
    double sum = 0.0;
    std::vector<double> outer(conv.size());
    for (std::size_t c = 0; c < conv.size(); ++c) {
        sum += params_.f.value(eps * conv[c]);
        // d/dconv of (vol/eps) f(eps conv) = vol f'(eps conv).
        outer[c] = vol * params_.f.slope(eps * conv[c]);
    }
    const std::vector<double> pulled = convolution_.apply_adjoint(outer);
    std::vector<Tensor> dual(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) {
        dual[c] = pulled[c] * power_density_derivative(coefficients_[c], g[c], m.dim(), m.mode(), m.p());
    }
    std::fill(gradient.begin(), gradient.end(), 0.0);
    cell_gradients_adjoint(grid_, dual, 1.0 / grid_.h, gradient);
    return vol * sum / eps;
}

double NonlocalFunctional::convolved_local_energy(std::span<const double> u) const {
    const std::vector<double> conv = convolution_.apply(local_density(u));
    double sum = 0.0;
    for (double v : conv) sum += v;
    return grid_.cell_volume() * sum;
}

double nonlocal_energy(const DisplacementField& u, const FunctionalParams& params) {
    return NonlocalFunctional(params, u.grid).value(u.values);
}

double local_energy(const DisplacementField& u, const Medium& medium) {
    const Grid& grid = u.grid;
    std::vector<Tensor> g(grid.cell_count());
    cell_gradients(grid, u.values, 1.0 / grid.h, g);
    double sum = 0.0;
    for (int j = 0; j < grid.cells_along(1); ++j) {
        for (int i = 0; i < grid.cells_along(0); ++i) sum += medium.density(grid.cell_center(i, j), g[grid.cell_index(i, j)]);
    }
    return grid.cell_volume() * sum;
}

double convolved_local_energy(const DisplacementField& u, const FunctionalParams& params) {
    return NonlocalFunctional(params, u.grid).convolved_local_energy(u.values);
}

PiecewiseCompetitor PiecewiseCompetitor::affine(int dim, const Box& domain, const Tensor& m) {
    PiecewiseCompetitor c;
    c.dim = dim;
    c.domain = domain;
    c.pieces.push_back({[](const Point&) { return true; }, [m](const Point&) { return m; }});
    return c;
}

double limit_surface_energy(const PiecewiseCompetitor& u, double beta, const SupportBody& s) {
    double total = 0.0;
    for (const JumpFacet& facet : u.jumps) {
        double measure = 1.0;
        if (u.dim > 1) {
            const Point d = facet.segment.b - facet.segment.a;
            measure = norm(d);
            if (std::abs(dot(d, facet.normal)) > 1e-9 * std::max(1.0, measure)) {
                throw std::invalid_argument("jump facet normal is not orthogonal to the facet");
            }
        }
        total += phi_rho(facet.normal, s) * measure;
    }
    return beta * total;
}

double limit_bulk_energy(const PiecewiseCompetitor& u, const Medium& medium, double alpha, int quadrature) {
    if (quadrature < 1) throw std::invalid_argument("quadrature needs at least one point per axis");
    const int ny = u.dim > 1 ? quadrature : 1;
    const double dx = u.domain.extent(0) / quadrature;
    const double dy = u.dim > 1 ? u.domain.extent(1) / quadrature : 1.0;
    double sum = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < quadrature; ++i) {
            const Point x{u.domain.lo[0] + (i + 0.5) * dx, u.dim > 1 ? u.domain.lo[1] + (j + 0.5) * dy : 0.0};
            const CompetitorPiece* owner = nullptr;
            for (const CompetitorPiece& piece : u.pieces) {
                if (!piece.contains(x)) continue;
                if (owner != nullptr) throw std::invalid_argument("competitor pieces overlap");
                owner = &piece;
            }
            if (owner == nullptr) throw std::invalid_argument("competitor pieces do not cover the domain");
            sum += medium.density(x, owner->gradient(x));
        }
    }
    return alpha * sum * dx * dy;
}

double limit_energy(const PiecewiseCompetitor& u, const Medium& medium, double alpha, double beta, const SupportBody& s,
                    int quadrature) {
    return limit_bulk_energy(u, medium, alpha, quadrature) + limit_surface_energy(u, beta, s);
}

}  // namespace gammalab
