#include "gammalab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/parallel.hpp"

namespace gammalab {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

SupportBody SupportBody::box(std::vector<double> half_widths) {
    if (half_widths.empty() || half_widths.size() > 2) throw std::invalid_argument("box support needs 1 or 2 half-widths");
    for (double w : half_widths) {
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("box half-widths must be positive and finite");
    }
    SupportBody s;
    s.dim_ = static_cast<int>(half_widths.size());
    s.shape_ = SupportShape::box;
    s.half_widths_ = std::move(half_widths);
    return s;
}

SupportBody SupportBody::ball(int dim, double radius) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("ball support dimension must be 1 or 2");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive and finite");
    SupportBody s;
    s.dim_ = dim;
    s.shape_ = SupportShape::ball;
    s.radius_ = radius;
    return s;
}

SupportBody SupportBody::polytope(int dim, const std::vector<Point>& vertices) {
    if (dim == 1) {
        double w = 0.0;
        for (const Point& v : vertices) w = std::max(w, std::abs(v[0]));
        return box({w});
    }
    if (dim != 2) throw std::invalid_argument("polytope support dimension must be 1 or 2");
    std::vector<Point> pts;
    for (const Point& v : vertices) {
        pts.push_back(v);
        pts.push_back({-v[0], -v[1]});
    }
    SupportBody s;
    s.dim_ = 2;
    s.shape_ = SupportShape::polytope;
    s.hull_ = convex_hull(std::move(pts));
    if (s.hull_.size() < 3) throw std::invalid_argument("polytope support must have non-empty interior");
    const std::size_t m = s.hull_.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point& a = s.hull_[i];
        const Point& b = s.hull_[(i + 1) % m];
        Point n{b[1] - a[1], a[0] - b[0]};
        const double len = norm(n);
        n = (1.0 / len) * n;
        const double offset = dot(n, a);
        if (!(offset > 0.0)) throw std::invalid_argument("polytope support must contain the origin in its interior");
        s.facet_normals_.push_back(n);
        s.facet_offsets_.push_back(offset);
    }
    return s;
}

double SupportBody::gauge(const Point& x) const {
    switch (shape_) {
    case SupportShape::box: {
        double g = 0.0;
        for (int a = 0; a < dim_; ++a) g = std::max(g, std::abs(x[a]) / half_widths_[a]);
        return g;
    }
    case SupportShape::ball:
        return (dim_ == 1 ? std::abs(x[0]) : norm(x)) / radius_;
    case SupportShape::polytope: {
        double g = 0.0;
        for (std::size_t f = 0; f < facet_normals_.size(); ++f) g = std::max(g, dot(facet_normals_[f], x) / facet_offsets_[f]);
        return g;
    }
    }
    return 0.0;
}

double SupportBody::support(const Point& v) const {
    switch (shape_) {
    case SupportShape::box: {
        double s = 0.0;
        for (int a = 0; a < dim_; ++a) s += std::abs(v[a]) * half_widths_[a];
        return s;
    }
    case SupportShape::ball:
        return radius_ * (dim_ == 1 ? std::abs(v[0]) : norm(v));
    case SupportShape::polytope: {
        double s = -std::numeric_limits<double>::infinity();
        for (const Point& y : hull_) s = std::max(s, dot(y, v));
        return s;
    }
    }
    return 0.0;
}

double SupportBody::volume() const {
    switch (shape_) {
    case SupportShape::box: {
        double v = 1.0;
        for (double w : half_widths_) v *= 2.0 * w;
        return v;
    }
    case SupportShape::ball:
        return dim_ == 1 ? 2.0 * radius_ : std::numbers::pi * radius_ * radius_;
    case SupportShape::polytope: {
        double area = 0.0;
        for (std::size_t i = 0; i < hull_.size(); ++i) {
            const Point& a = hull_[i];
            const Point& b = hull_[(i + 1) % hull_.size()];
            area += a[0] * b[1] - a[1] * b[0];
        }
        return 0.5 * area;
    }
    }
    return 0.0;
}

double SupportBody::circumradius() const {
    switch (shape_) {
    case SupportShape::box: {
        double s = 0.0;
        for (double w : half_widths_) s += w * w;
        return std::sqrt(s);
    }
    case SupportShape::ball:
        return radius_;
    case SupportShape::polytope: {
        double r = 0.0;
        for (const Point& y : hull_) r = std::max(r, norm(y));
        return r;
    }
    }
    return 0.0;
}

KernelSpec::KernelSpec(SupportBody support, ProfileKind profile, double exponent)
    : support_(std::move(support)), profile_(profile), exponent_(exponent) {
    // ∫_S (1 - |x|_S)^q dx = |S| n B(n, q+1) = |S| Γ(n+1) Γ(q+1) / Γ(n+q+1).
    const double n = support_.dim();
    const double q = profile_ == ProfileKind::uniform ? 0.0 : exponent_;
    const double radial = std::exp(std::lgamma(n + 1.0) + std::lgamma(q + 1.0) - std::lgamma(n + q + 1.0));
    normalization_ = 1.0 / (support_.volume() * radial);
}

KernelSpec KernelSpec::uniform(SupportBody support) {
    return KernelSpec(std::move(support), ProfileKind::uniform, 0.0);
}

KernelSpec KernelSpec::gauge_polynomial(SupportBody support, double exponent) {
    if (!(exponent >= 0.0) || !std::isfinite(exponent)) throw std::invalid_argument("profile exponent must be >= 0");
    return KernelSpec(std::move(support), ProfileKind::gauge_polynomial, exponent);
}

double KernelSpec::density(const Point& x) const {
    const double g = support_.gauge(x);
    if (g > 1.0) return 0.0;
    if (profile_ == ProfileKind::uniform || exponent_ == 0.0) return normalization_;
    return normalization_ * std::pow(1.0 - g, exponent_);
}

double gauge(const Point& x, const SupportBody& s) { return s.gauge(x); }

double phi_rho(const Point& nu, const SupportBody& s) {
    const double len = s.dim() == 1 ? std::abs(nu[0]) : norm(nu);
    if (len == 0.0) throw std::invalid_argument("phi_rho: normal must be non-zero");
    if (std::abs(len - 1.0) > 1e-12) throw std::invalid_argument("phi_rho: normal must be a unit vector");
    // S is symmetric, so sup |y·ν| = sup y·ν.
    return 2.0 * s.support(nu);
}

double mu_xi(const Point& xi, const SupportBody& s) { return 2.0 / s.gauge(xi); }

double phi_via_slicing(const Point& nu, const SupportBody& s, int n_directions) {
    if (n_directions < 4) throw std::invalid_argument("phi_via_slicing needs at least 4 directions");
    if (s.dim() == 1) return mu_xi({1.0, 0.0}, s) * std::abs(nu[0]);
    double best = 0.0;
    for (int k = 0; k < n_directions; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n_directions;
        const Point xi{std::cos(theta), std::sin(theta)};
        best = std::max(best, mu_xi(xi, s) * std::abs(dot(nu, xi)));
    }
    return best;
}

double gauge_distance(const Point& x, const Segment& seg, const SupportBody& s) {
    const Point d = seg.b - seg.a;
    auto at = [&](double t) { return s.gauge(x - (seg.a + t * d)); };
    if (s.dim() == 1 || dot(d, d) == 0.0) return at(0.0);
    // t -> |x - a - t d|_S is convex; ternary search to ~1e-12 in t.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 70; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (at(m1) <= at(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::min({at(0.5 * (lo + hi)), at(0.0), at(1.0)});
}

namespace {

// {t in [lo, hi] : g(t) < level} for convex g, as an interval (empty if lo > hi).
template <class G>
std::pair<double, double> sublevel_interval(const G& g, double lo, double hi, double level) {
    double a = lo;
    double b = hi;
    for (int it = 0; it < 80; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (g(m1) <= g(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    const double center = 0.5 * (a + b);
    if (!(g(center) < level)) return {1.0, 0.0};
    auto edge = [&](double inside, double outside) {
        if (g(outside) < level) return outside;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (inside + outside);
            (g(mid) < level ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    return {edge(center, lo), edge(center, hi)};
}

}  // namespace

double tube_volume(std::span<const Segment> interface, double h, const SupportBody& s, const Box& domain) {
    if (interface.empty()) throw std::invalid_argument("tube_volume: empty interface");
    if (!(h > 0.0)) throw std::invalid_argument("tube_volume: h must be positive");
    const int dim = s.dim();
    const double reach = h * s.circumradius();

    // Each segment's tube is convex, so every line meets it in an interval.
    auto measure_line = [&](auto&& distance, double lo, double hi) {
        std::vector<std::pair<double, double>> pieces;
        for (const Segment& seg : interface) {
            const auto iv = sublevel_interval([&](double t) { return distance(t, seg); }, lo, hi, h);
            if (iv.first < iv.second) pieces.push_back(iv);
        }
        std::sort(pieces.begin(), pieces.end());
        double total = 0.0;
        double covered = -std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : pieces) {
            const double from = std::max(a, covered);
            if (b > from) total += b - from;
            covered = std::max(covered, b);
        }
        return total;
    };

    if (dim == 1) {
        return measure_line([&](double t, const Segment& seg) { return gauge_distance({t, 0.0}, seg, s); },
                            domain.lo[0], domain.hi[0]);
    }

    Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point hi{-lo[0], -lo[1]};
    for (const Segment& seg : interface) {
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min({lo[a], seg.a[a], seg.b[a]});
            hi[a] = std::max({hi[a], seg.a[a], seg.b[a]});
        }
    }
    const double x0 = std::max(domain.lo[0], lo[0] - reach);
    const double x1 = std::min(domain.hi[0], hi[0] + reach);
    const double y0 = std::max(domain.lo[1], lo[1] - reach);
    const double y1 = std::min(domain.hi[1], hi[1] + reach);
    if (!(x1 > x0) || !(y1 > y0)) return 0.0;

    // Midpoint rule across columns of width <= h/16; exact intervals along each column.
    const int columns = static_cast<int>(std::ceil(16.0 * (x1 - x0) / h));
    const double step = (x1 - x0) / columns;
    std::vector<double> lengths(static_cast<std::size_t>(columns));
    parallel_for(lengths.size(), [&](std::size_t i) {
        const double x = x0 + (static_cast<double>(i) + 0.5) * step;
        lengths[i] = measure_line([&](double y, const Segment& seg) { return gauge_distance({x, y}, seg, s); }, y0, y1);
    });
    double total = 0.0;
    for (double l : lengths) total += l;
    return total * step;
}

MollifierStencil make_stencil(const KernelSpec& kernel, double epsilon, double h) {
    if (!(epsilon > 0.0) || !(h > 0.0)) throw std::invalid_argument("make_stencil: epsilon and h must be positive");
    const SupportBody& s = kernel.support();
    const int dim = s.dim();
    MollifierStencil st;
    st.dim = dim;
    st.epsilon = epsilon;
    st.h = h;
    const int reach = static_cast<int>(std::ceil(epsilon * s.circumradius() / h)) + 1;
    const int reach_y = dim > 1 ? reach : 0;
    double total = 0.0;
    for (int oy = -reach_y; oy <= reach_y; ++oy) {
        for (int ox = -reach; ox <= reach; ++ox) {
            const Point y{ox * h / epsilon, oy * h / epsilon};
            // Closed support: points on ∂(εS) are included.
            if (s.gauge(y) > 1.0 + 1e-12) continue;
            const double w = kernel.profile() == ProfileKind::uniform ? 1.0 : std::pow(std::max(0.0, 1.0 - s.gauge(y)), kernel.exponent());
            if (!(w > 0.0)) continue;
            st.offsets.push_back({ox, oy});
            st.weights.push_back(w);
            total += w;
        }
    }
    const std::size_t needed = dim == 1 ? 3 : 9;
    if (st.offsets.size() < needed) {
        std::ostringstream msg;
        msg << "kernel under-resolved: " << st.offsets.size() << " lattice offsets in epsilon*S (epsilon=" << epsilon
            << ", h=" << h << "), need at least " << needed;
        throw ResolutionError(msg.str());
    }
    for (double& w : st.weights) w /= total;
    return st;
}

namespace {

// out(c) += Σ_i w_i in(c - sign*o_i) over in-lattice samples.
void correlate_zero(const LatticeShape& shape, std::span<const double> in, const MollifierStencil& st, int sign,
                    std::span<double> out) {
    const int nx = shape.n[0];
    const int ny = shape.n[1];
    parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jr) {
        const int j = static_cast<int>(jr);
        double* row = out.data() + shape.index(0, j);
        for (std::size_t k = 0; k < st.offsets.size(); ++k) {
            const int ox = sign * st.offsets[k][0];
            const int oy = sign * st.offsets[k][1];
            const int js = j - oy;
            if (js < 0 || js >= ny) continue;
            const int i0 = std::max(0, ox);
            const int i1 = std::min(nx, nx + ox);
            const double w = st.weights[k];
            const double* src = in.data() + shape.index(0, js);
            for (int i = i0; i < i1; ++i) row[i] += w * src[i - ox];
        }
    });
}

}  // namespace

Convolution::Convolution(LatticeShape shape, MollifierStencil stencil, BoundaryPolicy policy)
    : shape_(shape), stencil_(std::move(stencil)), policy_(policy) {
    if (policy_ == BoundaryPolicy::restrict_renormalize) {
        std::vector<double> ones(shape_.size(), 1.0);
        mass_.assign(shape_.size(), 0.0);
        correlate_zero(shape_, ones, stencil_, 1, mass_);
    }
}

std::vector<double> Convolution::apply(std::span<const double> field) const {
    std::vector<double> out(shape_.size(), 0.0);
    switch (policy_) {
    case BoundaryPolicy::zero_extend:
        correlate_zero(shape_, field, stencil_, 1, out);
        break;
    case BoundaryPolicy::restrict_renormalize:
        correlate_zero(shape_, field, stencil_, 1, out);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] /= mass_[c];
        break;
    case BoundaryPolicy::clamp:
        parallel_for(static_cast<std::size_t>(shape_.n[1]), [&](std::size_t jr) {
            const int j = static_cast<int>(jr);
            for (int i = 0; i < shape_.n[0]; ++i) {
                double acc = 0.0;
                for (std::size_t k = 0; k < stencil_.offsets.size(); ++k) {
                    const int si = std::clamp(i - stencil_.offsets[k][0], 0, shape_.n[0] - 1);
                    const int sj = std::clamp(j - stencil_.offsets[k][1], 0, shape_.n[1] - 1);
                    acc += stencil_.weights[k] * field[shape_.index(si, sj)];
                }
                out[shape_.index(i, j)] = acc;
            }
        });
        break;
    }
    return out;
}

std::vector<double> Convolution::apply_adjoint(std::span<const double> field) const {
    std::vector<double> out(shape_.size(), 0.0);
    switch (policy_) {
    case BoundaryPolicy::zero_extend:
        correlate_zero(shape_, field, stencil_, -1, out);
        break;
    case BoundaryPolicy::restrict_renormalize: {
        std::vector<double> scaled(field.begin(), field.end());
        for (std::size_t c = 0; c < scaled.size(); ++c) scaled[c] /= mass_[c];
        correlate_zero(shape_, scaled, stencil_, -1, out);
        break;
    }
    case BoundaryPolicy::clamp:
        // Scatter form; sequential because targets collide at the edges.
        for (int j = 0; j < shape_.n[1]; ++j) {
            for (int i = 0; i < shape_.n[0]; ++i) {
                const double v = field[shape_.index(i, j)];
                for (std::size_t k = 0; k < stencil_.offsets.size(); ++k) {
                    const int si = std::clamp(i - stencil_.offsets[k][0], 0, shape_.n[0] - 1);
                    const int sj = std::clamp(j - stencil_.offsets[k][1], 0, shape_.n[1] - 1);
                    out[shape_.index(si, sj)] += stencil_.weights[k] * v;
                }
            }
        }
        break;
    }
    return out;
}

std::vector<double> convolve(const LatticeShape& shape, std::span<const double> field, const MollifierStencil& st,
                             BoundaryPolicy policy) {
    return Convolution(shape, st, policy).apply(field);
}

std::vector<double> convolve_adjoint(const LatticeShape& shape, std::span<const double> field,
                                     const MollifierStencil& st, BoundaryPolicy policy) {
    return Convolution(shape, st, policy).apply_adjoint(field);
}

}  // namespace gammalab
