#pragma once

#include <array>
#include <cmath>

namespace gammalab {

/// Point or vector in R^n, n in {1,2}. Unused trailing coordinates are zero.
using Point = std::array<double, 2>;

/// Integer lattice index / offset.
using Index2 = std::array<int, 2>;

/// 2x2 matrix, row-major. `xy` is d(u_x)/dy for a gradient.
/// In one dimension only `xx` is meaningful.
struct Tensor {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;

    friend Tensor operator+(const Tensor& a, const Tensor& b) {
        return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
    }
    friend Tensor operator-(const Tensor& a, const Tensor& b) {
        return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy};
    }
    friend Tensor operator*(double s, const Tensor& a) {
        return {s * a.xx, s * a.xy, s * a.yx, s * a.yy};
    }
    friend bool operator==(const Tensor&, const Tensor&) = default;
};

inline Tensor transpose(const Tensor& m) { return {m.xx, m.yx, m.xy, m.yy}; }

inline Tensor sym(const Tensor& m) {
    const double off = 0.5 * (m.xy + m.yx);
    return {m.xx, off, off, m.yy};
}

inline double frobenius(const Tensor& m) {
    return std::sqrt(m.xx * m.xx + m.xy * m.xy + m.yx * m.yx + m.yy * m.yy);
}

/// Apply M to x (dimension-agnostic; unused entries are zero).
inline Point mul(const Tensor& m, const Point& x) {
    return {m.xx * x[0] + m.xy * x[1], m.yx * x[0] + m.yy * x[1]};
}

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

/// Axis-aligned box [lo, hi) in R^n.
struct Box {
    Point lo{0.0, 0.0};
    Point hi{1.0, 1.0};

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume(int dim) const { return dim == 1 ? extent(0) : extent(0) * extent(1); }
    bool contains(const Point& x, int dim) const {
        for (int a = 0; a < dim; ++a) {
            if (x[a] < lo[a] || x[a] >= hi[a]) return false;
        }
        return true;
    }
};

/// Cube Q_r(x) = x + [-r/2, r/2)^n.
inline Box cube(const Point& center, double side, int dim) {
    Box b;
    for (int a = 0; a < 2; ++a) {
        const double half = a < dim ? 0.5 * side : 0.0;
        b.lo[a] = center[a] - half;
        b.hi[a] = center[a] + half;
    }
    return b;
}

}  // namespace gammalab
