#pragma once

// Reference computations written independently of the library code paths:
// brute-force loops, closed forms and sampling.

#include <cmath>
#include <numbers>
#include <vector>

#include "gammalab/geometry.hpp"
#include "gammalab/grid.hpp"
#include "gammalab/kernel.hpp"

namespace oracle {

using gammalab::Point;
using gammalab::Tensor;

// sup_{y ∈ S} y·ν by scanning a dense boundary parametrization.
inline double support_box(const std::vector<double>& hw, const Point& nu) {
    double s = 0.0;
    for (int sx = -1; sx <= 1; sx += 2) {
        for (int sy = -1; sy <= 1; sy += 2) s = std::max(s, sx * hw[0] * nu[0] + sy * hw[1] * nu[1]);
    }
    return s;
}

inline double support_ball(double r, const Point& nu) { return r * std::hypot(nu[0], nu[1]); }

// Measure of {d_S(x, [a,b]) < h} for a flat segment whose tube stays inside
// the domain: straight band plus the two half-caps forming one copy of hS.
inline double tube_measure(double length, double phi, double h, double support_volume) {
    return length * h * phi + h * h * support_volume;
}

// (Σ_k w_k f(x - o_k) over in-lattice samples) / (Σ in-lattice w_k).
inline std::vector<double> restricted_convolution(const gammalab::LatticeShape& shape, const std::vector<double>& f,
                                                  const gammalab::MollifierStencil& st) {
    std::vector<double> out(f.size(), 0.0);
    for (int j = 0; j < shape.n[1]; ++j) {
        for (int i = 0; i < shape.n[0]; ++i) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t k = 0; k < st.offsets.size(); ++k) {
                const int ii = i - st.offsets[k][0];
                const int jj = j - st.offsets[k][1];
                if (ii < 0 || jj < 0 || ii >= shape.n[0] || jj >= shape.n[1]) continue;
                num += st.weights[k] * f[static_cast<std::size_t>(jj) * shape.n[0] + ii];
                den += st.weights[k];
            }
            out[static_cast<std::size_t>(j) * shape.n[0] + i] = num / den;
        }
    }
    return out;
}

// |M + M^T|^p (symmetrized 2D), |M|^p (full 2D), |m|^p (1D).
inline double power(const Tensor& m, int dim, bool symmetrized, double p) {
    if (dim == 1) return std::pow(std::abs(m.xx), p);
    if (!symmetrized) return std::pow(std::sqrt(m.xx * m.xx + m.xy * m.xy + m.yx * m.yx + m.yy * m.yy), p);
    const double a = 2 * m.xx;
    const double b = m.xy + m.yx;
    const double d = 2 * m.yy;
    return std::pow(std::sqrt(a * a + 2 * b * b + d * d), p);
}

// (θ a1^{-1/(p-1)} + (1-θ) a2^{-1/(p-1)})^{-(p-1)} |m|^p.
inline double harmonic(double a1, double a2, double theta, double p, double m) {
    const double e = -1.0 / (p - 1.0);
    return std::pow(theta * std::pow(a1, e) + (1 - theta) * std::pow(a2, e), -(p - 1.0)) * std::pow(std::abs(m), p);
}

// Exact discrete 1D cell value on n cells with the two end cells pinned to
// slope m: the interior flux is constant, so slopes are c / a^{1/(p-1)}.
inline double discrete_1d_cell(const std::vector<double>& a, double p, double m) {
    const std::size_t n = a.size();
    const double q = 1.0 / (p - 1.0);
    double inv = 0.0;
    for (std::size_t c = 1; c + 1 < n; ++c) inv += std::pow(a[c], -q);
    // Interior displacement drop (n - 2) m shared as s_c = c0 a_c^{-q}.
    const double c0 = static_cast<double>(n - 2) * m / inv;
    double e = std::pow(std::abs(m), p) * (a.front() + a.back());
    for (std::size_t c = 1; c + 1 < n; ++c) e += a[c] * std::pow(std::abs(c0 * std::pow(a[c], -q)), p);
    return e / static_cast<double>(n);
}

// Linear-space sample of unit directions.
inline Point direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace oracle
