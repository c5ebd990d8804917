#pragma once

#include "gammalab/geometry.hpp"
#include "gammalab/grid.hpp"
#include "gammalab/media.hpp"

namespace gammalab {

/// inf { ∫_A W(x, e(v)) : v = u_M near ∂A } on a box A, discretized with
/// spacing h. "Near ∂A" is the outermost ring of grid cells.
struct CellProblem {
    Tensor m;
    Box domain;
    Medium medium;
    double h;

    /// Q_side(center) resolved by cells_per_side cells per axis.
    static CellProblem cube(const Tensor& m, const Point& center, double side, Medium medium, int cells_per_side);
};

struct CellValue {
    double value = 0.0;   ///< m / |A|
    double energy = 0.0;  ///< m
    bool converged = false;
    int iterations = 0;
    DisplacementField field;  ///< minimizer v (Dirichlet ring masked)
};

}  // namespace gammalab
