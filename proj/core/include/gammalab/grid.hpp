#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gammalab/geometry.hpp"

namespace gammalab {

/// Extent of a cell-centered lattice, n in {1,2}. For n = 1 the second
/// extent is 1.
struct LatticeShape {
    int dim = 2;
    Index2 n{1, 1};

    std::size_t size() const { return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n[0]) + static_cast<std::size_t>(i);
    }
    bool inside(int i, int j) const { return i >= 0 && i < n[0] && j >= 0 && j < n[1]; }
};

/// Uniform grid on a box: `cells` cells of side h per axis, nodes at the
/// cell corners, field samples of e(u) at the cell centers.
struct Grid {
    int dim = 2;
    Index2 cells{1, 1};
    double h = 1.0;
    Point origin{0.0, 0.0};

    int cells_along(int axis) const { return axis < dim ? cells[axis] : 1; }
    int nodes_along(int axis) const { return axis < dim ? cells[axis] + 1 : 1; }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(cells_along(0)) * static_cast<std::size_t>(cells_along(1));
    }
    std::size_t node_count() const {
        return static_cast<std::size_t>(nodes_along(0)) * static_cast<std::size_t>(nodes_along(1));
    }
    std::size_t node_index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_along(0)) + static_cast<std::size_t>(i);
    }
    std::size_t cell_index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_along(0)) + static_cast<std::size_t>(i);
    }
    Point node_position(int i, int j) const {
        return {origin[0] + i * h, dim > 1 ? origin[1] + j * h : 0.0};
    }
    Point cell_center(int i, int j) const {
        return {origin[0] + (i + 0.5) * h, dim > 1 ? origin[1] + (j + 0.5) * h : 0.0};
    }
    double cell_volume() const { return dim == 1 ? h : h * h; }
    Box domain() const {
        Box b;
        b.lo = origin;
        b.hi = {origin[0] + cells[0] * h, dim > 1 ? origin[1] + cells[1] * h : 0.0};
        return b;
    }
    LatticeShape cell_shape() const { return {dim, {cells_along(0), cells_along(1)}}; }
};

/// Grid covering `domain` with spacing h. Throws GridMismatchError unless
/// every extent is an integer multiple of h (relative tolerance 1e-9).
Grid make_grid(int dim, const Box& domain, double h);

/// Vector field sampled at grid nodes, `dim` components per node
/// (node-major). Nodes with mask set carry Dirichlet data in `values`.
struct DisplacementField {
    Grid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    static DisplacementField zeros(const Grid& grid);
    /// u(x) = M x + c at every node.
    static DisplacementField affine(const Grid& grid, const Tensor& m, const Point& c = {0.0, 0.0});

    int components() const { return grid.dim; }
    double& at(std::size_t node, int comp) { return values[node * static_cast<std::size_t>(grid.dim) + static_cast<std::size_t>(comp)]; }
    double at(std::size_t node, int comp) const { return values[node * static_cast<std::size_t>(grid.dim) + static_cast<std::size_t>(comp)]; }
    bool pinned(std::size_t node) const { return !mask.empty() && mask[node] != 0; }

    /// Per-unknown flags (node mask repeated per component).
    std::vector<std::uint8_t> fixed_unknowns() const;
};

/// Mask every node within `layers` nodes of the boundary (layers = 1 pins
/// only boundary nodes; layers = 2 pins the outermost ring of cells).
void pin_boundary_layer(DisplacementField& u, int layers);

enum class GradientMode { symmetrized, full };

/// Forward-difference gradient per cell: component c, direction d uses the
/// difference along axis d starting at the cell's lower corner node.
/// `scale` multiplies the differences (1/h for physical units).
void cell_gradients(const Grid& grid, std::span<const double> values, double scale, std::span<Tensor> out);

/// Adjoint of cell_gradients: accumulates sum_c <dual_c, dG_c/du> into out.
void cell_gradients_adjoint(const Grid& grid, std::span<const Tensor> dual, double scale, std::span<double> out);

/// e(u) at cell centers; ∇u in full mode.
std::vector<Tensor> sym_grad(const DisplacementField& u, GradientMode mode = GradientMode::symmetrized);

/// Flat binary: header (magic, version, dim, cells, spacing, origin) then
/// node values and mask bytes. Little-endian doubles.
void write_field_binary(const std::filesystem::path& path, const DisplacementField& u);
DisplacementField read_field_binary(const std::filesystem::path& path);

/// CSV with header i,j,x,y,u0[,u1],pinned.
void write_field_csv(const std::filesystem::path& path, const DisplacementField& u);

}  // namespace gammalab
