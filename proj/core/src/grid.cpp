#include "gammalab/grid.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gammalab/errors.hpp"

namespace gammalab {

Grid make_grid(int dim, const Box& domain, double h) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    Grid g;
    g.dim = dim;
    g.h = h;
    g.origin = domain.lo;
    if (dim == 1) g.origin[1] = 0.0;
    for (int a = 0; a < 2; ++a) {
        if (a >= dim) {
            g.cells[a] = 1;
            continue;
        }
        const double ratio = domain.extent(a) / h;
        const double rounded = std::round(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
            std::ostringstream msg;
            msg << "extent " << domain.extent(a) << " along axis " << a << " is not a multiple of h = " << h;
            throw GridMismatchError(msg.str());
        }
        g.cells[a] = static_cast<int>(rounded);
    }
    return g;
}

DisplacementField DisplacementField::zeros(const Grid& grid) {
    DisplacementField u;
    u.grid = grid;
    u.values.assign(grid.node_count() * static_cast<std::size_t>(grid.dim), 0.0);
    return u;
}

DisplacementField DisplacementField::affine(const Grid& grid, const Tensor& m, const Point& c) {
    DisplacementField u = zeros(grid);
    for (int j = 0; j < grid.nodes_along(1); ++j) {
        for (int i = 0; i < grid.nodes_along(0); ++i) {
            const std::size_t n = grid.node_index(i, j);
            const Point y = mul(m, grid.node_position(i, j));
            for (int comp = 0; comp < grid.dim; ++comp) u.at(n, comp) = y[comp] + c[comp];
        }
    }
    return u;
}

std::vector<std::uint8_t> DisplacementField::fixed_unknowns() const {
    std::vector<std::uint8_t> fixed(values.size(), 0);
    if (mask.empty()) return fixed;
    for (std::size_t n = 0; n < mask.size(); ++n) {
        for (int comp = 0; comp < grid.dim; ++comp) fixed[n * static_cast<std::size_t>(grid.dim) + static_cast<std::size_t>(comp)] = mask[n];
    }
    return fixed;
}

void pin_boundary_layer(DisplacementField& u, int layers) {
    const Grid& g = u.grid;
    u.mask.assign(g.node_count(), 0);
    for (int j = 0; j < g.nodes_along(1); ++j) {
        for (int i = 0; i < g.nodes_along(0); ++i) {
            bool near = i < layers || i > g.cells[0] - layers;
            if (g.dim > 1) near = near || j < layers || j > g.cells[1] - layers;
            if (near) u.mask[g.node_index(i, j)] = 1;
        }
    }
}

void cell_gradients(const Grid& grid, std::span<const double> values, double scale, std::span<Tensor> out) {
    const int nx = grid.cells_along(0);
    const int ny = grid.cells_along(1);
    if (grid.dim == 1) {
        for (int i = 0; i < nx; ++i) {
            out[static_cast<std::size_t>(i)] = Tensor{scale * (values[static_cast<std::size_t>(i) + 1] - values[static_cast<std::size_t>(i)]), 0.0, 0.0, 0.0};
        }
        return;
    }
    const std::size_t stride = static_cast<std::size_t>(grid.nodes_along(0));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t n0 = grid.node_index(i, j);
            const std::size_t nx1 = n0 + 1;
            const std::size_t ny1 = n0 + stride;
            Tensor& gr = out[grid.cell_index(i, j)];
            gr.xx = scale * (values[2 * nx1] - values[2 * n0]);
            gr.yx = scale * (values[2 * nx1 + 1] - values[2 * n0 + 1]);
            gr.xy = scale * (values[2 * ny1] - values[2 * n0]);
            gr.yy = scale * (values[2 * ny1 + 1] - values[2 * n0 + 1]);
        }
    }
}

void cell_gradients_adjoint(const Grid& grid, std::span<const Tensor> dual, double scale, std::span<double> out) {
    const int nx = grid.cells_along(0);
    const int ny = grid.cells_along(1);
    if (grid.dim == 1) {
        for (int i = 0; i < nx; ++i) {
            const double d = scale * dual[static_cast<std::size_t>(i)].xx;
            out[static_cast<std::size_t>(i) + 1] += d;
            out[static_cast<std::size_t>(i)] -= d;
        }
        return;
    }
    const std::size_t stride = static_cast<std::size_t>(grid.nodes_along(0));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t n0 = grid.node_index(i, j);
            const std::size_t nx1 = n0 + 1;
            const std::size_t ny1 = n0 + stride;
            const Tensor& d = dual[grid.cell_index(i, j)];
            out[2 * nx1] += scale * d.xx;
            out[2 * n0] -= scale * (d.xx + d.xy);
            out[2 * ny1] += scale * d.xy;
            out[2 * nx1 + 1] += scale * d.yx;
            out[2 * n0 + 1] -= scale * (d.yx + d.yy);
            out[2 * ny1 + 1] += scale * d.yy;
        }
    }
}

std::vector<Tensor> sym_grad(const DisplacementField& u, GradientMode mode) {
    std::vector<Tensor> out(u.grid.cell_count());
    cell_gradients(u.grid, u.values, 1.0 / u.grid.h, out);
    if (mode == GradientMode::symmetrized && u.grid.dim > 1) {
        for (Tensor& t : out) t = sym(t);
    }
    return out;
}

namespace {

constexpr std::array<char, 4> kFieldMagic{'G', 'L', 'D', 'F'};
constexpr std::uint32_t kFieldVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("truncated field file");
    return v;
}

}  // namespace

void write_field_binary(const std::filesystem::path& path, const DisplacementField& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(kFieldMagic.data(), kFieldMagic.size());
    put(os, kFieldVersion);
    put(os, static_cast<std::uint32_t>(u.grid.dim));
    put(os, static_cast<std::int32_t>(u.grid.cells[0]));
    put(os, static_cast<std::int32_t>(u.grid.cells[1]));
    put(os, u.grid.h);
    put(os, u.grid.origin[0]);
    put(os, u.grid.origin[1]);
    put(os, static_cast<std::uint8_t>(u.mask.empty() ? 0 : 1));
    os.write(reinterpret_cast<const char*>(u.values.data()), static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!u.mask.empty()) os.write(reinterpret_cast<const char*>(u.mask.data()), static_cast<std::streamsize>(u.mask.size()));
    if (!os) throw Error("failed writing " + path.string());
}

DisplacementField read_field_binary(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kFieldMagic) throw Error(path.string() + " is not a field file");
    if (get<std::uint32_t>(is) != kFieldVersion) throw Error("unsupported field file version");
    Grid g;
    g.dim = static_cast<int>(get<std::uint32_t>(is));
    g.cells[0] = get<std::int32_t>(is);
    g.cells[1] = get<std::int32_t>(is);
    g.h = get<double>(is);
    g.origin[0] = get<double>(is);
    g.origin[1] = get<double>(is);
    const bool has_mask = get<std::uint8_t>(is) != 0;
    if ((g.dim != 1 && g.dim != 2) || g.cells[0] < 1 || g.cells[1] < 1) throw Error("corrupt field header");
    DisplacementField u = DisplacementField::zeros(g);
    is.read(reinterpret_cast<char*>(u.values.data()), static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (has_mask) {
        u.mask.resize(g.node_count());
        is.read(reinterpret_cast<char*>(u.mask.data()), static_cast<std::streamsize>(u.mask.size()));
    }
    if (!is) throw Error("truncated field file");
    return u;
}

void write_field_csv(const std::filesystem::path& path, const DisplacementField& u) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.precision(17);
    os << "i,j,x,y,u0" << (u.grid.dim > 1 ? ",u1" : "") << ",pinned\n";
    for (int j = 0; j < u.grid.nodes_along(1); ++j) {
        for (int i = 0; i < u.grid.nodes_along(0); ++i) {
            const std::size_t n = u.grid.node_index(i, j);
            const Point x = u.grid.node_position(i, j);
            os << i << ',' << j << ',' << x[0] << ',' << x[1];
            for (int c = 0; c < u.grid.dim; ++c) os << ',' << u.at(n, c);
            os << ',' << (u.pinned(n) ? 1 : 0) << '\n';
        }
    }
}

}  // namespace gammalab
