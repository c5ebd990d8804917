#include "gammalab/cell.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/parallel.hpp"

namespace gammalab {

namespace {

void require_strictly_decreasing(std::span<const double> v, const char* what) {
    if (v.size() < 3) throw std::invalid_argument(std::string(what) + " needs at least 3 values");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1]) || !(v[i] > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive and strictly decreasing");
    }
}

int cells_for(double side, double structure, const CellStudyOptions& options) {
    int n = options.min_cells_per_side;
    if (structure > 0.0) n = std::max(n, static_cast<int>(std::ceil(options.cells_per_structure * side / structure - 1e-9)));
    return n;
}

Box to_box(const IntBox& b, int dim) {
    Box out;
    out.lo = {static_cast<double>(b.lo[0]), dim > 1 ? static_cast<double>(b.lo[1]) : 0.0};
    out.hi = {static_cast<double>(b.hi[0]), dim > 1 ? static_cast<double>(b.hi[1]) : 0.0};
    return out;
}

}  // namespace

CellFormulaEstimate estimate_W_prime_second(const Point& x, const Tensor& m, const Medium& medium,
                                            std::span<const double> deltas, std::span<const double> radii,
                                            const CellStudyOptions& options) {
    require_strictly_decreasing(deltas, "delta list");
    require_strictly_decreasing(radii, "r list");
    if (radii.back() / deltas.front() < 8.0 - 1e-12) {
        throw std::invalid_argument("scale separation min(r)/max(delta) must be at least 8");
    }

    CellFormulaEstimate out;
    out.table.resize(radii.size() * deltas.size());
    parallel_for(out.table.size(), [&](std::size_t idx) {
        const double r = radii[idx / deltas.size()];
        const double delta = deltas[idx % deltas.size()];
        const Medium scaled = medium.rescaled(delta);
        const int n = cells_for(r, scaled.structure_length(), options);
        const CellValue v = minimize_cell(CellProblem::cube(m, x, r, scaled, n), options.solve);
        out.table[idx] = {r, delta, v.value, v.converged, v.iterations, n};
    });

    // Inner liminf / limsup over k: min / max over the deepest half of the δ-list.
    const std::size_t k = deltas.size();
    const std::size_t first = k / 2;
    const std::size_t row = (radii.size() - 1) * k;
    out.w_prime = out.table[row + first].value;
    out.w_second = out.w_prime;
    for (std::size_t j = first; j < k; ++j) {
        out.w_prime = std::min(out.w_prime, out.table[row + j].value);
        out.w_second = std::max(out.w_second, out.table[row + j].value);
    }
    out.spread = out.w_second > 0.0 ? (out.w_second - out.w_prime) / out.w_second : 0.0;
    out.flagged = out.spread > 0.05;
    return out;
}

HomogenizationEstimate homogenize_det(const Medium& medium, const Tensor& m, std::span<const double> t_list,
                                      const Point& x, const CellStudyOptions& options) {
    if (t_list.empty()) throw std::invalid_argument("t list is empty");
    for (std::size_t i = 1; i < t_list.size(); ++i) {
        if (!(t_list[i] > t_list[i - 1])) throw std::invalid_argument("t list must be strictly increasing");
    }
    const double structure = medium.structure_length();
    if (structure > 0.0 && t_list.front() / structure < 4.0 - 1e-12) {
        throw std::invalid_argument("smallest cube must span at least 4 periods per side");
    }

    HomogenizationEstimate out;
    out.t.assign(t_list.begin(), t_list.end());
    out.values.resize(t_list.size());
    out.converged.resize(t_list.size());
    out.iterations.resize(t_list.size());
    std::vector<CellValue> solved(t_list.size());
    parallel_for(t_list.size(), [&](std::size_t i) {
        const double t = t_list[i];
        const int n = cells_for(t, structure, options);
        solved[i] = minimize_cell(CellProblem::cube(m, t * x, t, medium, n), options.solve);
    });
    for (std::size_t i = 0; i < solved.size(); ++i) {
        out.values[i] = solved[i].value;
        out.converged[i] = solved[i].converged;
        out.iterations[i] = solved[i].iterations;
    }
    out.estimate = out.values.back();
    out.error_bar = out.values.size() > 1 ? std::abs(out.values.back() - out.values[out.values.size() - 2]) : 0.0;
    return out;
}

RescalingCheck rescaling_identity_check(const Medium& medium, const Tensor& m, double r, double delta, const Point& x,
                                        double h, const SolveOptions& options) {
    if (!(delta > 0.0) || !(r > 0.0) || !(h > 0.0)) throw std::invalid_argument("r, delta and h must be positive");
    const int dim = medium.dim();
    const Box left_box = cube(x, r, dim);
    const Box right_box = cube({x[0] / delta, x[1] / delta}, r / delta, dim);
    const Grid left_grid = make_grid(dim, left_box, h);
    const Grid right_grid = make_grid(dim, right_box, h / delta);
    if (left_grid.cells != right_grid.cells) {
        throw GridMismatchError("rescaled grids are not commensurate under y = delta * y_hat");
    }

    const CellValue scaled = minimize_cell(CellProblem{m, left_box, medium.rescaled(delta), h}, options);
    const CellValue unscaled = minimize_cell(CellProblem{m, right_box, medium, h / delta}, options);

    RescalingCheck out;
    out.scaled = scaled.energy;
    out.unscaled = std::pow(delta, dim) * unscaled.energy;
    const double denom = std::max(std::abs(out.scaled), std::abs(out.unscaled));
    out.residual = denom > 0.0 ? std::abs(out.scaled - out.unscaled) / denom : 0.0;
    out.converged = scaled.converged && unscaled.converged;
    return out;
}

double laminate_1d_oracle(double a1, double a2, double theta, double p, double slope) {
    const double q = -1.0 / (p - 1.0);
    const double mean = theta * std::pow(a1, q) + (1.0 - theta) * std::pow(a2, q);
    return std::pow(mean, -(p - 1.0)) * std::pow(std::abs(slope), p);
}

SubadditivityReport subadditive_properties_check(const RandomMedium& medium, const Tensor& m, const IntBox& domain,
                                                 std::span<const std::vector<IntBox>> partitions,
                                                 std::span<const Index2> shifts, double h, const SolveOptions& options) {
    const int dim = medium.spec().dim;
    const Medium base(medium);
    const double strain = strain_norm(m, dim, medium.spec().mode);
    SubadditivityReport report;
    report.bound = medium.spec().c2 * (std::pow(strain, medium.spec().p) + 1.0);

    auto volume = [dim](const IntBox& b) {
        const Index2 e = b.extent();
        return dim > 1 ? static_cast<double>(e[0]) * e[1] : static_cast<double>(e[0]);
    };
    auto check_bound = [&](const std::string& what, double energy, double vol) {
        if (energy < 0.0 || energy > report.bound * vol * (1.0 + 1e-9)) {
            report.bounded = false;
            std::ostringstream msg;
            msg << "boundedness violated on " << what << ": mu = " << energy << ", bound = " << report.bound * vol;
            report.violations.push_back(msg.str());
        }
    };
    auto solve = [&](const Medium& med, const IntBox& box) {
        CellValue v = minimize_cell(CellProblem{m, to_box(box, dim), med, h}, options);
        if (!v.converged) report.all_converged = false;
        return v;
    };

    const CellValue whole = solve(base, domain);
    report.whole = whole.energy;
    check_bound("A", whole.energy, volume(domain));

    for (std::size_t p = 0; p < partitions.size(); ++p) {
        const std::vector<IntBox>& parts = partitions[p];
        double covered = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!domain.contains(parts[i])) throw std::invalid_argument("partition piece leaves the domain");
            covered += volume(parts[i]);
            for (std::size_t j = 0; j < i; ++j) {
                bool disjoint = false;
                for (int a = 0; a < dim; ++a) {
                    disjoint = disjoint || parts[i].hi[a] <= parts[j].lo[a] || parts[j].hi[a] <= parts[i].lo[a];
                }
                if (!disjoint) throw std::invalid_argument("partition pieces overlap");
            }
        }
        if (covered != volume(domain)) throw std::invalid_argument("partition does not cover the domain");

        PartitionCheck pc;
        pc.whole = whole.energy;
        for (const IntBox& part : parts) {
            const CellValue v = solve(base, part);
            pc.parts_sum += v.energy;
            check_bound("a partition piece", v.energy, volume(part));

            // Cells of the pinned ring that sit on a face shared with another piece.
            const Grid& g = v.field.grid;
            std::vector<Tensor> grads(g.cell_count());
            cell_gradients(g, v.field.values, 1.0 / g.h, grads);
            for (int j = 0; j < g.cells_along(1); ++j) {
                for (int i = 0; i < g.cells_along(0); ++i) {
                    bool internal = (i == 0 && part.lo[0] > domain.lo[0]) || (i == g.cells[0] - 1 && part.hi[0] < domain.hi[0]);
                    if (dim > 1) {
                        internal = internal || (j == 0 && part.lo[1] > domain.lo[1]) ||
                                   (j == g.cells[1] - 1 && part.hi[1] < domain.hi[1]);
                    }
                    if (internal) pc.slack += g.cell_volume() * base.density(g.cell_center(i, j), grads[g.cell_index(i, j)]);
                }
            }
        }
        pc.slack_ratio = pc.parts_sum > 0.0 ? pc.slack / pc.parts_sum : 0.0;
        pc.gap = pc.parts_sum - pc.whole;
        pc.holds = pc.whole <= pc.parts_sum + pc.slack + 1e-12 * std::abs(pc.parts_sum);
        if (!pc.holds) {
            std::ostringstream msg;
            msg << "subadditivity violated for partition " << p << ": mu(A) = " << pc.whole << " > " << pc.parts_sum
                << " + " << pc.slack;
            report.violations.push_back(msg.str());
        }
        report.partitions.push_back(pc);
    }

    for (const Index2& z : shifts) {
        IntBox moved = domain;
        for (int a = 0; a < dim; ++a) {
            moved.lo[a] += z[a];
            moved.hi[a] += z[a];
        }
        CovarianceCheck cc;
        cc.z = z;
        const double vol = volume(domain);
        const CellValue shifted = solve(Medium(medium.shift(z)), domain);
        const CellValue translated = solve(base, moved);
        cc.shifted = shifted.energy / vol;
        cc.translated = translated.energy / vol;
        cc.difference = std::abs(cc.shifted - cc.translated);
        check_bound("a shifted box", shifted.energy, vol);
        check_bound("a translated box", translated.energy, vol);
        if (cc.difference > 1e-10) {
            std::ostringstream msg;
            msg << "covariance violated for z = (" << z[0] << "," << z[1] << "): difference " << cc.difference;
            report.violations.push_back(msg.str());
        }
        report.covariance.push_back(cc);
    }
    return report;
}

}  // namespace gammalab
