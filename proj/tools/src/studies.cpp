#include "gammalab/tools/studies.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "gammalab/cell.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/errors.hpp"
#include "gammalab/kernel.hpp"
#include "gammalab/media.hpp"
#include "gammalab/onedim.hpp"
#include "gammalab/solve.hpp"
#include "gammalab/stoch.hpp"
#include "gammalab/tools/config.hpp"

namespace gammalab::tools {

namespace {

using nlohmann::json;

TableCell cell(double v) { return v; }
TableCell cell(int v) { return static_cast<std::int64_t>(v); }
TableCell cell(bool v) { return static_cast<std::int64_t>(v ? 1 : 0); }
TableCell cell(std::string v) { return v; }

json matrix_json(const Tensor& m, int dim) {
    if (dim == 1) return json::array({json::array({m.xx})});
    return json::array({json::array({m.xx, m.xy}), json::array({m.yx, m.yy})});
}

// Rethrows std::invalid_argument from core preconditions as a config error.
template <class F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field '" + path + "': " + e.what());
    }
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::optional<double> harmonic_oracle(const MediumSpec& spec, const Tensor& m) {
    if (spec.dim != 1) return std::nullopt;
    if (const auto* f = std::get_if<LaminateField>(&spec.field)) return laminate_1d_oracle(f->a1, f->a2, f->theta, spec.p, m.xx);
    if (const auto* f = std::get_if<RandomCheckerboardField>(&spec.field)) {
        return laminate_1d_oracle(f->a1, f->a2, f->theta, spec.p, m.xx);
    }
    if (const auto* f = std::get_if<ConstantField>(&spec.field)) return f->a * std::pow(std::abs(m.xx), spec.p);
    return std::nullopt;
}

StudyOutput study_phi(const ConfigNode& c) {
    const int dim = c.integer("dim", 2);
    if (dim != 1 && dim != 2) throw ConfigError("field '" + c.path_of("dim") + "' must be 1 or 2");
    const SupportBody s = parse_support(c.child("support"), dim);
    const int n = c.integer("directions", 360);
    const int slicing = c.integer("slicing_directions", 720);
    if (n < 1) throw ConfigError("field '" + c.path_of("directions") + "' must be positive");
    if (slicing < 4) throw ConfigError("field '" + c.path_of("slicing_directions") + "' must be at least 4");

    StudyTable t{"phi", {}, std::nullopt};
    t.table.columns = {"k", "angle", "nu_x", "nu_y", "phi_rho", "phi_slicing", "rel_gap"};
    double max_gap = 0.0;
    double lo = INFINITY;
    double hi = 0.0;
    const int count = dim == 1 ? 2 : n;
    for (int k = 0; k < count; ++k) {
        const double angle = dim == 1 ? k * std::numbers::pi : 2.0 * std::numbers::pi * k / n;
        const Point nu = dim == 1 ? Point{k == 0 ? 1.0 : -1.0, 0.0} : Point{std::cos(angle), std::sin(angle)};
        const double phi = phi_rho(nu, s);
        const double sl = phi_via_slicing(nu, s, slicing);
        const double gap = std::abs(phi - sl) / phi;
        max_gap = std::max(max_gap, gap);
        lo = std::min(lo, phi);
        hi = std::max(hi, phi);
        t.table.add_row({cell(k), cell(angle), cell(nu[0]), cell(nu[1]), cell(phi), cell(sl), cell(gap)});
    }
    PlotSpec plot;
    plot.kind = PlotKind::scatter;
    plot.title = "anisotropic surface density";
    plot.x_column = "angle";
    plot.x_label = "angle of nu";
    plot.y_label = "phi";
    plot.series = {{"phi_slicing", "sup over slices", ""}};
    const auto angles = t.table.numeric("angle");
    const auto phis = t.table.numeric("phi_rho");
    for (std::size_t i = 0; i < angles.size(); ++i) plot.overlay.emplace_back(angles[i], phis[i]);
    plot.overlay_label = "2 h_S(nu)";
    t.plot = plot;

    StudyOutput out;
    out.summary = {{"max_rel_gap", max_gap}, {"phi_min", lo}, {"phi_max", hi}, {"support_volume", s.volume()}};
    out.tables.push_back(std::move(t));
    return out;
}

StudyOutput study_tube(const ConfigNode& c) {
    const int dim = c.integer("dim", 2);
    if (dim != 2) throw ConfigError("field '" + c.path_of("dim") + "' must be 2 for the tube study");
    const SupportBody s = parse_support(c.child("support"), dim);
    const ConfigNode iface = c.child("interface");
    const Segment seg{parse_point(iface, "a", 2), parse_point(iface, "b", 2)};
    if (!iface.has("a") || !iface.has("b")) throw ConfigError("field '" + iface.path() + "' needs endpoints a and b");
    const Point d = seg.b - seg.a;
    const double length = norm(d);
    if (!(length > 0.0)) throw ConfigError("field '" + iface.path() + "' must have distinct endpoints");
    const Point nu{-d[1] / length, d[0] / length};
    const std::vector<double> hs = c.numbers("h_list");
    double hmax = 0.0;
    for (double h : hs) {
        if (!(h > 0.0)) throw ConfigError("field '" + c.path_of("h_list") + "' entries must be positive");
        hmax = std::max(hmax, h);
    }
    Box domain;
    if (c.has("domain")) {
        const ConfigNode dn = c.child("domain");
        domain.lo = parse_point(dn, "lo", 2);
        domain.hi = parse_point(dn, "hi", 2);
    } else {
        const double pad = 2.0 * hmax * s.circumradius();
        domain.lo = {std::min(seg.a[0], seg.b[0]) - pad, std::min(seg.a[1], seg.b[1]) - pad};
        domain.hi = {std::max(seg.a[0], seg.b[0]) + pad, std::max(seg.a[1], seg.b[1]) + pad};
    }

    const double phi = phi_rho(nu, s);
    StudyTable t{"tube", {}, std::nullopt};
    t.table.columns = {"h", "volume", "ratio", "predicted", "predicted_with_caps", "rel_error"};
    double worst = 0.0;
    for (double h : hs) {
        const std::vector<Segment> segs{seg};
        const double v = tube_volume(segs, h, s, domain);
        const double ratio = v / h;
        const double pred = phi * length;
        const double caps = pred + h * s.volume();
        const double err = std::abs(ratio - pred) / pred;
        worst = std::max(worst, err);
        t.table.add_row({cell(h), cell(v), cell(ratio), cell(pred), cell(caps), cell(err)});
    }
    PlotSpec plot;
    plot.kind = PlotKind::line;
    plot.title = "tube volume over h";
    plot.x_column = "h";
    plot.x_label = "h";
    plot.y_label = "|tube| / h";
    plot.log_x = true;
    plot.series = {{"ratio", "|tube| / h", ""}};
    const auto h_col = t.table.numeric("h");
    plot.overlay = {{*std::min_element(h_col.begin(), h_col.end()), phi * length},
                    {*std::max_element(h_col.begin(), h_col.end()), phi * length}};
    plot.overlay_label = "phi(nu) length";
    t.plot = plot;

    StudyOutput out;
    out.summary = {{"phi_rho", phi}, {"length", length}, {"max_rel_error", worst}};
    out.tables.push_back(std::move(t));
    return out;
}

StudyOutput study_gamma1d(const ConfigNode& c, const SolveOptions& solve) {
    OneDProblem base;
    base.p = c.number("p", 2.0);
    const double alpha = c.number("alpha");
    const double beta = c.number("beta");
    const std::string kind = c.string("kind", "truncatedAffine");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("field '" + c.path_of("alpha") + "' and beta must be positive");
    if (kind == "truncatedAffine") {
        base.f = FProfile::truncated_affine(alpha, beta);
    } else if (kind == "exponential") {
        base.f = FProfile::exponential(alpha, beta);
    } else {
        throw ConfigError("field '" + c.path_of("kind") + "' must be truncatedAffine or exponential");
    }
    base.epsilon = c.number("epsilon");
    if (!(base.epsilon > 0.0 && base.epsilon < 1.0)) throw ConfigError("field '" + c.path_of("epsilon") + "' must lie in (0,1)");
    const int per_eps = c.integer("cells_per_epsilon", 16);
    if (per_eps < 8) throw ConfigError("field '" + c.path_of("cells_per_epsilon") + "' must be at least 8");
    base.cells = c.has("cells") ? c.integer("cells") : static_cast<int>(std::ceil(per_eps / base.epsilon - 1e-9));
    guarded(c.path_of("cells"), [&] { validate(base); return 0; });

    const double analytic = std::pow(2.0 * beta / alpha, 1.0 / base.p);
    std::vector<double> lambdas;
    if (c.has("lambdas")) {
        lambdas = c.numbers("lambdas");
    } else {
        const ConfigNode sw = c.has("lambda_sweep") ? c.child("lambda_sweep") : c;
        const double lo = c.has("lambda_sweep") ? sw.number("min") : 0.5 * analytic;
        const double hi = c.has("lambda_sweep") ? sw.number("max") : 2.0 * analytic;
        const int n = c.has("lambda_sweep") ? sw.integer("count") : 31;
        if (n < 2 || !(hi > lo) || lo < 0.0) throw ConfigError("field '" + c.path_of("lambda_sweep") + "' is not a valid sweep");
        lambdas = linspace(lo, hi, n);
    }
    const CrossoverResult r = guarded(c.path_of("lambdas"), [&] { return crossover(base, lambdas, solve); });

    StudyOutput out;
    StudyTable t{"gamma1d", {}, std::nullopt};
    t.table.columns = {"lambda", "energy", "branch", "affine_energy", "ramp_energy", "limit", "iterations", "converged"};
    for (const CrossoverRow& row : r.rows) {
        t.table.add_row({cell(row.lambda), cell(row.energy), cell(row.branch), cell(row.affine_energy),
                         cell(row.ramp_energy), cell(row.limit), cell(row.iterations), cell(row.converged)});
        out.converged = out.converged && row.converged;
    }
    PlotSpec plot;
    plot.kind = PlotKind::line;
    plot.title = "1D minimal energy vs boundary datum";
    plot.x_column = "lambda";
    plot.x_label = "lambda";
    plot.y_label = "min G_eps";
    plot.series = {{"energy", "minimized G_eps", ""}};
    for (double x : linspace(lambdas.front(), lambdas.back(), 200)) {
        plot.overlay.emplace_back(x, g_limit_minimum(x, alpha, beta, base.p));
    }
    plot.overlay_label = "min(a l^p, 2b)";
    t.plot = plot;
    out.tables.push_back(std::move(t));
    out.summary = {{"lambda_star", r.lambda_star},
                   {"first_fracture", r.first_fracture},
                   {"analytic", r.analytic},
                   {"rel_error", std::abs(r.lambda_star - r.analytic) / r.analytic},
                   {"cells", base.cells}};
    return out;
}

StudyOutput study_elastic2d(const ConfigNode& c, const SolveOptions& solve) {
    const MediumSpec spec = c.has("medium") ? parse_medium(c.child("medium")) : MediumSpec{};
    if (spec.dim != 2) throw ConfigError("field '" + c.path_of("medium.dim") + "' must be 2 for elastic2d");
    if (std::holds_alternative<RandomCheckerboardField>(spec.field)) {
        throw ConfigError("field '" + c.path_of("medium.field.type") + "' cannot be random for elastic2d");
    }
    const Medium medium(spec);
    const KernelSpec kernel = parse_kernel(c.child("kernel"), 2);
    const FProfile f = parse_profile(c.child("profile"));
    const Tensor m = parse_matrix(c, "M", 2);
    const std::vector<double> eps = c.numbers("epsilons");
    const double ratio = c.number("h_ratio", 8.0);
    const double side = c.number("side", 1.0);
    const int layers = c.integer("boundary_layers", 1);
    const BoundaryPolicy policy = parse_policy(c, "policy");
    if (!(side > 0.0)) throw ConfigError("field '" + c.path_of("side") + "' must be positive");
    if (layers < 1) throw ConfigError("field '" + c.path_of("boundary_layers") + "' must be positive");

    const Box domain{{0.0, 0.0}, {side, side}};
    StudyOutput out;
    StudyTable t{"elastic2d", {}, std::nullopt};
    t.table.columns = {"epsilon", "h", "cells", "energy", "oracle", "rel_error", "iterations", "converged", "restart"};
    for (double e : eps) {
        if (!(e > 0.0)) throw ConfigError("field '" + c.path_of("epsilons") + "' entries must be positive");
        const double h = e / ratio;
        const Grid grid = guarded(c.path_of("h_ratio"), [&] { return make_grid(2, domain, h); });
        DisplacementField datum = DisplacementField::affine(grid, m);
        pin_boundary_layer(datum, layers);
        const FunctionalParams params{e, kernel, f, medium, policy};
        const SolveResult r = minimize_nonlocal(params, datum, solve);
        const double oracle = f.alpha() * local_energy(DisplacementField::affine(grid, m), medium);
        const double err = oracle != 0.0 ? std::abs(r.energy - oracle) / oracle : std::abs(r.energy);
        t.table.add_row({cell(e), cell(h), cell(grid.cells[0]), cell(r.energy), cell(oracle), cell(err),
                         cell(r.iterations), cell(r.converged), cell(r.restart)});
        out.converged = out.converged && r.converged;
    }
    PlotSpec plot;
    plot.kind = PlotKind::line;
    plot.title = "minimized non-local energy, affine datum";
    plot.x_column = "epsilon";
    plot.x_label = "epsilon";
    plot.y_label = "energy";
    plot.log_x = true;
    plot.series = {{"energy", "min F_eps", ""}};
    const auto e_col = t.table.numeric("epsilon");
    const auto o_col = t.table.numeric("oracle");
    for (std::size_t i = 0; i < e_col.size(); ++i) plot.overlay.emplace_back(e_col[i], o_col[i]);
    plot.overlay_label = "alpha |U| W(e(u_M))";
    t.plot = plot;
    out.tables.push_back(std::move(t));
    out.summary = {{"M", matrix_json(m, 2)}, {"side", side}};
    return out;
}

CellStudyOptions cell_options(const ConfigNode& c, const SolveOptions& solve) {
    CellStudyOptions o;
    o.min_cells_per_side = c.integer("min_cells_per_side", o.min_cells_per_side);
    o.cells_per_structure = c.integer("cells_per_structure", o.cells_per_structure);
    if (o.min_cells_per_side < 16) throw ConfigError("field '" + c.path_of("min_cells_per_side") + "' must be at least 16");
    if (o.cells_per_structure < 8) throw ConfigError("field '" + c.path_of("cells_per_structure") + "' must be at least 8");
    o.solve = solve;
    return o;
}

StudyOutput study_cell(const ConfigNode& c, const SolveOptions& solve) {
    const MediumSpec spec = parse_medium(c.child("medium"));
    if (std::holds_alternative<RandomCheckerboardField>(spec.field)) {
        throw ConfigError("field '" + c.path_of("medium.field.type") + "' cannot be random for the cell study");
    }
    const Tensor m = parse_matrix(c, "M", spec.dim);
    const Point x = parse_point(c, "x", spec.dim);
    const std::vector<double> deltas = c.numbers("deltas");
    const std::vector<double> radii = c.numbers("radii");
    const CellStudyOptions options = cell_options(c, solve);
    const CellFormulaEstimate r = guarded(c.path(), [&] {
        return estimate_W_prime_second(x, m, Medium(spec), deltas, radii, options);
    });

    StudyOutput out;
    StudyTable t{"cell", {}, std::nullopt};
    t.table.columns = {"r", "delta", "value", "converged", "iterations", "cells_per_side"};
    for (const CellTableEntry& e : r.table) {
        t.table.add_row({cell(e.r), cell(e.delta), cell(e.value), cell(e.converged), cell(e.iterations),
                         cell(e.cells_per_side)});
        out.converged = out.converged && e.converged;
    }
    PlotSpec plot;
    plot.kind = PlotKind::scatter;
    plot.title = "cell values m_k(u_M, Q_r(x)) / r^n";
    plot.x_column = "delta";
    plot.x_label = "delta";
    plot.y_label = "normalized cell value";
    plot.log_x = true;
    plot.series = {{"value", "all r", ""}};
    if (const auto oracle = harmonic_oracle(spec, m)) {
        plot.overlay = {{deltas.back(), *oracle}, {deltas.front(), *oracle}};
        plot.overlay_label = "1D oracle";
    }
    t.plot = plot;
    out.tables.push_back(std::move(t));
    out.summary = {{"w_prime", r.w_prime}, {"w_second", r.w_second}, {"spread", r.spread}, {"flagged", r.flagged}};
    return out;
}

StudyOutput study_homdet(const ConfigNode& c, const SolveOptions& solve) {
    const MediumSpec spec = parse_medium(c.child("medium"));
    if (std::holds_alternative<RandomCheckerboardField>(spec.field)) {
        throw ConfigError("field '" + c.path_of("medium.field.type") + "' cannot be random for homdet; use homstoch");
    }
    const Medium medium(spec);
    const Tensor m = parse_matrix(c, "M", spec.dim);
    const Point x = parse_point(c, "x", spec.dim);
    const std::vector<double> ts = c.numbers("t_list");
    const CellStudyOptions options = cell_options(c, solve);
    const HomogenizationEstimate r = guarded(c.path_of("t_list"), [&] { return homogenize_det(medium, m, ts, x, options); });

    StudyOutput out;
    StudyTable t{"homdet", {}, std::nullopt};
    t.table.columns = {"t", "value", "converged", "iterations"};
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        t.table.add_row({cell(r.t[i]), cell(r.values[i]), cell(static_cast<bool>(r.converged[i])), cell(r.iterations[i])});
        out.converged = out.converged && r.converged[i];
    }
    PlotSpec plot;
    plot.kind = PlotKind::line;
    plot.title = "m(u_M, Q_t(tx)) / t^n";
    plot.x_column = "t";
    plot.x_label = "t";
    plot.y_label = "normalized cell value";
    plot.log_x = true;
    plot.series = {{"value", "cell value", ""}};
    out.summary = {{"estimate", r.estimate}, {"error_bar", r.error_bar}};
    if (const auto oracle = harmonic_oracle(spec, m)) {
        plot.overlay = {{ts.front(), *oracle}, {ts.back(), *oracle}};
        plot.overlay_label = "1D oracle";
        out.summary["oracle"] = *oracle;
        out.summary["rel_error"] = std::abs(r.estimate - *oracle) / *oracle;
    }
    t.plot = plot;
    out.tables.push_back(std::move(t));

    if (c.has("rescaling")) {
        const ConfigNode rc = c.child("rescaling");
        const double rr = rc.number("r");
        const double delta = rc.number("delta");
        const double h = rc.number("h");
        const Point rx = parse_point(rc, "x", spec.dim);
        const RescalingCheck chk = guarded(rc.path(), [&] {
            return rescaling_identity_check(medium, m, rr, delta, rx, h, solve);
        });
        out.summary["rescaling"] = {{"r", rr},           {"delta", delta},        {"h", h},
                                    {"scaled", chk.scaled}, {"unscaled", chk.unscaled}, {"residual", chk.residual},
                                    {"converged", chk.converged}};
        out.converged = out.converged && chk.converged;
    }
    return out;
}

StudyOutput study_homstoch(const ConfigNode& c, const SolveOptions& solve) {
    StochStudy study;
    study.spec = parse_medium(c.child("medium"));
    if (!std::holds_alternative<RandomCheckerboardField>(study.spec.field)) {
        throw ConfigError("field '" + c.path_of("medium.field.type") + "' must be randomCheckerboard for homstoch");
    }
    study.m = parse_matrix(c, "M", study.spec.dim);
    study.t_list = c.integers("t_list");
    study.samples = c.integer("samples");
    study.base_seed = c.seed("seed", 0);
    study.cells_per_unit = c.integer("cells_per_unit", 8);
    if (c.has("cache_dir")) study.cache_dir = c.string("cache_dir");
    study.solve = solve;
    guarded(c.path(), [&] { validate(study); return 0; });
    const StochResult r = ergodic_estimate(study);

    StudyOutput out;
    StudyTable summary{"homstoch", {}, std::nullopt};
    summary.table.columns = {"t", "samples", "mean", "sd", "std_error"};
    StudyTable per{"homstoch_realizations", {}, std::nullopt};
    per.table.columns = {"t", "index", "seed", "value", "converged", "iterations"};
    for (const StochLevel& level : r.levels) {
        summary.table.add_row({cell(level.t), cell(study.samples), cell(level.mean), cell(level.sd), cell(level.std_error)});
        for (std::size_t i = 0; i < level.values.size(); ++i) {
            per.table.add_row({cell(level.t), cell(static_cast<int>(i)),
                               cell(std::to_string(realization_seed(study.base_seed, level.t, static_cast<int>(i)))),
                               cell(level.values[i]), cell(static_cast<bool>(level.converged[i])),
                               cell(level.iterations[i])});
        }
    }
    PlotSpec plot;
    plot.kind = PlotKind::errorbar;
    plot.title = "ensemble mean of m_w(u_M, Q_t) / t^n";
    plot.x_column = "t";
    plot.x_label = "t";
    plot.y_label = "mean +- standard error";
    plot.log_x = true;
    plot.series = {{"mean", "ensemble mean", "std_error"}};
    out.summary = {{"estimate", r.estimate}, {"error_bar", r.error_bar}, {"unconverged", r.unconverged}};
    if (const auto oracle = harmonic_oracle(study.spec, study.m)) {
        plot.overlay = {{static_cast<double>(study.t_list.front()), *oracle},
                        {static_cast<double>(study.t_list.back()), *oracle}};
        plot.overlay_label = "harmonic mean";
        out.summary["oracle"] = *oracle;
        out.summary["rel_error"] = std::abs(r.estimate - *oracle) / *oracle;
    }
    summary.plot = plot;
    out.converged = r.unconverged == 0;
    out.tables.push_back(std::move(summary));
    out.tables.push_back(std::move(per));
    return out;
}

}  // namespace

const std::vector<std::string>& study_names() {
    static const std::vector<std::string> names{"phi", "tube", "gamma1d", "elastic2d", "cell", "homdet", "homstoch"};
    return names;
}

StudyOutput run_study(const std::string& study, const json& config) {
    const ConfigNode root(config, "");
    const ConfigNode c = root.child(study);
    const SolveOptions solve = parse_solve(c);
    if (study == "phi") return study_phi(c);
    if (study == "tube") return study_tube(c);
    if (study == "gamma1d") return study_gamma1d(c, solve);
    if (study == "elastic2d") return study_elastic2d(c, solve);
    if (study == "cell") return study_cell(c, solve);
    if (study == "homdet") return study_homdet(c, solve);
    if (study == "homstoch") return study_homstoch(c, solve);
    throw ConfigError("unknown study '" + study + "'");
}

int run_cli(const CliOptions& options, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    json config;
    StudyOutput output;
    try {
        config = load_config(options.config);
        output = run_study(options.study, config);
    } catch (const ConfigError& e) {
        log << "gammalab: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ResolutionError& e) {
        log << "gammalab: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const GridMismatchError& e) {
        log << "gammalab: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& e) {
        log << "gammalab: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        log << "gammalab: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }

    json files = json::array();
    try {
        std::filesystem::create_directories(options.out);
        for (const StudyTable& t : output.tables) {
            write_csv(options.out / (t.name + ".csv"), t.table);
            files.push_back(t.name + ".csv");
            if (options.plots && t.plot) {
                emit_plot(t.table, *t.plot, options.out / (t.name + ".svg"));
                files.push_back(t.name + ".svg");
            }
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json record = {{"study", options.study},
                       {"config_hash", config_hash(config)},
                       {"tool_version", kToolVersion},
                       {"wall_time_seconds", wall},
                       {"converged", output.converged},
                       {"summary", output.summary},
                       {"outputs", files},
                       {"config", config}};
        std::ofstream os(options.out / (options.study + ".json"));
        if (!os) throw std::runtime_error("cannot write run record");
        os << record.dump(2) << '\n';
    } catch (const std::exception& e) {
        log << "gammalab: " << e.what() << '\n';
        return exit_numerical;
    }
    log << "gammalab: " << options.study << " done, " << files.size() << " file(s) in " << options.out.string()
        << (output.converged ? "" : " (some solves did not converge)") << '\n';
    return exit_ok;
}

}  // namespace gammalab::tools
