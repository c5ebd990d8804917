#include "gammalab/media.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gammalab/errors.hpp"
#include "gammalab/random.hpp"

namespace gammalab {

double strain_norm(const Tensor& m, int dim, GradientMode mode) {
    if (dim == 1) return std::abs(m.xx);
    if (mode == GradientMode::full) return frobenius(m);
    return frobenius(m + transpose(m));
}

double power_density(double a, const Tensor& m, int dim, GradientMode mode, double p) {
    const double n = strain_norm(m, dim, mode);
    if (n == 0.0) return 0.0;
    return a * (p == 2.0 ? n * n : std::pow(n, p));
}

Tensor power_density_derivative(double a, const Tensor& m, int dim, GradientMode mode, double p) {
    const double n = strain_norm(m, dim, mode);
    if (n == 0.0) return {};
    const double np2 = p == 2.0 ? 1.0 : std::pow(n, p - 2.0);
    if (dim == 1) return {a * p * np2 * m.xx, 0.0, 0.0, 0.0};
    if (mode == GradientMode::full) return (a * p * np2) * m;
    // d|A|^p/dM with A = M + M^T is 2 p |A|^(p-2) A.
    return (2.0 * a * p * np2) * (m + transpose(m));
}

IntBox covering_cells(const Box& box, int dim) {
    IntBox b;
    for (int a = 0; a < 2; ++a) {
        if (a >= dim) {
            b.lo[a] = 0;
            b.hi[a] = 1;
            continue;
        }
        b.lo[a] = static_cast<int>(std::floor(box.lo[a]));
        b.hi[a] = static_cast<int>(std::ceil(box.hi[a]));
        if (b.hi[a] <= b.lo[a]) b.hi[a] = b.lo[a] + 1;
    }
    return b;
}

RandomMedium RandomMedium::sample(const MediumSpec& spec, std::uint64_t seed, const IntBox& core, int margin) {
    const auto* law = std::get_if<RandomCheckerboardField>(&spec.field);
    if (law == nullptr) throw std::invalid_argument("RandomMedium::sample needs a randomCheckerboard spec");
    if (!(law->theta >= 0.0 && law->theta <= 1.0)) throw std::invalid_argument("random law probability must lie in [0,1]");
    if (margin < 0) throw std::invalid_argument("window margin must be non-negative");
    RandomMedium m;
    m.spec_ = spec;
    m.seed_ = seed;
    m.core_ = core;
    m.stored_window_ = core;
    for (int a = 0; a < spec.dim; ++a) {
        m.stored_window_.lo[a] -= margin;
        m.stored_window_.hi[a] += margin;
    }
    if (spec.dim == 1) {
        m.core_.lo[1] = m.stored_window_.lo[1] = 0;
        m.core_.hi[1] = m.stored_window_.hi[1] = 1;
    }
    const Index2 ext = m.stored_window_.extent();
    auto values = std::make_shared<std::vector<double>>(static_cast<std::size_t>(ext[0]) * static_cast<std::size_t>(ext[1]));
    for (int j = 0; j < ext[1]; ++j) {
        for (int i = 0; i < ext[0]; ++i) {
            const std::int64_t k0 = m.stored_window_.lo[0] + i;
            const std::int64_t k1 = m.stored_window_.lo[1] + j;
            const double u = to_unit_interval(mix_keys(seed, {k0, k1}));
            (*values)[static_cast<std::size_t>(j) * static_cast<std::size_t>(ext[0]) + static_cast<std::size_t>(i)] =
                u < law->theta ? law->a1 : law->a2;
        }
    }
    m.values_ = std::move(values);
    return m;
}

IntBox RandomMedium::window() const {
    IntBox w = stored_window_;
    for (int a = 0; a < 2; ++a) {
        w.lo[a] -= offset_[a];
        w.hi[a] -= offset_[a];
    }
    return w;
}

RandomMedium RandomMedium::shift(const Index2& z) const {
    RandomMedium m = *this;
    m.offset_[0] += z[0];
    m.offset_[1] += spec_.dim > 1 ? z[1] : 0;
    if (!m.window().contains(m.core_)) {
        std::ostringstream msg;
        msg << "shift (" << z[0] << "," << z[1] << ") exhausts the realization window margin";
        throw WindowError(msg.str());
    }
    return m;
}

double RandomMedium::cell_value(const Index2& k) const {
    const Index2 s{k[0] + offset_[0], spec_.dim > 1 ? k[1] + offset_[1] : 0};
    if (!stored_window_.contains(s)) {
        std::ostringstream msg;
        msg << "lattice cell (" << k[0] << "," << k[1] << ") outside the realization window";
        throw WindowError(msg.str());
    }
    const Index2 ext = stored_window_.extent();
    return (*values_)[static_cast<std::size_t>(s[1] - stored_window_.lo[1]) * static_cast<std::size_t>(ext[0]) +
                      static_cast<std::size_t>(s[0] - stored_window_.lo[0])];
}

double RandomMedium::coefficient(const Point& x) const {
    return cell_value({static_cast<int>(std::floor(x[0])), spec_.dim > 1 ? static_cast<int>(std::floor(x[1])) : 0});
}

Medium::Medium(MediumSpec spec) : spec_(std::move(spec)) {
    if (spec_.dim != 1 && spec_.dim != 2) throw std::invalid_argument("medium dimension must be 1 or 2");
    if (!(spec_.p > 1.0)) throw std::invalid_argument("medium exponent p must exceed 1");
    if (std::holds_alternative<RandomCheckerboardField>(spec_.field)) {
        throw std::invalid_argument("a random checkerboard medium needs a sampled realization");
    }
    if (const auto* lam = std::get_if<LaminateField>(&spec_.field)) {
        if (lam->axis < 0 || lam->axis >= spec_.dim) throw std::invalid_argument("laminate axis out of range");
    }
}

Medium::Medium(RandomMedium realization)
    : spec_(realization.spec()), realization_(std::make_shared<const RandomMedium>(std::move(realization))) {
    if (!(spec_.p > 1.0)) throw std::invalid_argument("medium exponent p must exceed 1");
}

Medium Medium::rescaled(double delta) const {
    if (!(delta > 0.0)) throw std::invalid_argument("length scale must be positive");
    Medium m = *this;
    m.scale_ *= delta;
    return m;
}

double Medium::coefficient(const Point& x) const {
    const Point y = scale_ == 1.0 ? x : Point{x[0] / scale_, x[1] / scale_};
    if (realization_) return realization_->coefficient(y);
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstantField>) {
                return f.a;
            } else if constexpr (std::is_same_v<F, LaminateField>) {
                const double t = y[f.axis] - std::floor(y[f.axis]);
                return t < f.theta ? f.a1 : f.a2;
            } else if constexpr (std::is_same_v<F, CheckerboardField>) {
                long parity = static_cast<long>(std::floor(2.0 * y[0]));
                if (spec_.dim > 1) parity += static_cast<long>(std::floor(2.0 * y[1]));
                return (parity % 2 == 0) ? f.a1 : f.a2;
            } else if constexpr (std::is_same_v<F, CustomField>) {
                return f.a(y);
            } else {
                return 0.0;
            }
        },
        spec_.field);
}

double Medium::density(const Point& x, const Tensor& m) const {
    return power_density(coefficient(x), m, spec_.dim, spec_.mode, spec_.p);
}

Tensor Medium::density_derivative(const Point& x, const Tensor& m) const {
    return power_density_derivative(coefficient(x), m, spec_.dim, spec_.mode, spec_.p);
}

double Medium::structure_length() const {
    if (realization_) return scale_;
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, LaminateField>) {
                return (f.theta > 0.0 && f.theta < 1.0) ? scale_ : 0.0;
            } else if constexpr (std::is_same_v<F, CheckerboardField>) {
                return scale_;
            } else {
                return 0.0;
            }
        },
        spec_.field);
}

std::vector<double> Medium::cell_coefficients(const Grid& grid) const {
    std::vector<double> a(grid.cell_count());
    for (int j = 0; j < grid.cells_along(1); ++j) {
        for (int i = 0; i < grid.cells_along(0); ++i) a[grid.cell_index(i, j)] = coefficient(grid.cell_center(i, j));
    }
    return a;
}

double eval_density(const Medium& medium, const Point& x, const Tensor& m) { return medium.density(x, m); }

ClassReport check_class_membership(const Medium& medium, int samples, std::uint64_t seed) {
    ClassReport report;
    report.samples = samples;
    const int dim = medium.dim();
    const double p = medium.p();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);

    Point lo{-4.0, -4.0};
    Point hi{4.0, 4.0};
    if (const RandomMedium* r = medium.realization()) {
        const IntBox core = r->core();
        for (int a = 0; a < 2; ++a) {
            lo[a] = core.lo[a] * medium.scale();
            hi[a] = core.hi[a] * medium.scale();
        }
    }
    std::uniform_real_distribution<double> ux(lo[0], hi[0]);
    std::uniform_real_distribution<double> uy(lo[1], hi[1]);

    auto fail = [&](const char* which, const Point& x, const Tensor& m, const std::string& detail) {
        report.pass = false;
        report.violated = which;
        report.x = x;
        report.m = m;
        report.detail = detail;
    };

    for (int s = 0; s < samples && report.pass; ++s) {
        const Point x{ux(rng), dim > 1 ? uy(rng) : 0.0};
        Tensor m{entry(rng), 0.0, 0.0, 0.0};
        if (dim > 1) {
            m.xy = entry(rng);
            m.yx = entry(rng);
            m.yy = entry(rng);
        }
        const double w0 = medium.density(x, Tensor{});
        if (w0 != 0.0) {
            fail("W2", x, Tensor{}, "W(x,0) = " + std::to_string(w0));
            break;
        }
        const double w = medium.density(x, m);
        if (dim > 1 && medium.mode() == GradientMode::symmetrized) {
            const double k = entry(rng);
            const Tensor skew{0.0, k, -k, 0.0};
            const double ws = medium.density(x, m + skew);
            if (std::abs(ws - w) > 1e-12 * std::max(1.0, std::abs(w))) {
                fail("W3", x, m, "W(x,M+S) - W(x,M) = " + std::to_string(ws - w));
                break;
            }
        }
        const double np = std::pow(strain_norm(m, dim, medium.mode()), p);
        const double lower = medium.c1() * np;
        const double upper = medium.c2() * (np + 1.0);
        if (w < lower * (1.0 - 1e-12) || w > upper * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "W = " << w << " outside [" << lower << ", " << upper << "] (a(x) = " << medium.coefficient(x) << ")";
            fail("W4", x, m, msg.str());
        }
    }
    return report;
}

std::uint64_t spec_hash(const MediumSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "dim=" << spec.dim << ";p=" << spec.p << ";c1=" << spec.c1 << ";c2=" << spec.c2
       << ";mode=" << (spec.mode == GradientMode::full ? "full" : "sym") << ';';
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstantField>) {
                os << "constant:" << f.a;
            } else if constexpr (std::is_same_v<F, LaminateField>) {
                os << "laminate:" << f.axis << ',' << f.a1 << ',' << f.a2 << ',' << f.theta;
            } else if constexpr (std::is_same_v<F, CheckerboardField>) {
                os << "checkerboard:" << f.a1 << ',' << f.a2;
            } else if constexpr (std::is_same_v<F, RandomCheckerboardField>) {
                os << "random:" << f.a1 << ',' << f.a2 << ',' << f.theta;
            } else {
                os << "custom:" << f.name;
            }
        },
        spec.field);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

constexpr std::array<char, 4> kRealizationMagic{'G', 'L', 'R', 'M'};
constexpr std::uint32_t kRealizationVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("truncated realization file");
    return v;
}

void put_box(std::ostream& os, const IntBox& b) {
    for (int v : {b.lo[0], b.lo[1], b.hi[0], b.hi[1]}) put(os, static_cast<std::int32_t>(v));
}

IntBox get_box(std::istream& is) {
    IntBox b;
    b.lo[0] = get<std::int32_t>(is);
    b.lo[1] = get<std::int32_t>(is);
    b.hi[0] = get<std::int32_t>(is);
    b.hi[1] = get<std::int32_t>(is);
    return b;
}

}  // namespace

void save_realization(const std::filesystem::path& path, const RandomMedium& medium) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(kRealizationMagic.data(), kRealizationMagic.size());
    put(os, kRealizationVersion);
    put(os, spec_hash(medium.spec()));
    put(os, medium.seed());
    put_box(os, medium.stored_window());
    put_box(os, medium.core());
    put(os, static_cast<std::int32_t>(medium.offset()[0]));
    put(os, static_cast<std::int32_t>(medium.offset()[1]));
    const auto& v = medium.stored_values();
    put(os, static_cast<std::uint64_t>(v.size()));
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!os) throw Error("failed writing " + path.string());
}

RandomMedium load_realization(const std::filesystem::path& path, const MediumSpec& spec) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kRealizationMagic) throw Error(path.string() + " is not a realization file");
    if (get<std::uint32_t>(is) != kRealizationVersion) throw Error("unsupported realization file version");
    if (get<std::uint64_t>(is) != spec_hash(spec)) throw Error(path.string() + " was written for a different medium spec");
    RandomMedium m;
    m.spec_ = spec;
    m.seed_ = get<std::uint64_t>(is);
    m.stored_window_ = get_box(is);
    m.core_ = get_box(is);
    m.offset_[0] = get<std::int32_t>(is);
    m.offset_[1] = get<std::int32_t>(is);
    const auto count = get<std::uint64_t>(is);
    const Index2 ext = m.stored_window_.extent();
    if (ext[0] <= 0 || ext[1] <= 0 || count != static_cast<std::uint64_t>(ext[0]) * static_cast<std::uint64_t>(ext[1])) {
        throw Error("corrupt realization header");
    }
    auto values = std::make_shared<std::vector<double>>(count);
    is.read(reinterpret_cast<char*>(values->data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw Error("truncated realization file");
    m.values_ = std::move(values);
    return m;
}

std::filesystem::path realization_cache_path(const std::filesystem::path& dir, const MediumSpec& spec, std::uint64_t seed,
                                             const IntBox& core, int margin) {
    char name[160];
    std::snprintf(name, sizeof name, "realization_%016llx_%016llx_%d_%d_%d_%d_m%d.bin",
                  static_cast<unsigned long long>(spec_hash(spec)), static_cast<unsigned long long>(seed), core.lo[0],
                  core.lo[1], core.hi[0], core.hi[1], margin);
    return dir / name;
}

RandomMedium load_or_sample(const std::filesystem::path& dir, const MediumSpec& spec, std::uint64_t seed,
                            const IntBox& core, int margin) {
    const auto path = realization_cache_path(dir, spec, seed, core, margin);
    if (std::filesystem::exists(path)) return load_realization(path, spec);
    RandomMedium m = RandomMedium::sample(spec, seed, core, margin);
    std::filesystem::create_directories(dir);
    save_realization(path, m);
    return m;
}

}  // namespace gammalab
