#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gammalab/geometry.hpp"
#include "gammalab/grid.hpp"

namespace gammalab {

struct ConstantField {
    double a = 1.0;
};

/// a1 on {frac(x_axis) < theta}, a2 elsewhere; period 1.
struct LaminateField {
    int axis = 0;
    double a1 = 1.0;
    double a2 = 1.0;
    double theta = 0.5;
};

/// Squares of side 1/2 alternating a1/a2 (period 1 per axis).
struct CheckerboardField {
    double a1 = 1.0;
    double a2 = 1.0;
};

/// Unit lattice cells with iid values: a1 with probability theta, else a2.
struct RandomCheckerboardField {
    double a1 = 1.0;
    double a2 = 1.0;
    double theta = 0.5;
};

/// User-supplied coefficient a(x).
struct CustomField {
    std::function<double(const Point&)> a;
    std::string name = "custom";
};

using CoefficientField = std::variant<ConstantField, LaminateField, CheckerboardField, RandomCheckerboardField, CustomField>;

/// W(x, M) = a(x) |M + M^T|^p in two dimensions (a(x) |M|^p in full-gradient
/// mode) and a(x) |m|^p in one dimension. (c1, c2) are the declared growth
/// constants; they are checked, not enforced.
struct MediumSpec {
    int dim = 2;
    double p = 2.0;
    CoefficientField field = ConstantField{};
    double c1 = 1.0;
    double c2 = 1.0;
    GradientMode mode = GradientMode::symmetrized;
};

/// Strain magnitude entering W: |m| (1D), |M+M^T| (symmetrized), |M| (full).
double strain_norm(const Tensor& m, int dim, GradientMode mode);
double power_density(double a, const Tensor& m, int dim, GradientMode mode, double p);
Tensor power_density_derivative(double a, const Tensor& m, int dim, GradientMode mode, double p);

/// Half-open integer box of lattice cells. In 1D the second axis is [0,1).
struct IntBox {
    Index2 lo{0, 0};
    Index2 hi{1, 1};

    bool contains(const Index2& k) const { return k[0] >= lo[0] && k[0] < hi[0] && k[1] >= lo[1] && k[1] < hi[1]; }
    bool contains(const IntBox& b) const {
        return b.lo[0] >= lo[0] && b.hi[0] <= hi[0] && b.lo[1] >= lo[1] && b.hi[1] <= hi[1];
    }
    Index2 extent() const { return {hi[0] - lo[0], hi[1] - lo[1]}; }
    friend bool operator==(const IntBox&, const IntBox&) = default;
};

/// Smallest lattice box covering `box` (dimension-aware).
IntBox covering_cells(const Box& box, int dim);

/// One realization ω of a random checkerboard, allocated on a window that
/// covers `core` plus a margin. shift(z) gives τ_z ω: the value at cell k is
/// the original value at k + z.
class RandomMedium {
public:
    static RandomMedium sample(const MediumSpec& spec, std::uint64_t seed, const IntBox& core, int margin = 8);

    RandomMedium shift(const Index2& z) const;

    /// Coefficient of lattice cell k. Throws WindowError outside the window.
    double cell_value(const Index2& k) const;
    double coefficient(const Point& x) const;

    const MediumSpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    /// Window and core in this realization's (shifted) coordinates.
    IntBox window() const;
    const IntBox& core() const { return core_; }
    const Index2& offset() const { return offset_; }
    /// Values over the sampled window, row-major in sampling coordinates.
    const std::vector<double>& stored_values() const { return *values_; }
    const IntBox& stored_window() const { return stored_window_; }

private:
    friend RandomMedium load_realization(const std::filesystem::path&, const MediumSpec&);

    MediumSpec spec_;
    std::uint64_t seed_ = 0;
    IntBox stored_window_;
    IntBox core_;
    Index2 offset_{0, 0};
    std::shared_ptr<const std::vector<double>> values_;
};

/// What the energies consume: a deterministic spec or a realization, with an
/// optional length scale δ so that coefficient(x) = a(x/δ).
class Medium {
public:
    Medium(MediumSpec spec);
    Medium(RandomMedium realization);

    /// W_δ(x, M) = W(x/δ, M). Scales compose.
    Medium rescaled(double delta) const;

    int dim() const { return spec_.dim; }
    double p() const { return spec_.p; }
    GradientMode mode() const { return spec_.mode; }
    double c1() const { return spec_.c1; }
    double c2() const { return spec_.c2; }
    double scale() const { return scale_; }
    const MediumSpec& spec() const { return spec_; }
    const RandomMedium* realization() const { return realization_.get(); }

    double coefficient(const Point& x) const;
    double density(const Point& x, const Tensor& m) const;
    Tensor density_derivative(const Point& x, const Tensor& m) const;

    /// Length of the coefficient structure (period or lattice cell) after
    /// scaling; 0 for constant and custom fields.
    double structure_length() const;

    /// a(x) at every cell center of the grid.
    std::vector<double> cell_coefficients(const Grid& grid) const;

private:
    MediumSpec spec_;
    std::shared_ptr<const RandomMedium> realization_;
    double scale_ = 1.0;
};

double eval_density(const Medium& medium, const Point& x, const Tensor& m);

struct ClassReport {
    bool pass = true;
    std::string violated;  ///< "W2", "W3" or "W4"; empty on pass
    Point x{0.0, 0.0};
    Tensor m;
    std::string detail;
    int samples = 0;
};

/// Property test of W2 (W(x,0)=0), W3 (skew invariance, symmetrized mode)
/// and the W4 growth bounds with the declared (c1, c2) on random (x, M).
ClassReport check_class_membership(const Medium& medium, int samples, std::uint64_t seed = 0);

/// Stable 64-bit hash of a spec (FNV-1a over a canonical text form).
std::uint64_t spec_hash(const MediumSpec& spec);

void save_realization(const std::filesystem::path& path, const RandomMedium& medium);
/// Throws Error if the file was written for a different spec.
RandomMedium load_realization(const std::filesystem::path& path, const MediumSpec& spec);
std::filesystem::path realization_cache_path(const std::filesystem::path& dir, const MediumSpec& spec, std::uint64_t seed,
                                             const IntBox& core, int margin);
/// Load from the cache directory if present, else sample and store.
RandomMedium load_or_sample(const std::filesystem::path& dir, const MediumSpec& spec, std::uint64_t seed,
                            const IntBox& core, int margin = 8);

}  // namespace gammalab
