#include "gammalab/tools/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace gammalab::tools {

ConfigNode::ConfigNode(const nlohmann::json& json, std::string path) : json_(&json), path_(std::move(path)) {
    if (!json.is_object()) throw ConfigError("field '" + path_ + "' must be an object");
}

bool ConfigNode::has(const std::string& key) const { return json_->contains(key); }

std::string ConfigNode::path_of(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const nlohmann::json& ConfigNode::field(const std::string& key) const {
    const auto it = json_->find(key);
    if (it == json_->end()) throw ConfigError("missing required field '" + path_of(key) + "'");
    return *it;
}

ConfigNode ConfigNode::child(const std::string& key) const { return ConfigNode(field(key), path_of(key)); }

double ConfigNode::number(const std::string& key) const {
    const nlohmann::json& v = field(key);
    if (!v.is_number()) throw ConfigError("field '" + path_of(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("field '" + path_of(key) + "' must be finite");
    return d;
}

double ConfigNode::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int ConfigNode::integer(const std::string& key) const {
    const nlohmann::json& v = field(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + path_of(key) + "' must be an integer");
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        throw ConfigError("field '" + path_of(key) + "' is out of range");
    }
    return static_cast<int>(i);
}

int ConfigNode::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::uint64_t ConfigNode::seed(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const nlohmann::json& v = field(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError("field '" + path_of(key) + "' must be a non-negative integer");
}

std::string ConfigNode::string(const std::string& key) const {
    const nlohmann::json& v = field(key);
    if (!v.is_string()) throw ConfigError("field '" + path_of(key) + "' must be a string");
    return v.get<std::string>();
}

std::string ConfigNode::string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
}

bool ConfigNode::boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const nlohmann::json& v = field(key);
    if (!v.is_boolean()) throw ConfigError("field '" + path_of(key) + "' must be true or false");
    return v.get<bool>();
}

std::vector<double> ConfigNode::numbers(const std::string& key) const {
    const nlohmann::json& v = field(key);
    if (!v.is_array() || v.empty()) throw ConfigError("field '" + path_of(key) + "' must be a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError("field '" + path_of(key) + "[" + std::to_string(i) + "]' must be a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<int> ConfigNode::integers(const std::string& key) const {
    const nlohmann::json& v = field(key);
    if (!v.is_array() || v.empty()) throw ConfigError("field '" + path_of(key) + "' must be a non-empty array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) {
            throw ConfigError("field '" + path_of(key) + "[" + std::to_string(i) + "]' must be an integer");
        }
        out.push_back(v[i].get<int>());
    }
    return out;
}

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    try {
        nlohmann::json j = nlohmann::json::parse(is);
        if (!j.is_object()) throw ConfigError("config root must be an object");
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::string config_hash(const nlohmann::json& config) {
    const std::string text = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SupportBody parse_support(const ConfigNode& node, int dim) {
    const std::string type = node.string("type");
    try {
        if (type == "ball") return SupportBody::ball(dim, node.number("radius", 1.0));
        if (type == "box") {
            std::vector<double> hw = node.numbers("half_widths");
            if (static_cast<int>(hw.size()) != dim) {
                throw ConfigError("field '" + node.path_of("half_widths") + "' needs " + std::to_string(dim) + " entries");
            }
            return SupportBody::box(std::move(hw));
        }
        if (type == "polytope") {
            const nlohmann::json& v = node.raw().at("vertices");
            std::vector<Point> pts;
            for (const auto& p : v) {
                if (!p.is_array() || p.size() != static_cast<std::size_t>(dim)) {
                    throw ConfigError("field '" + node.path_of("vertices") + "' entries must have " + std::to_string(dim) +
                                      " coordinates");
                }
                pts.push_back({p[0].get<double>(), dim > 1 ? p[1].get<double>() : 0.0});
            }
            return SupportBody::polytope(dim, pts);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("field '" + node.path_of("vertices") + "' must be an array of points");
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field '" + node.path() + "': " + e.what());
    }
    throw ConfigError("field '" + node.path_of("type") + "' must be one of ball, box, polytope");
}

KernelSpec parse_kernel(const ConfigNode& node, int dim) {
    SupportBody s = parse_support(node.child("support"), dim);
    const std::string profile = node.string("profile", "uniform");
    if (profile == "uniform") return KernelSpec::uniform(std::move(s));
    if (profile == "gaugePolynomial") {
        const double q = node.number("exponent");
        if (!(q >= 0.0)) throw ConfigError("field '" + node.path_of("exponent") + "' must be non-negative");
        return KernelSpec::gauge_polynomial(std::move(s), q);
    }
    throw ConfigError("field '" + node.path_of("profile") + "' must be uniform or gaugePolynomial");
}

FProfile parse_profile(const ConfigNode& node) {
    const std::string kind = node.string("kind", "truncatedAffine");
    const double alpha = node.number("alpha");
    const double beta = node.number("beta");
    if (!(alpha > 0.0)) throw ConfigError("field '" + node.path_of("alpha") + "' must be positive");
    if (!(beta > 0.0)) throw ConfigError("field '" + node.path_of("beta") + "' must be positive");
    if (kind == "truncatedAffine") return FProfile::truncated_affine(alpha, beta);
    if (kind == "exponential") return FProfile::exponential(alpha, beta);
    throw ConfigError("field '" + node.path_of("kind") + "' must be truncatedAffine or exponential");
}

MediumSpec parse_medium(const ConfigNode& node) {
    MediumSpec spec;
    spec.dim = node.integer("dim", 2);
    if (spec.dim != 1 && spec.dim != 2) throw ConfigError("field '" + node.path_of("dim") + "' must be 1 or 2");
    spec.p = node.number("p", 2.0);
    if (!(spec.p > 1.0)) throw ConfigError("field '" + node.path_of("p") + "' must exceed 1");
    spec.c1 = node.number("c1", 0.0);
    spec.c2 = node.number("c2", 0.0);
    const std::string mode = node.string("mode", "symmetrized");
    if (mode == "symmetrized") {
        spec.mode = GradientMode::symmetrized;
    } else if (mode == "full") {
        spec.mode = GradientMode::full;
    } else {
        throw ConfigError("field '" + node.path_of("mode") + "' must be symmetrized or full");
    }

    const ConfigNode field = node.child("field");
    const std::string type = field.string("type");
    auto positive = [&](const std::string& key) {
        const double v = field.number(key);
        if (!(v > 0.0)) throw ConfigError("field '" + field.path_of(key) + "' must be positive");
        return v;
    };
    auto fraction = [&](const std::string& key) {
        const double v = field.number(key, 0.5);
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("field '" + field.path_of(key) + "' must lie in [0,1]");
        return v;
    };
    double lo = 0.0;
    double hi = 0.0;
    if (type == "constant") {
        const double a = positive("a");
        spec.field = ConstantField{a};
        lo = hi = a;
    } else if (type == "laminate") {
        LaminateField f{field.integer("axis", 0), positive("a1"), positive("a2"), fraction("theta")};
        if (f.axis < 0 || f.axis >= spec.dim) throw ConfigError("field '" + field.path_of("axis") + "' is out of range");
        spec.field = f;
        lo = std::min(f.a1, f.a2);
        hi = std::max(f.a1, f.a2);
    } else if (type == "checkerboard") {
        CheckerboardField f{positive("a1"), positive("a2")};
        spec.field = f;
        lo = std::min(f.a1, f.a2);
        hi = std::max(f.a1, f.a2);
    } else if (type == "randomCheckerboard") {
        RandomCheckerboardField f{positive("a1"), positive("a2"), fraction("theta")};
        spec.field = f;
        lo = std::min(f.a1, f.a2);
        hi = std::max(f.a1, f.a2);
    } else {
        throw ConfigError("field '" + field.path_of("type") +
                          "' must be one of constant, laminate, checkerboard, randomCheckerboard");
    }
    // Growth constants default to the coefficient range.
    if (!node.has("c1")) spec.c1 = lo;
    if (!node.has("c2")) spec.c2 = hi;
    return spec;
}

Tensor parse_matrix(const ConfigNode& node, const std::string& key, int dim) {
    if (!node.has(key)) throw ConfigError("missing required field '" + node.path_of(key) + "'");
    const nlohmann::json& v = node.raw().at(key);
    if (dim == 1 && v.is_number()) return {v.get<double>(), 0.0, 0.0, 0.0};
    const std::size_t n = static_cast<std::size_t>(dim);
    bool ok = v.is_array() && v.size() == n;
    for (std::size_t i = 0; ok && i < n; ++i) {
        ok = v[i].is_array() && v[i].size() == n;
        for (std::size_t j = 0; ok && j < n; ++j) ok = v[i][j].is_number();
    }
    if (!ok) throw ConfigError("field '" + node.path_of(key) + "' must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    if (dim == 1) return {v[0][0].get<double>(), 0.0, 0.0, 0.0};
    return {v[0][0].get<double>(), v[0][1].get<double>(), v[1][0].get<double>(), v[1][1].get<double>()};
}

Point parse_point(const ConfigNode& node, const std::string& key, int dim, Point fallback) {
    if (!node.has(key)) return fallback;
    const std::vector<double> v = node.numbers(key);
    if (static_cast<int>(v.size()) != dim) {
        throw ConfigError("field '" + node.path_of(key) + "' needs " + std::to_string(dim) + " coordinates");
    }
    return {v[0], dim > 1 ? v[1] : 0.0};
}

BoundaryPolicy parse_policy(const ConfigNode& node, const std::string& key) {
    const std::string p = node.string(key, "restrictRenormalize");
    if (p == "restrictRenormalize") return BoundaryPolicy::restrict_renormalize;
    if (p == "zeroExtend") return BoundaryPolicy::zero_extend;
    if (p == "clamp") return BoundaryPolicy::clamp;
    throw ConfigError("field '" + node.path_of(key) + "' must be restrictRenormalize, zeroExtend or clamp");
}

SolveOptions parse_solve(const ConfigNode& node) {
    SolveOptions o;
    if (!node.has("solver")) return o;
    const ConfigNode s = node.child("solver");
    o.max_iterations = s.integer("max_iterations", o.max_iterations);
    o.tolerance = s.number("tolerance", o.tolerance);
    o.window = s.integer("window", o.window);
    o.history = s.integer("history", o.history);
    o.restarts = s.integer("restarts", o.restarts);
    o.seed = s.seed("seed", o.seed);
    o.perturbation = s.number("perturbation", o.perturbation);
    if (o.max_iterations < 1) throw ConfigError("field '" + s.path_of("max_iterations") + "' must be positive");
    if (!(o.tolerance > 0.0)) throw ConfigError("field '" + s.path_of("tolerance") + "' must be positive");
    if (o.window < 1) throw ConfigError("field '" + s.path_of("window") + "' must be positive");
    if (o.history < 0) throw ConfigError("field '" + s.path_of("history") + "' must be non-negative");
    if (o.restarts < 1) throw ConfigError("field '" + s.path_of("restarts") + "' must be positive");
    const std::string init = s.string("init", "datumExtension");
    if (init == "datumExtension") {
        o.init = Initialization::datum_extension;
    } else if (init == "zero") {
        o.init = Initialization::zero;
    } else {
        throw ConfigError("field '" + s.path_of("init") + "' must be datumExtension or zero");
    }
    return o;
}

}  // namespace gammalab::tools
