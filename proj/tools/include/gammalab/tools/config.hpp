#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gammalab/energy.hpp"
#include "gammalab/kernel.hpp"
#include "gammalab/media.hpp"
#include "gammalab/solve.hpp"

namespace gammalab::tools {

/// Schema violation; the message names the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Read-only view of a JSON object with its dotted path for diagnostics.
class ConfigNode {
public:
    ConfigNode(const nlohmann::json& json, std::string path);

    bool has(const std::string& key) const;
    std::string path_of(const std::string& key) const;
    const nlohmann::json& raw() const { return *json_; }
    const std::string& path() const { return path_; }

    ConfigNode child(const std::string& key) const;
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
    std::string string(const std::string& key) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<int> integers(const std::string& key) const;

private:
    const nlohmann::json& field(const std::string& key) const;

    const nlohmann::json* json_;
    std::string path_;
};

/// Parses the file as JSON; syntax errors become ConfigError.
nlohmann::json load_config(const std::filesystem::path& path);
/// FNV-1a 64 of the canonical (key-sorted, compact) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

SupportBody parse_support(const ConfigNode& node, int dim);
KernelSpec parse_kernel(const ConfigNode& node, int dim);
FProfile parse_profile(const ConfigNode& node);
MediumSpec parse_medium(const ConfigNode& node);
/// 2x2 nested array in 2D; a number (or [[m]]) in 1D.
Tensor parse_matrix(const ConfigNode& node, const std::string& key, int dim);
Point parse_point(const ConfigNode& node, const std::string& key, int dim, Point fallback = {0.0, 0.0});
BoundaryPolicy parse_policy(const ConfigNode& node, const std::string& key);
/// Optional "solver" section.
SolveOptions parse_solve(const ConfigNode& node);

}  // namespace gammalab::tools
