#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gammalab/tools/plot.hpp"
#include "gammalab/tools/table.hpp"

namespace gammalab::tools {

inline constexpr const char* kToolVersion = "0.3.0";

struct StudyTable {
    std::string name;  ///< file stem
    Table table;
    std::optional<PlotSpec> plot;
};

struct StudyOutput {
    std::vector<StudyTable> tables;
    nlohmann::json summary = nlohmann::json::object();
    bool converged = true;
};

const std::vector<std::string>& study_names();

/// Runs `study` with its section of the config (config[study]). Throws
/// ConfigError for schema problems and the core error types otherwise.
StudyOutput run_study(const std::string& study, const nlohmann::json& config);

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3 };

struct CliOptions {
    std::string study;
    std::filesystem::path config;
    std::filesystem::path out = ".";
    bool plots = false;
};

/// Loads the config, runs the study and writes <study>*.csv, <study>.json
/// and (with plots) <study>*.svg under out. Returns the exit code.
int run_cli(const CliOptions& options, std::ostream& log);

}  // namespace gammalab::tools
