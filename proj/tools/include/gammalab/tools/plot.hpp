#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gammalab/tools/table.hpp"

namespace gammalab::tools {

enum class PlotKind { line, scatter, errorbar };

struct PlotSeries {
    std::string column;
    std::string label;
    std::string error_column;  ///< errorbar kind only
};

struct PlotSpec {
    PlotKind kind = PlotKind::line;
    std::string title;
    std::string x_column;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    /// Analytic oracle drawn as a dashed curve.
    std::vector<std::pair<double, double>> overlay;
    std::string overlay_label;
    bool log_x = false;
};

/// Self-contained SVG text. Throws std::invalid_argument on an empty table.
std::string render_svg(const Table& table, const PlotSpec& spec);
void emit_plot(const Table& table, const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace gammalab::tools
