#include "gammalab/tools/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gammalab::tools {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
            lo -= d;
            hi += d;
        } else {
            const double d = 0.05 * (hi - lo);
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
    if (table.empty()) throw std::invalid_argument("cannot plot an empty table");
    if (spec.series.empty()) throw std::invalid_argument("plot needs at least one series");

    auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
    const std::vector<double> xs = table.numeric(spec.x_column);
    std::vector<std::vector<double>> ys;
    std::vector<std::vector<double>> errs;
    Range xr;
    Range yr;
    for (double x : xs) xr.add(tx(x));
    for (const PlotSeries& s : spec.series) {
        ys.push_back(table.numeric(s.column));
        errs.push_back(spec.kind == PlotKind::errorbar && !s.error_column.empty() ? table.numeric(s.error_column)
                                                                                  : std::vector<double>(xs.size(), 0.0));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            yr.add(ys.back()[i] - errs.back()[i]);
            yr.add(ys.back()[i] + errs.back()[i]);
        }
    }
    for (const auto& [x, y] : spec.overlay) {
        xr.add(tx(x));
        yr.add(y);
    }
    xr.pad();
    yr.pad();

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
       << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
        const double sx = kLeft + pw * k / 4.0;
        os << "<line x1=\"" << sx << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx << "\" y2=\"" << kTop + ph + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << sx << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
           << num(spec.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
        const double sy = kTop + ph - ph * k / 4.0;
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kLeft << "\" y2=\"" << sy
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    double legend_y = kTop + 10;
    auto legend = [&](const std::string& color, const std::string& label, bool dashed) {
        os << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << legend_y << "\" x2=\"" << kWidth - kRight + 36
           << "\" y2=\"" << legend_y << "\" stroke=\"" << color << "\" stroke-width=\"2\""
           << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        os << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << legend_y + 4 << "\">" << escape(label) << "</text>\n";
        legend_y += 18;
    };

    if (!spec.overlay.empty()) {
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" points=\"";
        for (const auto& [x, y] : spec.overlay) os << num(px(x)) << ',' << num(py(y)) << ' ';
        os << "\"/>\n";
        legend("black", spec.overlay_label.empty() ? "analytic" : spec.overlay_label, true);
    }

    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const std::string color = kColors[s % std::size(kColors)];
        if (spec.kind == PlotKind::line) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < xs.size(); ++i) os << num(px(xs[i])) << ',' << num(py(ys[s][i])) << ' ';
            os << "\"/>\n";
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (spec.kind == PlotKind::errorbar && errs[s][i] > 0.0) {
                os << "<line x1=\"" << num(px(xs[i])) << "\" y1=\"" << num(py(ys[s][i] - errs[s][i])) << "\" x2=\""
                   << num(px(xs[i])) << "\" y2=\"" << num(py(ys[s][i] + errs[s][i])) << "\" stroke=\"" << color
                   << "\"/>\n";
            }
            os << "<circle cx=\"" << num(px(xs[i])) << "\" cy=\"" << num(py(ys[s][i])) << "\" r=\"2.5\" fill=\""
               << color << "\"/>\n";
        }
        legend(color, spec.series[s].label.empty() ? spec.series[s].column : spec.series[s].label, false);
    }
    os << "</svg>\n";
    return os.str();
}

void emit_plot(const Table& table, const PlotSpec& spec, const std::filesystem::path& path) {
    const std::string svg = render_svg(table, spec);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << svg;
}

}  // namespace gammalab::tools
