#include "gammalab/tools/table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gammalab::tools {

void Table::add_row(std::vector<TableCell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the header");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::invalid_argument("no column named '" + name + "'");
}

std::vector<double> Table::numeric(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (const auto* d = std::get_if<double>(&row[c])) {
            out.push_back(*d);
        } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
            out.push_back(static_cast<double>(*i));
        } else {
            throw std::invalid_argument("column '" + name + "' is not numeric");
        }
    }
    return out;
}

namespace {

std::string format_cell(const TableCell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << to_csv(table);
}

}  // namespace gammalab::tools
