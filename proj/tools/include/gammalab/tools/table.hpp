#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace gammalab::tools {

using TableCell = std::variant<double, std::int64_t, std::string>;

/// Column-named table; every row has one cell per column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> rows;

    void add_row(std::vector<TableCell> row);
    std::size_t column_index(const std::string& name) const;
    /// Numeric column; integer cells are widened, strings throw.
    std::vector<double> numeric(const std::string& name) const;
    bool empty() const { return rows.empty(); }
};

/// Doubles as %.17g, header row first, '\n' line ends.
std::string to_csv(const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

}  // namespace gammalab::tools
