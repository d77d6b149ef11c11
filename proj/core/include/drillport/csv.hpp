#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drillport {

/// Parsed CSV with a header row. Blank lines and lines starting with '#' are
/// skipped; fields are trimmed; double-quoted fields may contain commas.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines; // 1-based source line of each row

    [[nodiscard]] std::optional<std::size_t> find_column(std::string_view name) const;
    /// Throws InputError naming the source when the column is missing.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    /// "source:line" for diagnostics.
    [[nodiscard]] std::string where(std::size_t row) const;

    [[nodiscard]] const std::string& field(std::size_t row, std::string_view name) const;
    [[nodiscard]] double number(std::size_t row, std::string_view name) const;
    [[nodiscard]] long integer(std::size_t row, std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, std::string source);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest fixed-notation text that reads back to the same double.
std::string format_double(double v);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

} // namespace drillport
