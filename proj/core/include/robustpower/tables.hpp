#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace robustpower {

/// Space-delimited text table with a header row, pgfplots-compatible.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> header);

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return cells_.size(); }

    void add_row(const std::vector<double>& values);
    /// First cell is a label; the remaining cells are numbers.
    void add_row(std::string label, const std::vector<double>& values);
    /// Empty line; pgfplots reads it as the end of a mesh scanline.
    void add_blank_line() { cells_.emplace_back(); }

    /// Throws std::runtime_error on I/O failure.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> cells_;
};

/// Text for a double at 12 significant digits; nan and inf spelled out.
std::string format_number(double value);

struct ParsedTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;

    /// Index of a header name; throws std::out_of_range when absent.
    std::size_t column(std::string_view name) const;
    /// Cell as a number (NaN when not numeric).
    double number(std::size_t row, std::size_t col) const;
    std::vector<double> numbers(std::string_view name) const;
};

/// Throws std::runtime_error when the file is missing or rows are ragged.
ParsedTable read_table(const std::filesystem::path& path);

} // namespace robustpower
