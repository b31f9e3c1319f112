#include "robustpower/tables.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace robustpower {

TextTable::TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return {buf, res.ptr};
}

void TextTable::add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw std::invalid_argument("row width mismatch");
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_number(v));
    cells_.push_back(std::move(row));
}

void TextTable::add_row(std::string label, const std::vector<double>& values) {
    if (values.size() + 1 != header_.size()) throw std::invalid_argument("row width mismatch");
    std::vector<std::string> row{std::move(label)};
    for (double v : values) row.push_back(format_number(v));
    cells_.push_back(std::move(row));
}

void TextTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    auto line = [&out](const std::vector<std::string>& cells) {
        // an empty row stands for a blank line
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out << ' ';
            out << cells[k];
        }
        out << '\n';
    };
    line(header_);
    for (const auto& row : cells_) line(row);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::size_t ParsedTable::column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return k;
    throw std::out_of_range("no column " + std::string(name));
}

double ParsedTable::number(std::size_t row, std::size_t col) const {
    const auto& s = cells.at(row).at(col);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        return std::numeric_limits<double>::quiet_NaN();
    return v;
}

std::vector<double> ParsedTable::numbers(std::string_view name) const {
    const auto col = column(name);
    std::vector<double> out;
    out.reserve(cells.size());
    for (std::size_t r = 0; r < cells.size(); ++r) out.push_back(number(r, col));
    return out;
}

ParsedTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    ParsedTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<std::string> cells;
        for (std::string cell; ss >> cell;) cells.push_back(cell);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size())
                throw std::runtime_error("ragged row in " + path.string());
            table.cells.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error("empty table " + path.string());
    return table;
}

} // namespace robustpower
