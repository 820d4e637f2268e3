#include "modal/csv.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace modal {

namespace {

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& raw)
{
    const std::string s = trim(raw);
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    if (*first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace

std::vector<std::size_t> parse_columns(const std::string& spec)
{
    std::vector<std::size_t> cols;
    for (const auto& cell : split_row(spec)) {
        const std::string t = trim(cell);
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
            throw InvalidArgument("bad column selector '" + spec + "'");
        cols.push_back(v);
    }
    if (cols.empty())
        throw InvalidArgument("empty column selector");
    return cols;
}

Sample load_csv(const std::string& path, const std::vector<std::size_t>& columns)
{
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open '" + path + "'", 0, 0);

    std::vector<double> coords;
    std::vector<std::size_t> selected = columns;
    std::string line;
    std::size_t row = 0;
    std::size_t data_rows = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto cells = split_row(line);
        if (selected.empty()) {
            selected.resize(cells.size());
            for (std::size_t j = 0; j < cells.size(); ++j)
                selected[j] = j;
        }
        std::vector<double> values;
        values.reserve(selected.size());
        std::optional<std::size_t> bad_column;
        for (const auto j : selected) {
            if (j >= cells.size()) {
                throw CsvError(path + ": row " + std::to_string(row) + " has no column " + std::to_string(j), row,
                               j);
            }
            const auto v = parse_real(cells[j]);
            if (!v) {
                bad_column = j;
                break;
            }
            values.push_back(*v);
        }
        if (bad_column) {
            if (data_rows == 0 && row == 1)
                continue; // header
            throw CsvError(path + ": non-numeric value at row " + std::to_string(row) + ", column " +
                               std::to_string(*bad_column),
                           row, *bad_column);
        }
        coords.insert(coords.end(), values.begin(), values.end());
        ++data_rows;
    }
    if (selected.empty() || data_rows == 0)
        throw CsvError(path + ": empty selection", row, 0);
    return Sample(std::move(coords), selected.size(), path);
}

} // namespace modal
