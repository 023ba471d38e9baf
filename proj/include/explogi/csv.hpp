#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "explogi/errors.hpp"

namespace explogi {

/// Shortest round-trip decimal form (std::to_chars), so written files parse
/// back to the identical double and identical inputs give identical bytes.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(trim(cur));
    return fields;
}

}  // namespace detail

/// In-memory CSV table: a header row plus string-valued cells.
/// Data row i corresponds to file line i + 2 (line 1 is the header).
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t find_column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        return npos;
    }

    std::size_t line_of_row(std::size_t row_index) const { return row_index + 2; }
};

/// Comma-separated, header row required, '.' decimal point, UTF-8.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            table.columns = detail::split_csv_line(line, line_no);
            continue;
        }
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line, line_no);
        if (fields.size() != table.columns.size()) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.columns.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (line_no == 0) throw DataError("'" + path + "': empty file (header row required)");
    return table;
}

inline double parse_double_field(const std::string& field, std::size_t line_no,
                                 const std::string& column) {
    const std::string s = detail::trim(field);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                        "': cannot parse '" + field + "' as a number");
    }
    return v;
}

inline long parse_long_field(const std::string& field, std::size_t line_no,
                             const std::string& column) {
    const std::string s = detail::trim(field);
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + column +
                        "': cannot parse '" + field + "' as an integer");
    }
    return v;
}

/// Opens `path` for writing, throwing DataError (not an ios exception) on failure.
inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace explogi
