#pragma once

// CSV formats:
//   scores:  header row, a "label" column with 0/1 values, one or more named
//            score columns. Rows with missing values are rejected.
//   weights: header "c,density", strictly increasing c inside (0, 1).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hmeasure/distributions.hpp"
#include "hmeasure/errors.hpp"

namespace hmeasure::io {

struct ScoreColumn {
    std::string name;
    std::vector<double> values;
};

/// Labels plus every score column of an input file.
struct ScoreTable {
    std::vector<int> labels;
    std::vector<ScoreColumn> columns;

    std::size_t rows() const noexcept { return labels.size(); }

    const ScoreColumn& column(std::string_view name) const {
        for (const auto& c : columns)
            if (c.name == name)
                return c;
        throw InputError("no score column named '" + std::string(name) + "'");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline bool blank(std::string_view s) {
    return trim(s).empty();
}

} // namespace detail

inline ScoreTable read_score_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0)
            line.erase(0, 3);
        if (!detail::blank(line)) {
            header_line = line;
            break;
        }
    }
    if (header_line.empty())
        throw InputError("input is empty; expected a header row", line_no);
    header = detail::split(header_line);

    ScoreTable table;
    std::ptrdiff_t label_col = -1;
    std::vector<std::size_t> score_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].empty())
            throw InputError("empty column name in header", line_no);
        for (std::size_t j = 0; j < i; ++j)
            if (header[j] == header[i])
                throw InputError("duplicate column name '" + std::string(header[i]) + "'", line_no);
        if (header[i] == "label") {
            label_col = static_cast<std::ptrdiff_t>(i);
        } else {
            score_cols.push_back(i);
            table.columns.push_back({std::string(header[i]), {}});
        }
    }
    if (label_col < 0)
        throw InputError("header has no 'label' column", line_no);
    if (score_cols.empty())
        throw InputError("header has no score columns", line_no);

    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank(line))
            continue;
        const auto fields = detail::split(line);
        if (fields.size() != header.size())
            throw InputError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        const auto label = fields[static_cast<std::size_t>(label_col)];
        if (label.empty())
            throw InputError("missing value in column 'label'", line_no);
        if (label == "0")
            table.labels.push_back(0);
        else if (label == "1")
            table.labels.push_back(1);
        else
            throw InputError("label must be 0 or 1, found '" + std::string(label) + "'", line_no);
        for (std::size_t k = 0; k < score_cols.size(); ++k) {
            const auto field = fields[score_cols[k]];
            if (field.empty())
                throw InputError("missing value in column '" + table.columns[k].name + "'", line_no);
            double v = 0.0;
            if (!detail::parse_double(field, v))
                throw InputError("cannot parse '" + std::string(field) + "' in column '" + table.columns[k].name +
                                     "' as a number",
                                 line_no);
            if (!std::isfinite(v))
                throw InputError("non-finite score in column '" + table.columns[k].name + "'", line_no);
            table.columns[k].values.push_back(v);
        }
    }
    if (table.labels.empty())
        throw InputError("input has a header but no data rows", line_no);
    return table;
}

inline ScoreTable read_score_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open input file '" + path + "'");
    return read_score_table(in);
}

/// Grid points of a tabulated weight file. Construction of the weight itself
/// (grid size, mass) is left to TabulatedWeight.
inline std::vector<GridPoint> read_weight_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<GridPoint> pts;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank(line))
            continue;
        const auto fields = detail::split(line);
        if (!have_header) {
            if (fields.size() != 2 || fields[0] != "c" || fields[1] != "density")
                throw InputError("weight table header must be 'c,density'", line_no);
            have_header = true;
            continue;
        }
        if (fields.size() != 2)
            throw InputError("weight table rows need exactly two fields", line_no);
        GridPoint p{};
        if (!detail::parse_double(fields[0], p.c) || !detail::parse_double(fields[1], p.density))
            throw InputError("cannot parse weight table row", line_no);
        if (!(p.c > 0.0 && p.c < 1.0))
            throw InputError("c must lie inside (0, 1)", line_no);
        if (!pts.empty() && !(p.c > pts.back().c))
            throw InputError("c must be strictly increasing", line_no);
        if (!std::isfinite(p.density) || p.density < 0.0)
            throw InputError("density must be finite and nonnegative", line_no);
        pts.push_back(p);
    }
    if (pts.empty())
        throw InputError("weight table has no rows");
    return pts;
}

inline std::vector<GridPoint> read_weight_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open weight file '" + path + "'");
    return read_weight_table(in);
}

inline void write_weight_table(std::ostream& out, std::span<const GridPoint> pts) {
    out.precision(17);
    out << "c,density\n";
    for (const auto& p : pts)
        out << p.c << ',' << p.density << '\n';
}

/// FNV-1a over labels, column names and the bit patterns of every score.
inline std::uint64_t fingerprint(const ScoreTable& t) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (int l : t.labels) {
        const unsigned char b = static_cast<unsigned char>(l);
        feed(&b, 1);
    }
    for (const auto& c : t.columns) {
        feed(c.name.data(), c.name.size());
        const unsigned char sep = 0;
        feed(&sep, 1);
        for (double v : c.values)
            feed(&v, sizeof v);
    }
    return h;
}

} // namespace hmeasure::io
