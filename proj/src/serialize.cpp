#include "emdscale/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "emdscale/errors.hpp"

namespace emdscale {

namespace {

std::string cell_to_string(const Cell& c, bool full_precision) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    const double v = std::get<double>(c);
    return full_precision ? format_full(v) : format_human(v);
}

void check_shape(const Table& t) {
    for (const auto& row : t.rows) {
        if (row.size() != t.headers.size()) {
            throw ArgumentError("table row width " + std::to_string(row.size()) +
                                " does not match header width " +
                                std::to_string(t.headers.size()));
        }
    }
}

void write_text(std::ostream& os, const Table& t) {
    const std::size_t ncols = t.headers.size();
    std::vector<std::vector<std::string>> cells(t.rows.size());
    std::vector<std::size_t> width(ncols);
    std::vector<bool> numeric(ncols, true);
    for (std::size_t c = 0; c < ncols; ++c) width[c] = t.headers[c].size();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        cells[r].reserve(ncols);
        for (std::size_t c = 0; c < ncols; ++c) {
            cells[r].push_back(cell_to_string(t.rows[r][c], false));
            width[c] = std::max(width[c], cells[r][c].size());
            if (std::holds_alternative<std::string>(t.rows[r][c])) {
                numeric[c] = false;
            }
        }
    }
    auto put = [&](const std::string& s, std::size_t c) {
        const std::string pad(width[c] - s.size(), ' ');
        if (numeric[c]) {
            os << pad << s;
        } else {
            os << s << pad;
        }
    };
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c > 0) os << "  ";
        put(t.headers[c], c);
    }
    os << '\n';
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c > 0) os << "  ";
            put(row[c], c);
        }
        os << '\n';
    }
}

void write_delimited(std::ostream& os, const Table& t, char delimiter) {
    for (std::size_t c = 0; c < t.headers.size(); ++c) {
        if (c > 0) os << delimiter;
        os << csv_escape(t.headers[c], delimiter);
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << delimiter;
            os << csv_escape(cell_to_string(row[c], true), delimiter);
        }
        os << '\n';
    }
}

void write_structured(std::ostream& os, const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Cell& cell = row[c];
            if (const auto* s = std::get_if<std::string>(&cell)) {
                obj[t.headers[c]] = *s;
            } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
                obj[t.headers[c]] = *i;
            } else {
                obj[t.headers[c]] = std::get<double>(cell);
            }
        }
        rows.push_back(std::move(obj));
    }
    os << rows.dump(2) << '\n';
}

} // namespace

TableFormat parse_table_format(const std::string& name) {
    if (name == "text-table") return TableFormat::text;
    if (name == "delimited") return TableFormat::delimited;
    if (name == "structured") return TableFormat::structured;
    throw ArgumentError("unknown output format '" + name +
                        "' (expected text-table, delimited, or structured)");
}

std::string table_format_extension(TableFormat fmt) {
    switch (fmt) {
    case TableFormat::text: return "txt";
    case TableFormat::delimited: return "csv";
    case TableFormat::structured: return "json";
    }
    throw ArgumentError("bad table format");
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_human(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string csv_escape(const std::string& field, char delimiter) {
    const bool needs = field.find(delimiter) != std::string::npos ||
                       field.find('"') != std::string::npos ||
                       field.find('\n') != std::string::npos ||
                       field.find('\r') != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_table(std::ostream& os, const Table& t, TableFormat fmt,
                 char delimiter) {
    check_shape(t);
    switch (fmt) {
    case TableFormat::text: write_text(os, t); return;
    case TableFormat::delimited: write_delimited(os, t, delimiter); return;
    case TableFormat::structured: write_structured(os, t); return;
    }
}

void write_pairs(std::ostream& os,
                 std::span<const std::pair<double, double>> points,
                 const std::string& x_name, const std::string& y_name) {
    os << csv_escape(x_name, ',') << ',' << csv_escape(y_name, ',') << '\n';
    for (const auto& [x, y] : points) {
        os << format_full(x) << ',' << format_full(y) << '\n';
    }
}

void write_decomposition_matrix(std::ostream& os, const Decomposition& d) {
    for (std::size_t k = 0; k < d.imfs.size(); ++k) {
        os << "imf_" << (k + 1) << ',';
    }
    os << "residue\n";
    const std::size_t n = d.residue.size();
    for (std::size_t t = 0; t < n; ++t) {
        for (const Imf& imf : d.imfs) {
            os << format_full(imf.values[t]) << ',';
        }
        os << format_full(d.residue[t]) << '\n';
    }
}

} // namespace emdscale
