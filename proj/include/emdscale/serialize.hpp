#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emdscale/emd.hpp"

namespace emdscale {

// text: aligned human-readable columns, reals at 3 decimals.
// delimited: CSV at 17 significant digits, round-trip safe.
// structured: JSON array of row objects.
enum class TableFormat {
    text,
    delimited,
    structured,
};

// Accepts "text-table", "delimited", "structured". Throws ArgumentError.
TableFormat parse_table_format(const std::string& name);

// File extension (without dot) conventional for the format.
std::string table_format_extension(TableFormat fmt);

using Cell = std::variant<std::string, std::int64_t, double>;

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<Cell>> rows;
};

std::string format_full(double v);  // 17 significant digits
std::string format_human(double v); // fixed 3 decimals

// RFC-4180 style quoting, applied only when the field needs it.
std::string csv_escape(const std::string& field, char delimiter);

// Every row must match the header width.
void write_table(std::ostream& os, const Table& t, TableFormat fmt,
                 char delimiter = ',');

// Plot-ready two-column file: a comment-free CSV header then one x,y pair
// per line at full precision.
void write_pairs(std::ostream& os,
                 std::span<const std::pair<double, double>> points,
                 const std::string& x_name, const std::string& y_name);

// The component matrix, one row per sample: imf_1..imf_n then residue,
// CSV at full precision regardless of the table format in use.
void write_decomposition_matrix(std::ostream& os, const Decomposition& d);

} // namespace emdscale
