#include "emdscale/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "emdscale/errors.hpp"

namespace emdscale {

namespace {

std::string row_prefix(std::size_t line_no) {
    return "row " + std::to_string(line_no) + ": ";
}

bool parse_number(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    out = std::strtod(field.c_str(), &end);
    return end == field.c_str() + field.size();
}

// Days between 1970-01-01 and the given civil date (proleptic Gregorian).
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (to > s.size() || from >= to) return false;
    for (std::size_t i = from; i < to; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

long long digits_to_int(const std::string& s, std::size_t from, std::size_t to) {
    long long v = 0;
    for (std::size_t i = from; i < to; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

// Splits one physical line into fields, honouring double-quoted fields with
// "" as the embedded-quote escape. Returns false on an unterminated quote.
bool split_row(const std::string& line, char delim, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == delim) {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    if (in_quotes) return false;
    out.push_back(std::move(field));
    return true;
}

struct ColumnRef {
    bool is_index = false;
    std::size_t index = 0;
    std::string name;
};

ColumnRef parse_column_ref(const std::string& spec) {
    ColumnRef ref;
    if (!spec.empty() && all_digits(spec, 0, spec.size())) {
        ref.is_index = true;
        ref.index = static_cast<std::size_t>(digits_to_int(spec, 0, spec.size()));
    } else {
        ref.name = spec;
    }
    return ref;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

double parse_timestamp(const std::string& field) {
    double numeric = 0.0;
    if (parse_number(field, numeric)) {
        if (!std::isfinite(numeric)) {
            throw FormatError("timestamp '" + field + "' is not finite");
        }
        return numeric;
    }

    // ISO-8601: date, optionally time with fractional seconds and a Z.
    const std::string s = field;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-' ||
        !all_digits(s, 0, 4) || !all_digits(s, 5, 7) || !all_digits(s, 8, 10)) {
        throw FormatError("cannot parse timestamp '" + field + "'");
    }
    const long long year = digits_to_int(s, 0, 4);
    const long long month = digits_to_int(s, 5, 7);
    const long long day = digits_to_int(s, 8, 10);
    if (month < 1 || month > 12 || day < 1 || day > 31) {
        throw FormatError("timestamp '" + field + "' has an out-of-range date");
    }

    double seconds_of_day = 0.0;
    if (s.size() > 10) {
        if ((s[10] != 'T' && s[10] != 't' && s[10] != ' ') || s.size() < 19 ||
            s[13] != ':' || s[16] != ':' || !all_digits(s, 11, 13) ||
            !all_digits(s, 14, 16) || !all_digits(s, 17, 19)) {
            throw FormatError("cannot parse timestamp '" + field + "'");
        }
        const long long hh = digits_to_int(s, 11, 13);
        const long long mm = digits_to_int(s, 14, 16);
        const long long ss = digits_to_int(s, 17, 19);
        if (hh > 23 || mm > 59 || ss > 60) {
            throw FormatError("timestamp '" + field + "' has an out-of-range time");
        }
        std::size_t pos = 19;
        double frac = 0.0;
        if (pos < s.size() && s[pos] == '.') {
            const std::size_t start = ++pos;
            double scale = 0.1;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                frac += (s[pos] - '0') * scale;
                scale *= 0.1;
                ++pos;
            }
            if (pos == start) {
                throw FormatError("cannot parse timestamp '" + field + "'");
            }
        }
        if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) ++pos;
        if (pos != s.size()) {
            throw FormatError("cannot parse timestamp '" + field + "'");
        }
        seconds_of_day = static_cast<double>(hh * 3600 + mm * 60 + ss) + frac;
    }

    const long long days = days_from_civil(year, static_cast<unsigned>(month),
                                           static_cast<unsigned>(day));
    return static_cast<double>(days) * 86400.0 + seconds_of_day;
}

IngestResult ingest(const IngestionConfig& cfg) {
    if (cfg.timestamp_column == cfg.price_column) {
        throw ArgumentError("timestamp and price columns must differ");
    }
    std::ifstream in(cfg.path);
    if (!in) {
        throw DataError("cannot open '" + cfg.path + "'");
    }

    const ColumnRef ts_ref = parse_column_ref(cfg.timestamp_column);
    const ColumnRef px_ref = parse_column_ref(cfg.price_column);
    const bool needs_header = !ts_ref.is_index || !px_ref.is_index;

    IngestResult result;
    IngestReport& report = result.report;
    std::vector<double>& values = result.signal.values;
    std::vector<double>& times = result.timestamps;

    std::size_t ts_idx = ts_ref.index;
    std::size_t px_idx = px_ref.index;
    bool columns_resolved = !needs_header;
    bool saw_first_row = false;
    bool warned_missing = false;

    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!split_row(line, cfg.delimiter, fields)) {
            throw FormatError(row_prefix(line_no) + "unterminated quoted field");
        }

        if (!saw_first_row) {
            saw_first_row = true;
            if (needs_header) {
                // Named columns: this row must be the header.
                report.header_detected = true;
                auto locate = [&](const ColumnRef& ref) -> std::size_t {
                    if (ref.is_index) return ref.index;
                    for (std::size_t i = 0; i < fields.size(); ++i) {
                        if (trim(fields[i]) == ref.name) return i;
                    }
                    throw FormatError(row_prefix(line_no) + "no column named '" +
                                      ref.name + "' in header");
                };
                ts_idx = locate(ts_ref);
                px_idx = locate(px_ref);
                columns_resolved = true;
                continue;
            }
            // Indexed columns: a first row whose fields do not parse is a
            // header; otherwise it is data and falls through.
            const std::size_t need = std::max(ts_idx, px_idx);
            if (need < fields.size()) {
                double px = 0.0;
                bool ts_ok = true;
                try {
                    parse_timestamp(trim(fields[ts_idx]));
                } catch (const FormatError&) {
                    ts_ok = false;
                }
                if (!ts_ok || !parse_number(trim(fields[px_idx]), px)) {
                    report.header_detected = true;
                    continue;
                }
            }
        }
        (void)columns_resolved;

        ++report.rows_total;
        const std::size_t need = std::max(ts_idx, px_idx);
        std::string ts_field = need < fields.size() ? trim(fields[ts_idx]) : "";
        std::string px_field = need < fields.size() ? trim(fields[px_idx]) : "";
        if (ts_field.empty() || px_field.empty()) {
            ++report.rows_dropped_missing;
            if (!warned_missing) {
                report.warnings.push_back(row_prefix(line_no) +
                                          "missing field, row dropped");
                warned_missing = true;
            }
            continue;
        }

        double ts = 0.0;
        try {
            ts = parse_timestamp(ts_field);
        } catch (const FormatError& e) {
            throw FormatError(row_prefix(line_no) + e.what());
        }
        double price = 0.0;
        if (!parse_number(px_field, price) || !std::isfinite(price)) {
            throw FormatError(row_prefix(line_no) + "cannot parse price '" +
                              px_field + "'");
        }
        if (cfg.apply_log && price <= 0.0) {
            if (!cfg.drop_nonpositive) {
                throw DataError(row_prefix(line_no) + "non-positive price " +
                                px_field + " with log transform enabled");
            }
            ++report.rows_dropped_nonpositive;
            continue;
        }

        times.push_back(ts);
        values.push_back(cfg.apply_log ? std::log(price) : price);
    }

    if (values.empty()) {
        throw DataError("'" + cfg.path + "' contains no usable data rows");
    }
    if (report.rows_dropped_missing > 1) {
        report.warnings.push_back(std::to_string(report.rows_dropped_missing) +
                                  " rows dropped for missing fields in total");
    }
    if (report.rows_dropped_nonpositive > 0) {
        report.warnings.push_back(std::to_string(report.rows_dropped_nonpositive) +
                                  " non-positive prices dropped");
    }

    // Gap census over kept rows. The modal gap becomes the sample interval;
    // ties resolve to the smallest gap. Nothing is resampled.
    std::map<double, std::size_t> gap_counts;
    bool warned_order = false;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double gap = times[i + 1] - times[i];
        if (gap <= 0.0) {
            if (!warned_order) {
                report.warnings.push_back(
                    "timestamps not strictly increasing at data index " +
                    std::to_string(i + 1));
                warned_order = true;
            }
            continue;
        }
        ++gap_counts[gap];
    }
    if (!gap_counts.empty()) {
        report.distinct_gaps = gap_counts.size();
        report.min_gap_seconds = gap_counts.begin()->first;
        report.max_gap_seconds = gap_counts.rbegin()->first;
        auto modal = gap_counts.begin();
        for (auto it = gap_counts.begin(); it != gap_counts.end(); ++it) {
            if (it->second > modal->second) modal = it;
        }
        report.modal_gap_seconds = modal->first;
        result.signal.sample_interval_seconds = modal->first;
        if (report.distinct_gaps > 1) {
            std::ostringstream msg;
            msg << "heterogeneous sampling: " << report.distinct_gaps
                << " distinct gaps in [" << report.min_gap_seconds << ", "
                << report.max_gap_seconds << "] s, modal " << modal->first
                << " s";
            report.warnings.push_back(msg.str());
        }
    }

    result.signal.label = std::filesystem::path(cfg.path).stem().string();
    validate_finite(result.signal);
    return result;
}

} // namespace emdscale
