#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emdscale/signal.hpp"

namespace emdscale {

// Column references accept a zero-based index ("0") or a header name
// ("close"); using a name requires the file to carry a header row.
struct IngestionConfig {
    std::string path;
    std::string timestamp_column = "0";
    std::string price_column = "1";
    char delimiter = ',';
    bool apply_log = true;
    bool drop_nonpositive = false;
};

struct IngestReport {
    std::size_t rows_total = 0; // data rows seen, header excluded
    std::size_t rows_dropped_missing = 0;
    std::size_t rows_dropped_nonpositive = 0;
    bool header_detected = false;
    std::size_t distinct_gaps = 0;
    double min_gap_seconds = 0.0;
    double max_gap_seconds = 0.0;
    std::optional<double> modal_gap_seconds;
    std::vector<std::string> warnings;
};

struct IngestResult {
    Signal signal;
    std::vector<double> timestamps; // epoch seconds, one per kept row
    IngestReport report;
};

// Reads a delimited price file into a Signal in file row order. Prices are
// log-transformed when cfg.apply_log. Rows missing either field are dropped
// and counted; malformed fields raise FormatError naming the row; a
// non-positive price under apply_log raises DataError unless
// cfg.drop_nonpositive. The sample interval is the modal timestamp gap;
// heterogeneous gaps (session breaks, excluded days) are reported, never
// resampled. Timestamps parse as numeric epoch seconds or ISO-8601.
IngestResult ingest(const IngestionConfig& cfg);

// Epoch seconds from "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS[.frac][Z]" (T also
// accepted as the separator), or a plain number. Throws FormatError.
double parse_timestamp(const std::string& field);

} // namespace emdscale
