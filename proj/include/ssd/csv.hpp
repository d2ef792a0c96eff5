// Minimal CSV reading/writing used by the data loaders and output writers.
// The file formats handled here are plain comma-separated tables without
// quoting or embedded commas.

#pragma once

#include <string>
#include <vector>

namespace ssd::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // cells, trimmed
    std::string path;                            // for error messages
};

// Reads the whole file; first line is the header. Throws DataError on
// missing file or ragged rows (rows are padded only if shorter than header
// by trailing empties; longer rows are an error).
Table read_file(const std::string& path);

std::string trim(const std::string& s);

// Strict numeric parse; throws DataError naming file/line on failure.
double parse_double(const std::string& cell, const std::string& file, size_t line);

// Fixed, locale-independent float formatting (shortest round-trippable is
// not needed; 12 significant digits keeps outputs byte-stable).
std::string format_double(double v);

// Validates YYYY-MM-DD layout (digits and dashes only, plausible ranges).
bool is_iso_date(const std::string& s);

}  // namespace ssd::csv
