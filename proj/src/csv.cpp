#include "ssd/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssd/errors.hpp"

namespace ssd::csv {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw DataError("cannot open file: " + path);
    Table t;
    t.path = path;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (lineno == 1) {
            t.header = cells;
            continue;
        }
        if (cells.size() > t.header.size())
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": row has more cells than header");
        cells.resize(t.header.size());
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw DataError(path + ": empty file");
    return t;
}

double parse_double(const std::string& cell, const std::string& file, size_t line) {
    try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw DataError(file + ":" + std::to_string(line) + ": bad number '" + cell + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    int m = std::stoi(s.substr(5, 2));
    int d = std::stoi(s.substr(8, 2));
    return m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

}  // namespace ssd::csv
