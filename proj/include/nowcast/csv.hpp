#pragma once

#include "nowcast/series_frame.hpp"

#include <string>
#include <vector>

namespace nowcast {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

// Minimal CSV layer shared by every reader/writer in the project: UTF-8,
// comma-separated, one header row, "." decimals, empty string = missing.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv_table(const std::string& path);
void write_csv_table(const CsvTable& table, const std::string& path);

// Monthly panel reader: first column "date" in YYYY-MM, consecutive months,
// numeric or empty cells. Errors name the offending data row (1-based,
// header excluded) and column.
SeriesFrame load_csv(const std::string& path);
void save_csv(const SeriesFrame& frame, const std::string& path);

} // namespace nowcast
