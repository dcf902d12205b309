#include "nowcast/csv.hpp"

#include "nowcast/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nowcast {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    t.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != t.header.size())
            throw DataError("'" + path + "': row " + std::to_string(t.rows.size() + 1) +
                            " has " + std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_csv_table(const CsvTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& r : table.rows) emit(r);
}

SeriesFrame load_csv(const std::string& path) {
    CsvTable t = read_csv_table(path);
    if (t.header.empty() || t.header[0] != "date")
        throw DataError("'" + path + "': first header must be 'date'");
    std::set<std::string> seen;
    for (std::size_t c = 1; c < t.header.size(); ++c)
        if (!seen.insert(t.header[c]).second)
            throw DataError("'" + path + "': duplicate header '" + t.header[c] + "'");
    if (t.rows.empty()) throw DataError("'" + path + "' has no data rows");

    std::vector<Month> months(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        try {
            months[r] = Month::parse(t.rows[r][0]);
        } catch (const DataError& e) {
            throw DataError("'" + path + "' row " + std::to_string(r + 1) + ": " + e.what());
        }
        if (r > 0 && months[r] != months[r - 1].next())
            throw DataError("'" + path + "': month gap at row " + std::to_string(r + 1) +
                            " (" + months[r - 1].str() + " followed by " + months[r].str() + ")");
    }

    SeriesFrame frame(months[0], static_cast<int>(months.size()));
    for (std::size_t c = 1; c < t.header.size(); ++c) {
        std::vector<Cell> vals(t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& s = t.rows[r][c];
            if (s.empty()) continue;
            const char* begin = s.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end != begin + s.size())
                throw DataError("'" + path + "': non-numeric cell \"" + s + "\" at row " +
                                std::to_string(r + 1) + ", column '" + t.header[c] + "'");
            vals[r] = v;
        }
        frame.add_column(t.header[c], std::move(vals));
    }
    return frame;
}

void save_csv(const SeriesFrame& frame, const std::string& path) {
    CsvTable t;
    t.header.push_back("date");
    for (const auto& n : frame.column_names()) t.header.push_back(n);
    for (int r = 0; r < frame.rows(); ++r) {
        std::vector<std::string> row;
        row.push_back(frame.month_at(r).str());
        for (int c = 0; c < frame.columns(); ++c) {
            Cell v = frame.value(c, r);
            row.push_back(v ? format_double(*v) : "");
        }
        t.rows.push_back(std::move(row));
    }
    write_csv_table(t, path);
}

} // namespace nowcast
