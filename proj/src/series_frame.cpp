#include "nowcast/series_frame.hpp"

#include "nowcast/errors.hpp"

namespace nowcast {

SeriesFrame::SeriesFrame(Month start, int n_months) : start_(start), rows_(n_months) {
    if (n_months <= 0) throw DataError("SeriesFrame needs at least one month");
}

Month SeriesFrame::month_at(int row) const {
    if (row < 0 || row >= rows_) throw DataError("month_at: row out of range");
    return start_.plus(row);
}

int SeriesFrame::index_of(Month m) const {
    int k = m.since(start_);
    return (k >= 0 && k < rows_) ? k : -1;
}

int SeriesFrame::column_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown column '" + name + "'");
    return it->second;
}

void SeriesFrame::add_column(const std::string& name, std::vector<Cell> values) {
    if (index_.count(name)) throw DataError("duplicate column '" + name + "'");
    if (static_cast<int>(values.size()) != rows_)
        throw DataError("column '" + name + "' has " + std::to_string(values.size()) +
                        " values, frame has " + std::to_string(rows_) + " months");
    index_[name] = static_cast<int>(names_.size());
    names_.push_back(name);
    cols_.push_back(std::move(values));
}

Cell SeriesFrame::value(int col, int row) const {
    const Cell& c = cols_.at(col).at(row);
    if (c.has_value() && hook_) hook_(names_[col], row);
    return c;
}

Cell SeriesFrame::value(const std::string& name, int row) const {
    return value(column_index(name), row);
}

void SeriesFrame::set_value(int col, int row, Cell v) {
    cols_.at(col).at(row) = v;
}

void SeriesFrame::set_value(const std::string& name, int row, Cell v) {
    set_value(column_index(name), row, v);
}

SeriesFrame SeriesFrame::truncated(Month last, const std::string& blank_at_last) const {
    int end = index_of(last);
    if (end < 0) throw DataError("truncated: month " + last.str() + " outside frame");
    SeriesFrame out(start_, end + 1);
    for (int c = 0; c < columns(); ++c) {
        std::vector<Cell> vals(end + 1);
        for (int r = 0; r <= end; ++r) {
            if (r == end && names_[c] == blank_at_last) continue;
            vals[r] = value(c, r);
        }
        out.add_column(names_[c], std::move(vals));
    }
    return out;
}

bool SeriesFrame::same_cells(const SeriesFrame& other) const {
    if (start_ != other.start_ || rows_ != other.rows_ || names_ != other.names_)
        return false;
    return cols_ == other.cols_;
}

} // namespace nowcast
