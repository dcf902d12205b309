#pragma once

#include "nowcast/month.hpp"

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace nowcast {

using Cell = std::optional<double>;

// Monthly-dated table of named numeric columns with missing cells allowed.
// Months are consecutive by construction (stored as start month + length).
class SeriesFrame {
public:
    SeriesFrame() = default;
    SeriesFrame(Month start, int n_months);

    int rows() const { return rows_; }
    Month start() const { return start_; }
    Month month_at(int row) const;
    // Row index of `m`, or -1 when outside the frame.
    int index_of(Month m) const;

    const std::vector<std::string>& column_names() const { return names_; }
    bool has_column(const std::string& name) const { return index_.count(name) > 0; }
    int column_index(const std::string& name) const; // throws DataError when absent
    int columns() const { return static_cast<int>(names_.size()); }

    void add_column(const std::string& name, std::vector<Cell> values);

    // All cell reads go through these accessors; present values are reported
    // to the access hook, which is how the backtest look-ahead audit observes
    // every number the pipeline consumes.
    Cell value(int col, int row) const;
    Cell value(const std::string& name, int row) const;

    void set_value(int col, int row, Cell v);
    void set_value(const std::string& name, int row, Cell v);

    // Copy of the first rows up to and including `last` (via value(), so the
    // hook sees the copy). `blank_at_last` names a column whose cell at
    // `last` is dropped -- the backtest uses it to censor the target's source.
    SeriesFrame truncated(Month last, const std::string& blank_at_last = "") const;

    using AccessHook = std::function<void(const std::string& column, int row)>;
    void set_access_hook(AccessHook hook) { hook_ = std::move(hook); }
    void clear_access_hook() { hook_ = nullptr; }

    bool same_cells(const SeriesFrame& other) const; // months + names + cells

private:
    Month start_{};
    int rows_ = 0;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<Cell>> cols_;
    AccessHook hook_;
};

} // namespace nowcast
