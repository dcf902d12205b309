#include "nowcast/transforms.hpp"

#include "nowcast/errors.hpp"

#include <set>

namespace nowcast {

TransformKind transform_kind_from_string(const std::string& s) {
    if (s == "level") return TransformKind::level;
    if (s == "pct_change_monthly") return TransformKind::pct_change_monthly;
    if (s == "pct_change_monthly_ma3") return TransformKind::pct_change_monthly_ma3;
    if (s == "diff") return TransformKind::diff;
    throw DataError("unknown transform kind '" + s + "'");
}

std::string to_string(TransformKind k) {
    switch (k) {
    case TransformKind::level: return "level";
    case TransformKind::pct_change_monthly: return "pct_change_monthly";
    case TransformKind::pct_change_monthly_ma3: return "pct_change_monthly_ma3";
    case TransformKind::diff: return "diff";
    }
    throw DataError("invalid transform kind");
}

namespace {

std::vector<Cell> pct_change(const SeriesFrame& f, int col) {
    std::vector<Cell> out(f.rows());
    for (int r = 1; r < f.rows(); ++r) {
        Cell prev = f.value(col, r - 1), cur = f.value(col, r);
        if (!prev || !cur || *prev == 0.0) continue;
        out[r] = 100.0 * (*cur / *prev - 1.0);
    }
    return out;
}

std::vector<Cell> moving_mean3(const std::vector<Cell>& v) {
    std::vector<Cell> out(v.size());
    for (std::size_t r = 2; r < v.size(); ++r) {
        if (!v[r] || !v[r - 1] || !v[r - 2]) continue;
        out[r] = (*v[r] + *v[r - 1] + *v[r - 2]) / 3.0;
    }
    return out;
}

} // namespace

SeriesFrame apply_transforms(const SeriesFrame& frame, const std::vector<TransformSpec>& specs) {
    std::set<std::string> outputs;
    for (const auto& s : specs) {
        if (!frame.has_column(s.source))
            throw DataError("transform source column '" + s.source + "' not in frame");
        if (!outputs.insert(s.output).second)
            throw DataError("duplicate transform output '" + s.output + "'");
    }

    SeriesFrame out(frame.start(), frame.rows());
    for (const auto& s : specs) {
        int col = frame.column_index(s.source);
        std::vector<Cell> vals;
        switch (s.kind) {
        case TransformKind::level: {
            vals.resize(frame.rows());
            for (int r = 0; r < frame.rows(); ++r) vals[r] = frame.value(col, r);
            break;
        }
        case TransformKind::pct_change_monthly:
            vals = pct_change(frame, col);
            break;
        case TransformKind::pct_change_monthly_ma3:
            vals = moving_mean3(pct_change(frame, col));
            break;
        case TransformKind::diff: {
            vals.resize(frame.rows());
            for (int r = 1; r < frame.rows(); ++r) {
                Cell prev = frame.value(col, r - 1), cur = frame.value(col, r);
                if (prev && cur) vals[r] = *cur - *prev;
            }
            break;
        }
        }
        out.add_column(s.output, std::move(vals));
    }
    return out;
}

} // namespace nowcast
