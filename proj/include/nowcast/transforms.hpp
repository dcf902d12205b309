#pragma once

#include "nowcast/series_frame.hpp"

#include <string>
#include <vector>

namespace nowcast {

enum class TransformKind { level, pct_change_monthly, pct_change_monthly_ma3, diff };

TransformKind transform_kind_from_string(const std::string&);
std::string to_string(TransformKind);

// One output column derived from one source column.
struct TransformSpec {
    std::string source;
    TransformKind kind = TransformKind::level;
    std::string output;
};

// Applies each spec and returns a frame holding exactly the output columns,
// in spec order. pct change is 100*(x_t/x_{t-1} - 1) with a missing first
// month; the _ma3 variant is its 3-month mean (first three months missing);
// diff is x_t - x_{t-1}. Missing inputs and zero denominators yield missing
// outputs, never errors.
SeriesFrame apply_transforms(const SeriesFrame& frame, const std::vector<TransformSpec>& specs);

} // namespace nowcast
