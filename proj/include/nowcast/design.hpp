#pragma once

#include "nowcast/series_frame.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nowcast {

enum class DesignMode { nowcast, forecast };

// Ordered per-variable lag sets; order fixes the feature-column layout.
using LagSpec = std::vector<std::pair<std::string, std::vector<int>>>;

// Fully numeric training table: target vector plus a column-major feature
// matrix with lag-tagged names ("<var>_t", "<var>_t-<k>").
struct DesignMatrix {
    std::vector<double> target;
    std::vector<std::vector<double>> columns; // d columns of length N
    std::vector<std::string> feature_names;
    std::vector<Month> months;
    std::vector<double> imputation_medians; // per feature, from build_design

    int rows() const { return static_cast<int>(target.size()); }
    int features() const { return static_cast<int>(columns.size()); }
    double at(int row, int col) const { return columns[col][row]; }
    std::vector<double> row(int r) const;
    int feature_index(const std::string& name) const; // -1 when absent
};

std::string lag_label(const std::string& var, int lag);

// One row per month with an observed target and full lag coverage; missing
// feature cells are imputed with the column median over retained rows
// (impute=false turns any missing cell into an error instead).
DesignMatrix build_design(const SeriesFrame& frame, const std::string& target,
                          const LagSpec& lags, DesignMode mode, bool impute = true);

DesignMatrix subset_rows(const DesignMatrix& d, std::span<const int> rows);

// Disjoint, exhaustive (train, test) row-index sets; test size round(N*fraction).
std::pair<std::vector<int>, std::vector<int>>
train_test_split(int n, double test_fraction, std::uint64_t seed);
std::pair<std::vector<int>, std::vector<int>>
train_test_split(const DesignMatrix& d, double test_fraction, std::uint64_t seed);

// k disjoint, exhaustive folds with sizes differing by at most one.
std::vector<std::vector<int>> kfold_partition(int n, int k, std::uint64_t seed);

} // namespace nowcast
