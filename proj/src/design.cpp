#include "nowcast/design.hpp"

#include "nowcast/errors.hpp"
#include "nowcast/rng.hpp"
#include "nowcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace nowcast {

std::vector<double> DesignMatrix::row(int r) const {
    std::vector<double> out(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) out[c] = columns[c][r];
    return out;
}

int DesignMatrix::feature_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    return it == feature_names.end() ? -1 : static_cast<int>(it - feature_names.begin());
}

std::string lag_label(const std::string& var, int lag) {
    return lag == 0 ? var + "_t" : var + "_t-" + std::to_string(lag);
}

DesignMatrix build_design(const SeriesFrame& frame, const std::string& target,
                          const LagSpec& lags, DesignMode mode, bool impute) {
    if (!frame.has_column(target)) throw DataError("target column '" + target + "' not in frame");

    int max_lag = 0;
    std::set<std::string> seen;
    for (const auto& [var, ks] : lags) {
        if (!frame.has_column(var)) throw DataError("lagged column '" + var + "' not in frame");
        if (!seen.insert(var).second) throw DataError("column '" + var + "' listed twice in lag spec");
        if (ks.empty()) throw DataError("empty lag set for '" + var + "'");
        for (int k : ks) {
            if (k < 0) throw DataError("negative lag for '" + var + "'");
            if (k == 0 && mode == DesignMode::forecast)
                throw DataError("forecast mode requires lags >= 1, got lag 0 for '" + var + "'");
            if (k == 0 && var == target)
                throw DataError("the target requires lags >= 1, got lag 0");
            max_lag = std::max(max_lag, k);
        }
    }

    int tcol = frame.column_index(target);
    std::vector<int> retained;
    for (int r = max_lag; r < frame.rows(); ++r)
        if (frame.value(tcol, r)) retained.push_back(r);
    if (retained.empty())
        throw DataError("design is empty after dropping rows without an observed target");

    DesignMatrix d;
    d.target.reserve(retained.size());
    d.months.reserve(retained.size());
    for (int r : retained) {
        d.target.push_back(*frame.value(tcol, r));
        d.months.push_back(frame.month_at(r));
    }

    for (const auto& [var, ks] : lags) {
        std::vector<int> sorted_ks(ks);
        std::sort(sorted_ks.begin(), sorted_ks.end());
        int col = frame.column_index(var);
        for (int k : sorted_ks) {
            std::vector<Cell> raw(retained.size());
            std::vector<double> present;
            for (std::size_t i = 0; i < retained.size(); ++i) {
                raw[i] = frame.value(col, retained[i] - k);
                if (raw[i]) present.push_back(*raw[i]);
            }
            std::string label = lag_label(var, k);
            double med = 0;
            if (present.size() < raw.size()) {
                if (!impute) {
                    for (std::size_t i = 0; i < raw.size(); ++i)
                        if (!raw[i])
                            throw DataError("missing value for feature '" + label + "' at " +
                                            d.months[i].str() + " (imputation disabled)");
                }
                if (present.empty())
                    throw DataError("feature '" + label + "' has no observed values to impute from");
                med = median(present);
            }
            std::vector<double> vals(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) vals[i] = raw[i] ? *raw[i] : med;
            d.columns.push_back(std::move(vals));
            d.feature_names.push_back(std::move(label));
            d.imputation_medians.push_back(present.size() == raw.size() ? median(present) : med);
        }
    }
    return d;
}

DesignMatrix subset_rows(const DesignMatrix& d, std::span<const int> rows) {
    DesignMatrix out;
    out.feature_names = d.feature_names;
    out.imputation_medians = d.imputation_medians;
    out.target.reserve(rows.size());
    out.months.reserve(rows.size());
    for (int r : rows) {
        out.target.push_back(d.target.at(r));
        out.months.push_back(d.months.at(r));
    }
    out.columns.resize(d.columns.size());
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
        out.columns[c].reserve(rows.size());
        for (int r : rows) out.columns[c].push_back(d.columns[c][r]);
    }
    return out;
}

namespace {

std::vector<int> shuffled_indices(int n, std::uint64_t seed, std::uint64_t stream) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto rng = make_rng(seed, stream);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

} // namespace

std::pair<std::vector<int>, std::vector<int>>
train_test_split(int n, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError("test fraction must be in (0, 1)");
    int test_n = static_cast<int>(std::llround(n * test_fraction));
    if (test_n < 1 || test_n >= n)
        throw DataError("degenerate split: n=" + std::to_string(n) + ", test size " +
                        std::to_string(test_n));
    auto idx = shuffled_indices(n, seed, /*stream=*/0x5917);
    std::vector<int> test(idx.begin(), idx.begin() + test_n);
    std::vector<int> train(idx.begin() + test_n, idx.end());
    std::sort(test.begin(), test.end());
    std::sort(train.begin(), train.end());
    return {train, test};
}

std::pair<std::vector<int>, std::vector<int>>
train_test_split(const DesignMatrix& d, double test_fraction, std::uint64_t seed) {
    return train_test_split(d.rows(), test_fraction, seed);
}

std::vector<std::vector<int>> kfold_partition(int n, int k, std::uint64_t seed) {
    if (k < 2) throw DataError("kfold needs k >= 2");
    if (k > n) throw DataError("kfold needs k <= n, got k=" + std::to_string(k) +
                               ", n=" + std::to_string(n));
    auto idx = shuffled_indices(n, seed, /*stream=*/0xf01d);
    std::vector<std::vector<int>> folds(k);
    int base = n / k, extra = n % k, pos = 0;
    for (int f = 0; f < k; ++f) {
        int size = base + (f < extra ? 1 : 0);
        folds[f].assign(idx.begin() + pos, idx.begin() + pos + size);
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

} // namespace nowcast
