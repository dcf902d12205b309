#include "nowcast/stats.hpp"

#include "nowcast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nowcast {

double mean(std::span<const double> v) {
    if (v.empty()) throw NumericError("mean of empty vector");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_sorted(std::span<const double> sorted) {
    if (sorted.empty()) throw NumericError("median of empty vector");
    std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return median_sorted(v);
}

double sum_abs_dev(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    double med = median_sorted(s), out = 0;
    for (double x : s) out += std::abs(x - med);
    return out;
}

double mae(std::span<const double> predictions, std::span<const double> observed) {
    if (predictions.size() != observed.size())
        throw NumericError("mae: length mismatch");
    if (predictions.empty()) throw NumericError("mae: empty input");
    double s = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        s += std::abs(predictions[i] - observed[i]);
    return s / static_cast<double>(predictions.size());
}

} // namespace nowcast
