#pragma once

#include <span>
#include <vector>

namespace nowcast {

double mean(std::span<const double> v);

// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> v);

// Median with the even-length rule used throughout: arithmetic mean of the
// two middle values. `median_sorted` requires ascending input.
double median_sorted(std::span<const double> sorted);
double median(std::vector<double> v); // copies and sorts

// Sum of |x - median(x)| -- the node impurity of the forest.
double sum_abs_dev(std::span<const double> v);

// Mean absolute error between equal-length prediction/observation vectors.
double mae(std::span<const double> predictions, std::span<const double> observed);

} // namespace nowcast
