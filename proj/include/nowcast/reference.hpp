#pragma once

#include "nowcast/forest.hpp"

namespace nowcast::reference {

// Serial reference implementations of the forest kernels, written as plain
// exhaustive enumeration with no shared code on the hot path. They exist to
// check the Fenwick-based kernels (tests, acceptance suite) and to anchor
// the benchmark; same seeding and tie-break contract, so a reference fit is
// expected to reproduce the fast fit split for split.

std::optional<SplitDecision> best_split(std::span<const double> targets,
                                        const NodeFeatures& features,
                                        std::span<const int> candidate_features,
                                        int min_leaf = 1);

Tree fit_tree(const DesignMatrix& design, std::span<const int> rows,
              const ForestParams& params, std::mt19937_64& rng);

Forest fit_forest(const DesignMatrix& design, const ForestParams& params);

} // namespace nowcast::reference
