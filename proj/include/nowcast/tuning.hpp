#pragma once

#include "nowcast/forest.hpp"

namespace nowcast {

// Grid candidates; the shipped defaults bracket the published configuration
// (500 trees, depth 15, 30% features).
struct TuneGrid {
    std::vector<int> n_trees{100, 300, 500};
    std::vector<int> max_depth{5, 10, 15, 20};
    std::vector<double> feature_fraction{0.30};
    std::vector<int> min_leaf{1, 5};
    int folds = 10;
    std::uint64_t seed = 0;
    ForestParams base; // bootstrap/aggregation defaults for every configuration
};

struct TuneEntry {
    ForestParams params;
    std::vector<double> fold_mae;
    double mean_mae = 0.0;
};

struct TuneReport {
    std::vector<TuneEntry> entries; // grid enumeration order
    int winner = -1;

    const ForestParams& best() const { return entries.at(winner).params; }
};

// K-fold cross-validated MAE for every configuration; one fold partition,
// derived from grid.seed, is shared across configurations. Winner minimizes
// the mean CV MAE; exact ties go to fewer trees, then shallower depth.
TuneReport grid_search(const DesignMatrix& design, const TuneGrid& grid, int n_threads = 0);

} // namespace nowcast
