#include "nowcast/tuning.hpp"

#include "nowcast/errors.hpp"
#include "nowcast/rng.hpp"
#include "nowcast/stats.hpp"

#include <algorithm>

namespace nowcast {

TuneReport grid_search(const DesignMatrix& design, const TuneGrid& grid, int n_threads) {
    if (grid.n_trees.empty() || grid.max_depth.empty() || grid.feature_fraction.empty() ||
        grid.min_leaf.empty())
        throw DataError("grid_search: empty candidate set");
    if (grid.folds < 2) throw DataError("grid_search: folds must be >= 2");
    if (design.rows() < grid.folds)
        throw DataError("grid_search: design has fewer rows than folds");

    auto sorted = [](auto v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    auto trees = sorted(grid.n_trees);
    auto depths = sorted(grid.max_depth);
    auto fractions = sorted(grid.feature_fraction);
    auto leaves = sorted(grid.min_leaf);

    TuneReport report;
    for (int nt : trees)
        for (int md : depths)
            for (double ff : fractions)
                for (int ml : leaves) {
                    ForestParams p = grid.base;
                    p.n_trees = nt;
                    p.max_depth = md;
                    p.feature_fraction = ff;
                    p.min_leaf = ml;
                    report.entries.push_back({p, {}, 0.0});
                }

    auto folds = kfold_partition(design.rows(), grid.folds, grid.seed);
    std::vector<std::vector<int>> train_rows(grid.folds);
    for (int f = 0; f < grid.folds; ++f) {
        for (int g = 0; g < grid.folds; ++g)
            if (g != f)
                train_rows[f].insert(train_rows[f].end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows[f].begin(), train_rows[f].end());
    }

    int n_configs = static_cast<int>(report.entries.size());
    std::vector<double> cell_mae(static_cast<std::size_t>(n_configs) * grid.folds);

#pragma omp parallel for schedule(dynamic) collapse(2) if (n_threads != 1)
    for (int c = 0; c < n_configs; ++c) {
        for (int f = 0; f < grid.folds; ++f) {
            ForestParams p = report.entries[c].params;
            p.seed = derive_seed(grid.seed, static_cast<std::uint64_t>(c) * 1000003ULL + f);
            DesignMatrix train = subset_rows(design, train_rows[f]);
            Forest forest = fit_forest(train, p, /*n_threads=*/1);
            std::vector<double> pred(folds[f].size()), obs(folds[f].size());
            for (std::size_t i = 0; i < folds[f].size(); ++i) {
                pred[i] = predict_forest(forest, design.row(folds[f][i]));
                obs[i] = design.target[folds[f][i]];
            }
            cell_mae[static_cast<std::size_t>(c) * grid.folds + f] = mae(pred, obs);
        }
    }

    for (int c = 0; c < n_configs; ++c) {
        auto& e = report.entries[c];
        e.fold_mae.assign(cell_mae.begin() + static_cast<std::size_t>(c) * grid.folds,
                          cell_mae.begin() + static_cast<std::size_t>(c + 1) * grid.folds);
        e.mean_mae = mean(e.fold_mae);
    }

    // Enumeration is ascending in (n_trees, max_depth, ...), so keeping the
    // first strict minimum realizes the fewer-trees-then-shallower tie rule.
    report.winner = 0;
    for (int c = 1; c < n_configs; ++c)
        if (report.entries[c].mean_mae < report.entries[report.winner].mean_mae)
            report.winner = c;
    return report;
}

} // namespace nowcast
