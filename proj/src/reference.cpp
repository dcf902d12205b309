#include "nowcast/reference.hpp"

#include "nowcast/errors.hpp"
#include "nowcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nowcast::reference {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double abs_dev_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end()); // canonical accumulation order
    std::size_t n = v.size();
    double med = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    double s = 0;
    for (double x : v) s += std::abs(x - med);
    return s;
}

} // namespace

std::optional<SplitDecision> best_split(std::span<const double> targets,
                                        const NodeFeatures& features,
                                        std::span<const int> candidate_features,
                                        int min_leaf) {
    int n = static_cast<int>(targets.size());
    if (n < 2) throw NumericError("reference best_split needs at least two residents");
    if (candidate_features.empty())
        throw NumericError("reference best_split needs candidate features");
    if (min_leaf < 1) min_leaf = 1;

    double parent = abs_dev_sum(std::vector<double>(targets.begin(), targets.end()));

    std::vector<int> candidates(candidate_features.begin(), candidate_features.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    bool found = false;
    int best_feature = -1;
    double best_threshold = 0.0, best_total = 0.0;

    for (int j : candidates) {
        std::vector<std::pair<double, int>> order(n);
        for (int i = 0; i < n; ++i) order[i] = {features(i, j), i};
        std::sort(order.begin(), order.end());
        for (int cut = 0; cut < n - 1; ++cut) {
            if (order[cut].first == order[cut + 1].first) continue;
            if (cut + 1 < min_leaf || n - cut - 1 < min_leaf) continue;
            std::vector<double> lo, hi;
            for (int i = 0; i <= cut; ++i) lo.push_back(targets[order[i].second]);
            for (int i = cut + 1; i < n; ++i) hi.push_back(targets[order[i].second]);
            double total = abs_dev_sum(lo) + abs_dev_sum(hi);
            if (!found || total < best_total - kSplitTolerance) {
                found = true;
                best_feature = j;
                best_threshold = 0.5 * (order[cut].first + order[cut + 1].first);
                best_total = total;
            }
        }
    }

    if (!found || !(best_total < parent - kSplitTolerance)) return std::nullopt;

    SplitDecision d;
    d.feature = best_feature;
    d.threshold = best_threshold;
    d.total_mae_after = best_total;
    for (int i = 0; i < n; ++i)
        (features(i, best_feature) <= best_threshold ? d.left : d.right).push_back(i);
    return d;
}

namespace {

int grow(Tree& tree, const DesignMatrix& design, std::vector<int> rows, int depth,
         const ForestParams& params, std::mt19937_64& rng) {
    int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    int n = static_cast<int>(rows.size());
    std::vector<double> targets(n);
    for (int i = 0; i < n; ++i) targets[i] = design.target[rows[i]];
    TreeNode node;
    node.count = n;
    node.value = median_of(targets);
    node.sum_abs_dev = abs_dev_sum(targets);

    bool can_split = depth < params.max_depth && n >= 2 && n >= 2 * params.min_leaf &&
                     node.sum_abs_dev > 0.0;
    if (can_split) {
        int d = design.features();
        std::vector<int> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        int k = std::clamp(static_cast<int>(std::ceil(params.feature_fraction * d - 1e-9)), 1, d);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<int> candidates(pool.begin(), pool.begin() + k);
        std::sort(candidates.begin(), candidates.end());

        auto split = reference::best_split(targets, NodeFeatures(design.columns, rows), candidates,
                                params.min_leaf);
        if (split) {
            node.feature = split->feature;
            node.threshold = split->threshold;
            std::vector<int> left_rows, right_rows;
            for (int i : split->left) left_rows.push_back(rows[i]);
            for (int i : split->right) right_rows.push_back(rows[i]);
            node.left = grow(tree, design, std::move(left_rows), depth + 1, params, rng);
            node.right = grow(tree, design, std::move(right_rows), depth + 1, params, rng);
        }
    }

    tree.nodes[idx] = node;
    return idx;
}

} // namespace

Tree fit_tree(const DesignMatrix& design, std::span<const int> rows,
              const ForestParams& params, std::mt19937_64& rng) {
    if (rows.empty()) throw NumericError("reference fit_tree: empty in-bag set");
    params.validate();
    Tree tree;
    grow(tree, design, std::vector<int>(rows.begin(), rows.end()), 0, params, rng);
    return tree;
}

Forest fit_forest(const DesignMatrix& design, const ForestParams& params) {
    params.validate();
    int n = design.rows();
    if (n < kMinFitRows)
        throw DataError("reference fit_forest needs at least " + std::to_string(kMinFitRows) +
                        " rows");
    Forest forest;
    forest.params = params;
    forest.feature_names = design.feature_names;
    for (int t = 0; t < params.n_trees; ++t) {
        auto rng = make_rng(params.seed, static_cast<std::uint64_t>(t));
        std::vector<int> rows(n);
        if (params.bootstrap) {
            std::uniform_int_distribution<int> pick(0, n - 1);
            for (int i = 0; i < n; ++i) rows[i] = pick(rng);
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        forest.in_bag.push_back(rows);
        forest.trees.push_back(reference::fit_tree(design, rows, params, rng));
    }
    return forest;
}

} // namespace nowcast::reference
