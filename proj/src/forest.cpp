#include "nowcast/forest.hpp"

#include "nowcast/errors.hpp"
#include "nowcast/rng.hpp"
#include "nowcast/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nowcast {

void ForestParams::validate() const {
    if (n_trees < 1) throw DataError("n_trees must be >= 1");
    if (max_depth < 0) throw DataError("max_depth must be >= 0");
    if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
        throw DataError("feature_fraction must be in (0, 1]");
    if (min_leaf < 1) throw DataError("min_leaf must be >= 1");
}

namespace {

// Fenwick tree over rank-compressed target values holding per-rank counts
// and sums; supports "sum of the m smallest elements" in O(log R), which is
// all the median/absolute-deviation bookkeeping the split sweep needs.
class OrderedSums {
public:
    void init(const std::vector<double>& sorted_unique) {
        values_ = &sorted_unique;
        size_ = static_cast<int>(sorted_unique.size());
        cnt_.assign(size_ + 1, 0);
        sum_.assign(size_ + 1, 0.0);
        top_ = 1;
        while (top_ * 2 <= size_) top_ *= 2;
        total_cnt_ = 0;
        total_sum_ = 0.0;
    }

    void clear() {
        std::fill(cnt_.begin(), cnt_.end(), 0);
        std::fill(sum_.begin(), sum_.end(), 0.0);
        total_cnt_ = 0;
        total_sum_ = 0.0;
    }

    // Rebuild from per-rank base counts/sums in O(R).
    void fill(const std::vector<int>& base_cnt, const std::vector<double>& base_sum) {
        total_cnt_ = 0;
        total_sum_ = 0.0;
        for (int i = 1; i <= size_; ++i) {
            cnt_[i] = base_cnt[i - 1];
            sum_[i] = base_sum[i - 1];
            total_cnt_ += base_cnt[i - 1];
            total_sum_ += base_sum[i - 1];
        }
        for (int i = 1; i <= size_; ++i) {
            int j = i + (i & -i);
            if (j <= size_) {
                cnt_[j] += cnt_[i];
                sum_[j] += sum_[i];
            }
        }
    }

    void add(int rank, int dc, double ds) {
        for (int i = rank + 1; i <= size_; i += i & -i) {
            cnt_[i] += dc;
            sum_[i] += ds;
        }
        total_cnt_ += dc;
        total_sum_ += ds;
    }

    int count() const { return total_cnt_; }

    double sum_smallest(int m) const {
        if (m <= 0) return 0.0;
        int pos = 0, remaining = m;
        double acc = 0.0;
        for (int step = top_; step > 0; step >>= 1) {
            int next = pos + step;
            if (next <= size_ && cnt_[next] < remaining) {
                remaining -= cnt_[next];
                acc += sum_[next];
                pos = next;
            }
        }
        return acc + remaining * (*values_)[pos];
    }

    // Sum of absolute deviations around the median of the stored multiset.
    double sad() const {
        int k = total_cnt_;
        if (k <= 1) return 0.0;
        int h = k / 2;
        double bottom = sum_smallest(h);
        double top = total_sum_ - sum_smallest(k - h);
        return top - bottom;
    }

private:
    const std::vector<double>* values_ = nullptr;
    int size_ = 0, top_ = 1;
    std::vector<int> cnt_;
    std::vector<double> sum_;
    int total_cnt_ = 0;
    double total_sum_ = 0.0;
};

} // namespace

std::optional<SplitDecision> best_split(std::span<const double> targets,
                                        const NodeFeatures& features,
                                        std::span<const int> candidate_features,
                                        int min_leaf) {
    int n = static_cast<int>(targets.size());
    if (n < 2) throw NumericError("best_split needs at least two residents");
    if (candidate_features.empty()) throw NumericError("best_split needs candidate features");
    if (features.size() != n) throw NumericError("best_split: feature/target length mismatch");
    if (min_leaf < 1) min_leaf = 1;

    double parent_sad = sum_abs_dev(targets);

    std::vector<int> candidates(candidate_features.begin(), candidate_features.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Rank-compress targets once per node.
    std::vector<double> unique_vals(targets.begin(), targets.end());
    std::sort(unique_vals.begin(), unique_vals.end());
    unique_vals.erase(std::unique(unique_vals.begin(), unique_vals.end()), unique_vals.end());
    int R = static_cast<int>(unique_vals.size());
    std::vector<int> rank(n);
    std::vector<int> base_cnt(R, 0);
    std::vector<double> base_sum(R, 0.0);
    for (int i = 0; i < n; ++i) {
        rank[i] = static_cast<int>(
            std::lower_bound(unique_vals.begin(), unique_vals.end(), targets[i]) -
            unique_vals.begin());
        base_cnt[rank[i]] += 1;
        base_sum[rank[i]] += targets[i];
    }

    OrderedSums left, right;
    left.init(unique_vals);
    right.init(unique_vals);

    bool found = false;
    int best_feature = -1;
    double best_threshold = 0.0, best_total = 0.0;

    std::vector<std::pair<double, int>> order(n);
    for (int j : candidates) {
        if (j < 0 || j >= features.num_features())
            throw NumericError("best_split: candidate feature index out of range");
        for (int i = 0; i < n; ++i) order[i] = {features(i, j), i};
        std::sort(order.begin(), order.end());
        if (order.front().first == order.back().first) continue;

        left.clear();
        right.fill(base_cnt, base_sum);
        for (int i = 0; i < n - 1; ++i) {
            int r = rank[order[i].second];
            double y = targets[order[i].second];
            left.add(r, 1, y);
            right.add(r, -1, -y);
            if (order[i].first == order[i + 1].first) continue;
            if (left.count() < min_leaf || right.count() < min_leaf) continue;
            double total = left.sad() + right.sad();
            if (!found || total < best_total - kSplitTolerance) {
                found = true;
                best_feature = j;
                best_threshold = 0.5 * (order[i].first + order[i + 1].first);
                best_total = total;
            }
        }
    }

    if (!found || !(best_total < parent_sad - kSplitTolerance)) return std::nullopt;

    SplitDecision d;
    d.feature = best_feature;
    d.threshold = best_threshold;
    d.total_mae_after = best_total;
    for (int i = 0; i < n; ++i)
        (features(i, best_feature) <= best_threshold ? d.left : d.right).push_back(i);
    return d;
}

namespace {

struct NodeStats {
    double med = 0.0, sad = 0.0;
};

NodeStats resident_stats(const DesignMatrix& design, std::span<const int> rows) {
    std::vector<double> t(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) t[i] = design.target[rows[i]];
    std::sort(t.begin(), t.end());
    NodeStats s;
    s.med = median_sorted(t);
    for (double y : t) s.sad += std::abs(y - s.med);
    return s;
}

int candidate_count(double fraction, int d) {
    int k = static_cast<int>(std::ceil(fraction * d - 1e-9));
    return std::clamp(k, 1, d);
}

int grow(Tree& tree, const DesignMatrix& design, std::vector<int> rows, int depth,
         const ForestParams& params, std::mt19937_64& rng) {
    int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    int n = static_cast<int>(rows.size());
    NodeStats stats = resident_stats(design, rows);
    TreeNode node;
    node.count = n;
    node.value = stats.med;
    node.sum_abs_dev = stats.sad;

    bool can_split = depth < params.max_depth && n >= 2 && n >= 2 * params.min_leaf &&
                     stats.sad > 0.0;
    if (can_split) {
        int d = design.features();
        std::vector<int> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        int k = candidate_count(params.feature_fraction, d);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<int> candidates(pool.begin(), pool.begin() + k);
        std::sort(candidates.begin(), candidates.end());

        std::vector<double> targets(n);
        for (int i = 0; i < n; ++i) targets[i] = design.target[rows[i]];
        auto split = best_split(targets, NodeFeatures(design.columns, rows), candidates,
                                params.min_leaf);
        if (split) {
            node.feature = split->feature;
            node.threshold = split->threshold;
            std::vector<int> left_rows(split->left.size()), right_rows(split->right.size());
            for (std::size_t i = 0; i < split->left.size(); ++i)
                left_rows[i] = rows[split->left[i]];
            for (std::size_t i = 0; i < split->right.size(); ++i)
                right_rows[i] = rows[split->right[i]];
            rows.clear();
            rows.shrink_to_fit();
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
    if (rows.empty()) throw NumericError("fit_tree: empty in-bag set");
    params.validate();
    Tree tree;
    grow(tree, design, std::vector<int>(rows.begin(), rows.end()), 0, params, rng);
    return tree;
}

Forest fit_forest(const DesignMatrix& design, const ForestParams& params, int n_threads) {
    params.validate();
    int n = design.rows();
    if (n < kMinFitRows)
        throw DataError("fit_forest needs at least " + std::to_string(kMinFitRows) +
                        " rows, got " + std::to_string(n));
    if (design.features() < 1) throw DataError("fit_forest needs at least one feature");

    Forest forest;
    forest.params = params;
    forest.feature_names = design.feature_names;
    forest.trees.resize(params.n_trees);
    forest.in_bag.resize(params.n_trees);

#ifdef _OPENMP
    int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)n_threads;
#endif
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
        forest.in_bag[t] = rows;
        forest.trees[t] = fit_tree(design, rows, params, rng);
    }
    return forest;
}

double predict_tree(const Tree& tree, std::span<const double> row) {
    if (tree.nodes.empty()) throw NumericError("predict_tree: empty tree");
    int idx = 0;
    while (!tree.nodes[idx].is_leaf()) {
        const TreeNode& nd = tree.nodes[idx];
        if (nd.feature >= static_cast<int>(row.size()))
            throw NumericError("predict_tree: row has too few features");
        idx = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[idx].value;
}

double predict_forest(const Forest& forest, std::span<const double> row) {
    if (row.size() != forest.feature_names.size())
        throw NumericError("predict_forest: expected " +
                           std::to_string(forest.feature_names.size()) + " features, got " +
                           std::to_string(row.size()));
    std::vector<double> preds(forest.trees.size());
    for (std::size_t t = 0; t < forest.trees.size(); ++t)
        preds[t] = predict_tree(forest.trees[t], row);
    return forest.params.aggregation == Aggregation::median ? median(std::move(preds))
                                                            : mean(preds);
}

} // namespace nowcast
