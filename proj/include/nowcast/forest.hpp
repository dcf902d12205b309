#pragma once

#include "nowcast/design.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace nowcast {

enum class Aggregation { median, mean };

struct ForestParams {
    int n_trees = 500;
    int max_depth = 15;
    double feature_fraction = 0.30;
    int min_leaf = 1;
    bool bootstrap = true;
    Aggregation aggregation = Aggregation::median;
    std::uint64_t seed = 0;

    void validate() const;
};

// Flat tree node; feature < 0 marks a leaf. Every node carries the resident
// count, the median of resident targets (`value`) and their sum of absolute
// deviations around it (`sum_abs_dev`), all computed on the in-bag residents.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    int count = 0;
    double sum_abs_dev = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes; // preorder, root at 0
};

struct Forest {
    std::vector<Tree> trees;
    ForestParams params;
    std::vector<std::string> feature_names;
    std::vector<std::vector<int>> in_bag; // per tree, sorted, repeats kept
};

// Chosen split: left child takes rows with feature value <= threshold.
// Index sets are positions into the node's resident arrays.
struct SplitDecision {
    int feature = -1;
    double threshold = 0.0;
    double total_mae_after = 0.0; // sum of the two child absolute-error sums
    std::vector<int> left, right;
};

// Read-only (residents x features) view over column-major storage; an empty
// row set means the identity mapping.
class NodeFeatures {
public:
    explicit NodeFeatures(const std::vector<std::vector<double>>& columns)
        : cols_(&columns) {}
    NodeFeatures(const std::vector<std::vector<double>>& columns, std::span<const int> rows)
        : cols_(&columns), rows_(rows) {}

    double operator()(int i, int j) const {
        return (*cols_)[j][rows_.empty() ? i : rows_[i]];
    }
    int size() const {
        return rows_.empty() ? static_cast<int>((*cols_)[0].size())
                             : static_cast<int>(rows_.size());
    }
    int num_features() const { return static_cast<int>(cols_->size()); }

private:
    const std::vector<std::vector<double>>* cols_;
    std::span<const int> rows_;
};

// Comparisons within this slack are ties; the first candidate in
// (feature index, threshold) order wins a tie.
inline constexpr double kSplitTolerance = 1e-12;

// Best (feature, midpoint-threshold) split of one node by minimal sum of
// child absolute deviations around child medians. Returns nothing when no
// candidate yields two children of size >= min_leaf or none strictly
// improves on the parent.
std::optional<SplitDecision> best_split(std::span<const double> targets,
                                        const NodeFeatures& features,
                                        std::span<const int> candidate_features,
                                        int min_leaf = 1);

// Grows one tree on the given in-bag rows (repeats allowed). Every split
// attempt draws a fresh candidate subset of ceil(feature_fraction * d)
// features from `rng`; draw order is fixed (preorder) so identical streams
// give identical trees.
Tree fit_tree(const DesignMatrix& design, std::span<const int> rows,
              const ForestParams& params, std::mt19937_64& rng);

// Minimum training rows for a forest fit.
inline constexpr int kMinFitRows = 30;

// Fits params.n_trees trees, tree i driven entirely by the substream
// (params.seed, i): bootstrap draw first (when enabled), then per-node
// feature subsets. Bit-identical output for any thread count.
Forest fit_forest(const DesignMatrix& design, const ForestParams& params, int n_threads = 0);

double predict_tree(const Tree& tree, std::span<const double> row);
double predict_forest(const Forest& forest, std::span<const double> row);

std::string forest_to_json(const Forest& forest, int indent = -1);
Forest forest_from_json(const std::string& text);
void save_forest(const Forest& forest, const std::string& path);
Forest load_forest(const std::string& path);

} // namespace nowcast
