#include "nowcast/errors.hpp"
#include "nowcast/forest.hpp"

#include <json.hpp>

#include <fstream>

namespace nowcast {

namespace {

using nlohmann::json;

json node_to_json(const Tree& tree, int idx) {
    const TreeNode& nd = tree.nodes.at(idx);
    json j;
    j["count"] = nd.count;
    j["sum_abs_dev"] = nd.sum_abs_dev;
    j["value"] = nd.value;
    if (!nd.is_leaf()) {
        j["feature"] = nd.feature;
        j["threshold"] = nd.threshold;
        j["left"] = node_to_json(tree, nd.left);
        j["right"] = node_to_json(tree, nd.right);
    }
    return j;
}

int node_from_json(const json& j, Tree& tree) {
    int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode nd;
    nd.count = j.at("count").get<int>();
    nd.sum_abs_dev = j.at("sum_abs_dev").get<double>();
    nd.value = j.at("value").get<double>();
    if (j.contains("feature")) {
        nd.feature = j.at("feature").get<int>();
        nd.threshold = j.at("threshold").get<double>();
        nd.left = node_from_json(j.at("left"), tree);
        nd.right = node_from_json(j.at("right"), tree);
    }
    tree.nodes[idx] = nd;
    return idx;
}

std::string aggregation_name(Aggregation a) {
    return a == Aggregation::median ? "median" : "mean";
}

Aggregation aggregation_from(const std::string& s) {
    if (s == "median") return Aggregation::median;
    if (s == "mean") return Aggregation::mean;
    throw DataError("unknown aggregation '" + s + "'");
}

} // namespace

std::string forest_to_json(const Forest& forest, int indent) {
    json j;
    j["format"] = "nowcast-forest-v1";
    j["params"] = {{"n_trees", forest.params.n_trees},
                   {"max_depth", forest.params.max_depth},
                   {"feature_fraction", forest.params.feature_fraction},
                   {"min_leaf", forest.params.min_leaf},
                   {"bootstrap", forest.params.bootstrap},
                   {"aggregation", aggregation_name(forest.params.aggregation)},
                   {"seed", forest.params.seed}};
    j["feature_names"] = forest.feature_names;
    json trees = json::array();
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        json entry;
        entry["in_bag"] = forest.in_bag.at(t);
        entry["root"] = node_to_json(forest.trees[t], 0);
        trees.push_back(std::move(entry));
    }
    j["trees"] = std::move(trees);
    return j.dump(indent);
}

Forest forest_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("forest JSON parse error: ") + e.what());
    }
    if (j.value("format", "") != "nowcast-forest-v1")
        throw DataError("not a nowcast forest file");
    Forest f;
    const json& p = j.at("params");
    f.params.n_trees = p.at("n_trees").get<int>();
    f.params.max_depth = p.at("max_depth").get<int>();
    f.params.feature_fraction = p.at("feature_fraction").get<double>();
    f.params.min_leaf = p.at("min_leaf").get<int>();
    f.params.bootstrap = p.at("bootstrap").get<bool>();
    f.params.aggregation = aggregation_from(p.at("aggregation").get<std::string>());
    f.params.seed = p.at("seed").get<std::uint64_t>();
    f.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const json& entry : j.at("trees")) {
        Tree tree;
        node_from_json(entry.at("root"), tree);
        f.trees.push_back(std::move(tree));
        f.in_bag.push_back(entry.at("in_bag").get<std::vector<int>>());
    }
    if (static_cast<int>(f.trees.size()) != f.params.n_trees)
        throw DataError("forest file tree count does not match params.n_trees");
    return f;
}

void save_forest(const Forest& forest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << forest_to_json(forest, 1) << '\n';
}

Forest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return forest_from_json(text);
}

} // namespace nowcast
