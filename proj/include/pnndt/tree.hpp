#pragma once

// Binary decision trees over numeric features. A split sends x[feature] < q
// left and x[feature] >= q right; leaves carry the artifact frequency
// p = n1 / (n1 + n2) of the training examples that reached them.

#include <pnndt/common.hpp>
#include <pnndt/dataset.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pnndt {

struct TreeNode {
    bool leaf = true;
    // split
    std::size_t feature = 0;
    double q = 0.0;
    std::size_t left = 0, right = 0;
    // leaf
    double p = 0.0;
    std::size_t n1 = 0;  // artifact examples
    std::size_t n2 = 0;  // normal examples
};

/// Flat, copyable tree; node 0 is the root.
class DecisionTree {
public:
    DecisionTree() : nodes_(1) {}

    static DecisionTree leaf(std::size_t n1, std::size_t n2) {
        TreeNode n;
        n.n1 = n1;
        n.n2 = n2;
        n.p = n1 + n2 > 0 ? static_cast<double>(n1) / static_cast<double>(n1 + n2) : 0.0;
        DecisionTree t;
        t.nodes_[0] = n;
        return t;
    }

    static DecisionTree leaf_with_probability(double p, std::size_t n1, std::size_t n2) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("leaf probability must lie in [0,1]");
        auto t = leaf(n1, n2);
        if (n1 + n2 > 0 && std::abs(t.nodes_[0].p - p) > 1e-12)
            throw Error("leaf probability " + std::to_string(p) + " disagrees with counts n1=" + std::to_string(n1) +
                        ", n2=" + std::to_string(n2));
        t.nodes_[0].p = p;
        return t;
    }

    static DecisionTree split(std::size_t feature, double q, const DecisionTree& left, const DecisionTree& right) {
        if (!std::isfinite(q)) throw Error("split threshold must be finite");
        DecisionTree t;
        t.nodes_[0].leaf = false;
        t.nodes_[0].feature = feature;
        t.nodes_[0].q = q;
        t.nodes_[0].left = t.append(left);
        t.nodes_[0].right = t.append(right);
        return t;
    }

    const TreeNode& root() const { return nodes_.front(); }
    const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// Highest feature index used by a split plus one (0 for a leaf-only tree).
    std::size_t min_feature_count() const {
        std::size_t m = 0;
        for (const auto& n : nodes_)
            if (!n.leaf) m = std::max(m, n.feature + 1);
        return m;
    }

    DecisionTree remap_features(std::span<const std::size_t> to) const {
        DecisionTree t = *this;
        for (auto& n : t.nodes_)
            if (!n.leaf) n.feature = to[n.feature];
        return t;
    }

    friend bool operator==(const DecisionTree& a, const DecisionTree& b) {
        return a.nodes_.size() == b.nodes_.size() &&
               std::equal(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), [](const TreeNode& x, const TreeNode& y) {
                   return x.leaf == y.leaf && x.feature == y.feature && x.q == y.q && x.left == y.left &&
                          x.right == y.right && x.p == y.p && x.n1 == y.n1 && x.n2 == y.n2;
               });
    }

private:
    std::size_t append(const DecisionTree& sub) {
        const std::size_t base = nodes_.size();
        for (auto n : sub.nodes_) {
            if (!n.leaf) {
                n.left += base;
                n.right += base;
            }
            nodes_.push_back(n);
        }
        return base;
    }

    std::vector<TreeNode> nodes_;
};

inline std::size_t node_count(const DecisionTree& t) {
    return static_cast<std::size_t>(
        std::count_if(t.nodes().begin(), t.nodes().end(), [](const TreeNode& n) { return !n.leaf; }));
}

struct TreePrediction {
    Label label = kNormal;
    double p = 0.0;
};

inline TreePrediction predict_dt(const DecisionTree& t, std::span<const double> x, std::size_t feature_count) {
    if (x.size() != feature_count || x.size() < t.min_feature_count())
        throw Error("input has " + std::to_string(x.size()) + " features, tree expects " +
                    std::to_string(feature_count));
    const TreeNode* n = &t.root();
    while (!n->leaf) n = &t.node(x[n->feature] < n->q ? n->left : n->right);
    return {n->p >= 0.5 ? kArtifact : kNormal, n->p};
}

// ---------------------------------------------------------------------------
// Rendering

/// Leaf probability to at most four decimals, at least one: 0.0, 0.5, 0.8571.
inline std::string format_probability(double p) {
    std::string s = format_fixed(p, 4);
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

namespace detail {

inline void render_node(const DecisionTree& t, std::size_t id, const std::vector<std::string>& names, int depth,
                        std::string& out) {
    const TreeNode& n = t.node(id);
    const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
    const std::string q = format_fixed(n.q, 4);
    const std::string& name = names.at(n.feature);
    for (const auto& [op, child] : {std::pair{" < ", n.left}, std::pair{" >= ", n.right}}) {
        const TreeNode& c = t.node(child);
        out += indent + name + op + q + ":";
        if (c.leaf) {
            out += " artifact(" + format_probability(c.p) + ")\n";
        } else {
            out += "\n";
            render_node(t, child, names, depth + 1, out);
        }
    }
}

} // namespace detail

/// Indented diagram, two lines per split:
///
///     AbsPowBeta2 < -0.0205: artifact(0.0041)
///     AbsPowBeta2 >= -0.0205:
///         AbsPowBeta2 < 0.1765: artifact(0.1687)
///         AbsPowBeta2 >= 0.1765: artifact(0.9313)
inline std::string render_tree(const DecisionTree& t, const std::vector<std::string>& feature_names) {
    if (t.root().leaf) return "artifact(" + format_probability(t.root().p) + ")\n";
    std::string out;
    detail::render_node(t, 0, feature_names, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Induction

struct DTConfig {
    int min_examples = 5;        // p: split only sides holding more than this many of both classes
    double min_fraction = 0.004; // ... or this fraction of the training set, whichever is larger
    int lambda = 300;            // random thresholds tried per feature
    std::uint64_t seed = 0;

    static DTConfig small_corpus() { return {5, 0.004, 300, 0}; }
    static DTConfig large_corpus() { return {100, 0.006, 150, 0}; }

    void validate() const {
        if (min_examples < 0) throw Error("min_examples must be non-negative");
        if (!(min_fraction >= 0.0 && min_fraction < 1.0)) throw Error("min_fraction must lie in [0,1)");
        if (lambda < 1) throw Error("lambda must be at least 1");
    }

    std::size_t effective_minimum(std::size_t n_train) const {
        const auto frac = static_cast<std::size_t>(std::ceil(min_fraction * static_cast<double>(n_train)));
        return std::max(static_cast<std::size_t>(min_examples), frac);
    }
};

struct ThresholdResult {
    double q = 0.0;
    std::size_t error = 0;
};

/// Misclassification count of the split at q when each side predicts its
/// majority class.
class SplitScorer {
public:
    SplitScorer(std::span<const double> values, std::span<const Label> labels) {
        if (values.empty()) throw Error("threshold search needs at least one example");
        if (values.size() != labels.size()) throw Error("values and labels differ in length");
        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        sorted_.resize(order.size());
        ones_before_.assign(order.size() + 1, 0);
        for (std::size_t k = 0; k < order.size(); ++k) {
            sorted_[k] = values[order[k]];
            ones_before_[k + 1] = ones_before_[k] + (labels[order[k]] == kArtifact ? 1 : 0);
        }
    }

    std::size_t error(double q) const {
        const auto left = static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), q) - sorted_.begin());
        const std::size_t n = sorted_.size();
        const std::size_t l1 = ones_before_[left], l0 = left - l1;
        const std::size_t r1 = ones_before_[n] - l1, r0 = (n - left) - r1;
        return std::min(l0, l1) + std::min(r0, r1);
    }

    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }

private:
    std::vector<double> sorted_;
    std::vector<std::size_t> ones_before_;
};

/// Tries `lambda` thresholds drawn uniformly from [min, max] of the feature and
/// keeps the one with the fewest errors (smaller q on ties).
template <class Rng>
ThresholdResult best_threshold(std::span<const double> values, std::span<const Label> labels, int lambda, Rng& rng) {
    const SplitScorer scorer(values, labels);
    std::uniform_real_distribution<double> draw(scorer.min(), scorer.max());
    ThresholdResult best{0.0, std::numeric_limits<std::size_t>::max()};
    for (int k = 0; k < lambda; ++k) {
        const double q = scorer.min() == scorer.max() ? scorer.min() : draw(rng);
        const std::size_t e = scorer.error(q);
        if (e < best.error || (e == best.error && q < best.q)) best = {q, e};
    }
    return best;
}

/// Per-feature threshold search used by find_node: (values, labels, seed) -> best split.
using ThresholdSearch = std::function<ThresholdResult(std::span<const double>, std::span<const Label>, std::uint64_t)>;

inline ThresholdSearch sampled_threshold_search(int lambda) {
    return [lambda](std::span<const double> v, std::span<const Label> l, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return best_threshold(v, l, lambda, rng);
    };
}

namespace detail {

class TreeBuilder {
public:
    TreeBuilder(const LabeledDataset& d, const DTConfig& cfg, ThresholdSearch search)
        : d_(d), cfg_(cfg), search_(std::move(search)), minimum_(cfg.effective_minimum(d.rows())) {}

    DecisionTree build(std::vector<std::size_t> rows, std::uint64_t path) {
        auto [n0, n1] = counts(rows);
        if (n0 == 0 || n1 == 0) return DecisionTree::leaf(n1, n0);

        std::vector<double> values(rows.size());
        std::vector<Label> labels(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) labels[k] = d_.label(rows[k]);

        bool found = false;
        std::size_t best_feature = 0;
        ThresholdResult best;
        for (std::size_t j = 0; j < d_.cols(); ++j) {
            for (std::size_t k = 0; k < rows.size(); ++k) values[k] = d_.at(rows[k], j);
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            if (*lo == *hi) continue;
            const auto r = search_(values, labels, derive_seed(cfg_.seed, path, j));
            if (!found || r.error < best.error) {
                found = true;
                best_feature = j;
                best = r;
            }
        }
        if (!found) return DecisionTree::leaf(n1, n0);

        std::vector<std::size_t> left, right;
        for (auto i : rows) (d_.at(i, best_feature) < best.q ? left : right).push_back(i);
        if (left.empty() || right.empty()) return DecisionTree::leaf(n1, n0);

        return DecisionTree::split(best_feature, best.q, side(std::move(left), derive_seed(path, 1)),
                                   side(std::move(right), derive_seed(path, 2)));
    }

private:
    std::pair<std::size_t, std::size_t> counts(const std::vector<std::size_t>& rows) const {
        std::size_t n1 = 0;
        for (auto i : rows) n1 += d_.label(i) == kArtifact ? 1 : 0;
        return {rows.size() - n1, n1};
    }

    DecisionTree side(std::vector<std::size_t> rows, std::uint64_t path) {
        auto [n0, n1] = counts(rows);
        if (n0 > minimum_ && n1 > minimum_) return build(std::move(rows), path);
        return DecisionTree::leaf(n1, n0);
    }

    const LabeledDataset& d_;
    const DTConfig& cfg_;
    ThresholdSearch search_;
    std::size_t minimum_;
};

} // namespace detail

/// Recursive tree induction. At each node every feature with a non-zero range
/// gets a threshold from `search`; the feature with the fewest errors (lowest
/// index on ties) splits the node. A side is split again only if it holds more
/// than the effective minimum of examples of both classes; otherwise, or when
/// pure, it becomes a leaf.
inline DecisionTree find_node(const LabeledDataset& d, const DTConfig& cfg, const ThresholdSearch& search) {
    cfg.validate();
    if (d.rows() == 0) throw Error("tree induction needs at least one example");
    std::vector<std::size_t> rows(d.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return detail::TreeBuilder(d, cfg, search).build(std::move(rows), 1);
}

inline DecisionTree find_node(const LabeledDataset& d, const DTConfig& cfg) {
    return find_node(d, cfg, sampled_threshold_search(cfg.lambda));
}

} // namespace pnndt
