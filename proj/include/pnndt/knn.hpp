#pragma once

#include <pnndt/dataset.hpp>

#include <algorithm>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace pnndt {

/// Majority label of the k nearest rows (Euclidean). Equal distances prefer the
/// lower row index; a tied vote goes to the artifact class.
inline Label knn_predict(const LabeledDataset& train, std::span<const double> x, std::size_t k) {
    if (train.rows() == 0) throw Error("k-nn needs a non-empty training set");
    if (k < 1 || k > train.rows())
        throw Error("k must lie in [1, " + std::to_string(train.rows()) + "], got " + std::to_string(k));
    if (x.size() != train.cols())
        throw Error("input has " + std::to_string(x.size()) + " features, training set has " +
                    std::to_string(train.cols()));

    std::vector<std::pair<double, std::size_t>> dist(train.rows());
    for (std::size_t i = 0; i < train.rows(); ++i) {
        double d = 0.0;
        auto r = train.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) d += (r[j] - x[j]) * (r[j] - x[j]);
        dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t ones = 0;
    for (std::size_t t = 0; t < k; ++t) ones += train.label(dist[t].second) == kArtifact ? 1 : 0;
    return 2 * ones >= k ? kArtifact : kNormal;
}

} // namespace pnndt
