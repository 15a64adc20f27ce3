#pragma once

// PNN&DT: fit a polynomial network, drop the training rows it misclassifies
// and the features it does not use, then induce a decision tree on the rest.

#include <pnndt/dataset.hpp>
#include <pnndt/gmdh.hpp>
#include <pnndt/tree.hpp>

#include <vector>

namespace pnndt {

struct CleanReport {
    std::vector<std::size_t> removed_examples;  // row indices of the original data
    std::vector<std::size_t> kept_features;     // = network input_feature_ids
    std::size_t original_rows = 0;
    std::size_t original_cols = 0;
};

struct CleanResult {
    LabeledDataset data;
    CleanReport report;
};

inline CleanResult clean_training_data(const PNNetwork& net, const LabeledDataset& d, double threshold = 0.5) {
    if (net.feature_count() != d.cols())
        throw Error("network expects " + std::to_string(net.feature_count()) + " features, data has " +
                    std::to_string(d.cols()));
    CleanReport report{{}, net.input_feature_ids(), d.rows(), d.cols()};
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d.rows(); ++i)
        (classify_network(net, d.row(i), threshold) == d.label(i) ? keep : report.removed_examples).push_back(i);

    auto cleaned = d.select_rows(keep).select_columns(report.kept_features);
    if (cleaned.rows() == 0) throw Error("cleaning removed every training example");
    if (cleaned.count(kNormal) == 0 || cleaned.count(kArtifact) == 0)
        throw Error("cleaned training data contains a single class; the network labels every example alike");
    return {std::move(cleaned), std::move(report)};
}

enum class NetworkVariant { Layered, RandomPairing };

struct PnnDtResult {
    PNNetwork network;
    DecisionTree tree;  // splits index the original feature columns
    CleanReport report;
};

inline PnnDtResult train_pnn_dt(const LabeledDataset& d, const GrowConfig& grow, const DTConfig& dt,
                                NetworkVariant variant = NetworkVariant::Layered, double threshold = 0.5) {
    PnnDtResult out;
    out.network = variant == NetworkVariant::Layered ? train_gmdh(d, grow).network : train_gmdh_random(d, grow).network;
    auto cleaned = clean_training_data(out.network, d, threshold);
    out.report = std::move(cleaned.report);
    out.tree = find_node(cleaned.data, dt).remap_features(out.report.kept_features);
    return out;
}

} // namespace pnndt
