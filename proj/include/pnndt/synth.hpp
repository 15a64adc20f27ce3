#pragma once

#include <pnndt/dataset.hpp>
#include <pnndt/features.hpp>

#include <random>

namespace pnndt {

/// Synthetic stand-in for a labeled spectral-feature corpus.
///
/// Produces 2 * n_per_class rows over the 36 canonical features in shuffled
/// order. Features are unit-variance Gaussians; the first `relevant_count`
/// columns are shifted by +2 for the artifact class, the rest share one
/// distribution across classes. Afterwards round(noise_rate * n) labels,
/// chosen uniformly, are flipped.
inline LabeledDataset synth_generate(std::size_t n_per_class, int relevant_count, double noise_rate,
                                     std::uint64_t seed) {
    if (relevant_count < 1 || relevant_count > static_cast<int>(kFeatureCount))
        throw Error("relevant_count must lie in [1, 36], got " + std::to_string(relevant_count));
    if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw Error("noise_rate must lie in [0, 1)");
    if (n_per_class < 1) throw Error("n_per_class must be at least 1");

    constexpr double kShift = 2.0;
    const std::size_t n = 2 * n_per_class, m = kFeatureCount;
    std::mt19937_64 rng(derive_seed(seed, 0x5e7));
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < n_per_class ? kNormal : kArtifact;
    std::shuffle(labels.begin(), labels.end(), rng);

    std::vector<double> values(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double v = gauss(rng);
            if (static_cast<int>(j) < relevant_count && labels[i] == kArtifact) v += kShift;
            values[i * m + j] = v;
        }

    const auto flips = static_cast<std::size_t>(std::llround(noise_rate * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < flips; ++k) labels[order[k]] = 1 - labels[order[k]];

    return {std::move(values), std::move(labels), canonical_feature_names()};
}

} // namespace pnndt
