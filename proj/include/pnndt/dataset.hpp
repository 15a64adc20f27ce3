#pragma once

#include <pnndt/common.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pnndt {

/// Feature matrix (row-major, one segment per row) with binary labels.
class LabeledDataset {
public:
    LabeledDataset() = default;

    LabeledDataset(std::vector<double> features, std::vector<Label> labels, std::vector<std::string> feature_names)
        : values_(std::move(features)), labels_(std::move(labels)), names_(std::move(feature_names)) {
        if (names_.size() < 2) throw Error("dataset needs at least 2 features, got " + std::to_string(names_.size()));
        if (values_.size() != labels_.size() * names_.size())
            throw Error("feature matrix size " + std::to_string(values_.size()) + " does not match " +
                        std::to_string(labels_.size()) + " rows x " + std::to_string(names_.size()) + " columns");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] != kNormal && labels_[i] != kArtifact)
                throw Error("label at row " + std::to_string(i) + " is " + std::to_string(labels_[i]) +
                            ", expected 0 or 1");
    }

    std::size_t rows() const { return labels_.size(); }
    std::size_t cols() const { return names_.size(); }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    Label label(std::size_t i) const { return labels_[i]; }

    const std::vector<double>& values() const { return values_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return names_; }

    std::size_t count(Label l) const {
        return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(rows());
        for (std::size_t i = 0; i < rows(); ++i) c[i] = at(i, j);
        return c;
    }

    /// Rows picked by index, in the given order.
    LabeledDataset select_rows(std::span<const std::size_t> idx) const {
        std::vector<double> v;
        std::vector<Label> l;
        v.reserve(idx.size() * cols());
        l.reserve(idx.size());
        for (auto i : idx) {
            auto r = row(i);
            v.insert(v.end(), r.begin(), r.end());
            l.push_back(labels_[i]);
        }
        return {std::move(v), std::move(l), names_};
    }

    LabeledDataset select_columns(std::span<const std::size_t> cols_idx) const {
        std::vector<double> v;
        v.reserve(rows() * cols_idx.size());
        std::vector<std::string> names;
        for (auto j : cols_idx) names.push_back(names_.at(j));
        for (std::size_t i = 0; i < rows(); ++i)
            for (auto j : cols_idx) v.push_back(at(i, j));
        return {std::move(v), labels_, std::move(names)};
    }

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

private:
    std::vector<double> values_;
    std::vector<Label> labels_;
    std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Normalization

struct NormStats {
    std::vector<double> means;
    std::vector<double> stddevs;

    /// Zero-variance columns; they are only mean-centered.
    std::vector<bool> degenerate() const {
        std::vector<bool> d(stddevs.size());
        for (std::size_t j = 0; j < stddevs.size(); ++j) d[j] = stddevs[j] == 0.0;
        return d;
    }
};

/// Per-column sample mean and sample standard deviation (divisor n-1).
inline NormStats normalize_fit(const LabeledDataset& ds) {
    const std::size_t n = ds.rows(), m = ds.cols();
    if (n < 2) throw Error("normalization needs at least 2 rows");
    NormStats s{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += ds.at(i, j);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ds.at(i, j) - mean;
            ss += d * d;
        }
        s.means[j] = mean;
        s.stddevs[j] = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

inline double normalize_value(const NormStats& s, std::size_t j, double x) {
    const double sd = s.stddevs[j] == 0.0 ? 1.0 : s.stddevs[j];
    return (x - s.means[j]) / sd;
}

inline LabeledDataset normalize_apply(const NormStats& s, const LabeledDataset& ds) {
    if (s.means.size() != ds.cols() || s.stddevs.size() != ds.cols())
        throw Error("normalization statistics have " + std::to_string(s.means.size()) + " columns, dataset has " +
                    std::to_string(ds.cols()));
    std::vector<double> v(ds.values());
    for (std::size_t i = 0; i < ds.rows(); ++i)
        for (std::size_t j = 0; j < ds.cols(); ++j) v[i * ds.cols() + j] = normalize_value(s, j, ds.at(i, j));
    return {std::move(v), ds.labels(), ds.feature_names()};
}

// ---------------------------------------------------------------------------
// Train / validation split

struct SplitAssignment {
    std::vector<std::size_t> train;       // D_A
    std::vector<std::size_t> validation;  // D_B
    std::uint64_t seed = 0;
};

/// Stratified random split. The validation side receives round(fraction * n)
/// rows, apportioned across classes by largest remainder so that each class
/// is within one example of its proportional share.
inline SplitAssignment split(const LabeledDataset& ds, double validation_fraction, std::uint64_t seed) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw Error("validation fraction must lie in (0,1)");
    SplitAssignment out;
    out.seed = seed;
    std::mt19937_64 rng(derive_seed(seed, 0x5b17));

    std::array<std::vector<std::size_t>, 2> idx;
    for (std::size_t i = 0; i < ds.rows(); ++i) idx[static_cast<std::size_t>(ds.label(i))].push_back(i);
    for (std::size_t c = 0; c < 2; ++c) {
        if (idx[c].size() < 2)
            throw Error("class " + std::to_string(c) + " has " + std::to_string(idx[c].size()) +
                        " examples; a split needs at least 2 per class");
        std::shuffle(idx[c].begin(), idx[c].end(), rng);
    }

    const auto total = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(ds.rows())));
    std::array<std::size_t, 2> take{};
    std::array<double, 2> remainder{};
    for (std::size_t c = 0; c < 2; ++c) {
        const double share = validation_fraction * static_cast<double>(idx[c].size());
        take[c] = static_cast<std::size_t>(std::floor(share));
        remainder[c] = share - std::floor(share);
    }
    std::size_t assigned = take[0] + take[1];
    if (assigned < total) {
        // Largest remainder first; equal remainders resolved by the seed.
        std::size_t first = remainder[0] > remainder[1] ? 0 : remainder[1] > remainder[0] ? 1 : rng() % 2;
        for (std::size_t c : {first, 1 - first})
            if (assigned < total) ++take[c], ++assigned;
    }
    for (std::size_t c = 0; c < 2; ++c) {
        take[c] = std::clamp<std::size_t>(take[c], 1, idx[c].size() - 1);
        const auto cut = static_cast<std::ptrdiff_t>(take[c]);
        out.validation.insert(out.validation.end(), idx[c].begin(), idx[c].begin() + cut);
        out.train.insert(out.train.end(), idx[c].begin() + cut, idx[c].end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validation.begin(), out.validation.end());
    return out;
}

} // namespace pnndt
