#pragma once

#include <pnndt/common.hpp>
#include <pnndt/dataset.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pnndt {

/// Confusion counts with artifact (label 1) as the positive class.
struct ConfusionMetrics {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return tn + fp; }

    // An empty denominator yields 0.
    double sensitivity() const { return ratio(tp, tp + fn); }
    double specificity() const { return ratio(tn, tn + fp); }
    double performance() const { return ratio(tp + tn, total()); }

    void add(Label truth, Label predicted) {
        if (truth == kArtifact) (predicted == kArtifact ? tp : fn)++;
        else (predicted == kArtifact ? fp : tn)++;
    }

    friend bool operator==(const ConfusionMetrics&, const ConfusionMetrics&) = default;

private:
    static double ratio(std::size_t a, std::size_t b) {
        return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    }
};

/// Scores any row classifier `Label(std::span<const double>)` on a labeled set.
template <class Classifier>
ConfusionMetrics evaluate(const Classifier& classify, const LabeledDataset& test) {
    ConfusionMetrics m;
    for (std::size_t i = 0; i < test.rows(); ++i) m.add(test.label(i), classify(test.row(i)));
    return m;
}

/// Mean and 95% half-width of a per-run metric. The half-width describes the
/// spread of the runs: 1.96 times the sample standard deviation.
struct RunSummary {
    std::size_t runs = 0;
    double mean = 0.0;
    double half_width = 0.0;
    std::vector<double> per_run;
};

inline RunSummary summarize(std::vector<double> values) {
    if (values.empty()) throw Error("cannot summarize zero runs");
    RunSummary s;
    s.runs = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.half_width = 1.96 * std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    // Keep the mean inside the observed range despite rounding.
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.mean = std::clamp(s.mean, *lo, *hi);
    s.per_run = std::move(values);
    return s;
}

struct RepeatedRuns {
    std::vector<ConfusionMetrics> per_run;
    RunSummary sensitivity, specificity, performance;
};

/// Runs `experiment(seed)` for seeds base_seed .. base_seed + R - 1, in order.
template <class Experiment>
RepeatedRuns repeated_runs(const Experiment& experiment, int runs, std::uint64_t base_seed) {
    if (runs < 2) throw Error("repeated runs need R >= 2");
    RepeatedRuns out;
    for (int r = 0; r < runs; ++r) out.per_run.push_back(experiment(base_seed + static_cast<std::uint64_t>(r)));
    std::vector<double> se, sp, pf;
    for (const auto& m : out.per_run) {
        se.push_back(m.sensitivity());
        sp.push_back(m.specificity());
        pf.push_back(m.performance());
    }
    out.sensitivity = summarize(std::move(se));
    out.specificity = summarize(std::move(sp));
    out.performance = summarize(std::move(pf));
    return out;
}

} // namespace pnndt
