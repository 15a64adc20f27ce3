#include <pnndt/knn.hpp>
#include <pnndt/metrics.hpp>
#include <pnndt/pipeline.hpp>
#include <pnndt/synth.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pnndt;

namespace {

PNNetwork echo_feature0(std::size_t m) {
    return {support::names(m), {{{InputRef::feature(0), InputRef::feature(1), {0, 1, 0, 0}}, 1}}, 0};
}

} // namespace

TEST(Clean, RemovesExactlyTheMisclassifiedRows) {
    std::vector<double> v;
    std::vector<Label> y;
    for (int i = 0; i < 8; ++i) {
        const Label l = i % 2;
        const bool flip = i == 2 || i == 5;
        v.insert(v.end(), {flip ? 1.0 - l : double(l), 0.5 * i, -1.0 * i});
        y.push_back(l);
    }
    LabeledDataset d(v, y, support::names(3));
    auto res = clean_training_data(echo_feature0(3), d);
    EXPECT_EQ(res.report.removed_examples, (std::vector<std::size_t>{2, 5}));
    EXPECT_EQ(res.report.kept_features, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(res.data.rows(), 6u);
    EXPECT_EQ(res.data.feature_names(), (std::vector<std::string>{"f0", "f1"}));
}

TEST(Clean, PerfectNetworkKeepsEveryRow) {
    std::vector<double> v;
    std::vector<Label> y;
    for (int i = 0; i < 6; ++i) {
        v.insert(v.end(), {double(i % 2), 1.0 * i, 2.0});
        y.push_back(i % 2);
    }
    LabeledDataset d(v, y, support::names(3));
    auto res = clean_training_data(echo_feature0(3), d);
    EXPECT_TRUE(res.report.removed_examples.empty());
    EXPECT_EQ(res.data.rows(), 6u);
    EXPECT_EQ(res.data.cols(), 2u);
}

TEST(Clean, SurvivorCountAndCellsMatchDirectCounting) {
    auto d = synth_generate(150, 4, 0.1, 3);
    GrowConfig cfg;
    cfg.seed = 1;
    auto net = train_gmdh_random(d, cfg).network;
    std::vector<std::size_t> correct;
    for (std::size_t i = 0; i < d.rows(); ++i)
        if ((predict_network(net, d.row(i)) >= 0.5) == (d.label(i) == 1)) correct.push_back(i);
    auto res = clean_training_data(net, d);
    ASSERT_EQ(res.data.rows(), correct.size());
    EXPECT_EQ(res.report.removed_examples.size() + correct.size(), d.rows());
    const auto& kept = res.report.kept_features;
    for (std::size_t r = 0; r < correct.size(); ++r) {
        EXPECT_EQ(res.data.label(r), d.label(correct[r]));
        for (std::size_t c = 0; c < kept.size(); ++c) EXPECT_EQ(res.data.at(r, c), d.at(correct[r], kept[c]));
    }
}

TEST(Clean, SingleClassResultIsAnError) {
    PNNetwork always_one(support::names(2), {{{InputRef::feature(0), InputRef::feature(1), {1, 0, 0, 0}}, 1}}, 0);
    LabeledDataset d({0, 0, 1, 1, 2, 2, 3, 3}, {0, 1, 0, 1}, support::names(2));
    EXPECT_THROW(clean_training_data(always_one, d), Error);
}

TEST(PnnDt, SeparableDataGivesPerfectTrainingTree) {
    // Feature 2 separates the classes with a wide margin; the rest is noise.
    const auto raw = support::gaussian_random(200, 5, 8);
    auto v = raw.values();
    for (std::size_t i = 0; i < raw.rows(); ++i) v[i * 5 + 2] = 0.3 * v[i * 5 + 2] + 4.0 * raw.label(i);
    const LabeledDataset d(v, raw.labels(), raw.feature_names());
    GrowConfig g;
    g.seed = 2;
    auto res = train_pnn_dt(d, g, DTConfig::small_corpus());
    auto cleaned = clean_training_data(res.network, d);
    std::size_t kept_row = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (std::count(res.report.removed_examples.begin(), res.report.removed_examples.end(), i)) continue;
        EXPECT_EQ(predict_dt(res.tree, d.row(i), d.cols()).label, d.label(i)) << "row " << i;
        ++kept_row;
    }
    EXPECT_EQ(kept_row, cleaned.data.rows());
}

TEST(PnnDt, TreeDependsOnlyOnKeptFeatures) {
    auto d = synth_generate(300, 8, 0.1, 4);
    GrowConfig g;
    g.seed = 4;
    auto res = train_pnn_dt(d, g, DTConfig::small_corpus());
    const auto& kept = res.report.kept_features;
    for (const auto& n : res.tree.nodes())
        if (!n.leaf) {
            EXPECT_TRUE(std::count(kept.begin(), kept.end(), n.feature));
        }
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0, 10);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        std::vector<double> x(d.row(i).begin(), d.row(i).end());
        const auto before = predict_dt(res.tree, x, d.cols());
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!std::count(kept.begin(), kept.end(), j)) x[j] += noise(rng);
        const auto after = predict_dt(res.tree, x, d.cols());
        EXPECT_EQ(before.p, after.p);
    }
}

TEST(PnnDt, RandomPairingVariantAlsoWorks) {
    auto d = synth_generate(80, 3, 0.05, 6);
    GrowConfig g;
    g.seed = 6;
    auto res = train_pnn_dt(d, g, DTConfig::small_corpus(), NetworkVariant::RandomPairing);
    EXPECT_EQ(res.report.kept_features, res.network.input_feature_ids());
}

TEST(Metrics, FormulaArithmetic) {
    ConfusionMetrics m{3, 4, 2, 1};
    EXPECT_DOUBLE_EQ(m.sensitivity(), 0.75);
    EXPECT_NEAR(m.specificity(), 0.6667, 5e-5);
    EXPECT_DOUBLE_EQ(m.performance(), 0.70);
    ConfusionMetrics perfect{5, 7, 0, 0};
    EXPECT_EQ(perfect.sensitivity(), 1.0);
    EXPECT_EQ(perfect.specificity(), 1.0);
    EXPECT_EQ(perfect.performance(), 1.0);
    EXPECT_EQ(ConfusionMetrics{}.performance(), 0.0);
}

TEST(Metrics, AllNegativeClassifier) {
    auto d = synth_generate(70, 3, 0.0, 2);
    auto idx = std::vector<std::size_t>{};
    for (std::size_t i = 0; i < d.rows(); ++i)
        if (d.label(i) == kNormal || i % 3 == 0) idx.push_back(i);
    auto test = d.select_rows(idx);
    auto m = evaluate([](std::span<const double>) { return kNormal; }, test);
    const double rate = static_cast<double>(test.count(kArtifact)) / static_cast<double>(test.rows());
    EXPECT_EQ(m.total(), test.rows());
    EXPECT_EQ(m.sensitivity(), 0.0);
    EXPECT_EQ(m.specificity(), 1.0);
    EXPECT_EQ(m.performance(), 1.0 - rate);
}

TEST(Metrics, PerformanceIsWeightedAverage) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> c(0, 50);
    for (int t = 0; t < 200; ++t) {
        ConfusionMetrics m{c(rng), c(rng), c(rng), c(rng)};
        if (m.positives() == 0 || m.negatives() == 0) continue;
        const double P = m.positives(), N = m.negatives();
        EXPECT_NEAR(m.performance(), (m.sensitivity() * P + m.specificity() * N) / (P + N), 1e-12);
    }
}

TEST(Knn, Cases) {
    LabeledDataset d({0, 0, 1, 0, 0, 1, 5, 5, 6, 5}, {1, 1, 0, 0, 0}, support::names(2));
    EXPECT_EQ(knn_predict(d, std::vector<double>{5, 5}, 1), 0);
    EXPECT_EQ(knn_predict(d, std::vector<double>{0, 0}, 1), 1);
    // nearest three of (0.1, 0.1): rows 0, 1, 2 labeled {1, 1, 0}
    EXPECT_EQ(knn_predict(d, std::vector<double>{0.1, 0.1}, 3), 1);
    // k = n: global majority, here normal (3 vs 2)
    EXPECT_EQ(knn_predict(d, std::vector<double>{0, 0}, 5), d.count(kNormal) > d.count(kArtifact) ? 0 : 1);
    // even k with a split vote goes to artifact
    EXPECT_EQ(knn_predict(d, std::vector<double>{0.5, 0.5}, 4), 1);
    // equidistant neighbours: lower row index wins
    LabeledDataset tie({-1, 0, 1, 0}, {0, 1}, support::names(2));
    EXPECT_EQ(knn_predict(tie, std::vector<double>{0, 0}, 1), 0);
    EXPECT_THROW(knn_predict(d, std::vector<double>{0, 0}, 0), Error);
    EXPECT_THROW(knn_predict(d, std::vector<double>{0, 0}, 6), Error);
}

TEST(RepeatedRuns, Summaries) {
    auto constant = repeated_runs([](std::uint64_t) { return ConfusionMetrics{1, 1, 1, 1}; }, 5, 10);
    EXPECT_EQ(constant.performance.half_width, 0.0);
    EXPECT_EQ(constant.performance.mean, 0.5);

    auto alternating = repeated_runs(
        [](std::uint64_t s) { return s % 2 ? ConfusionMetrics{1, 0, 0, 0} : ConfusionMetrics{0, 0, 0, 1}; }, 2, 0);
    EXPECT_EQ(alternating.sensitivity.mean, 0.5);

    std::vector<std::uint64_t> seeds;
    auto varied = repeated_runs(
        [&](std::uint64_t s) {
            seeds.push_back(s);
            return ConfusionMetrics{s % 7, 3, s % 3, 2};
        },
        9, 100);
    EXPECT_EQ(seeds.front(), 100u);
    EXPECT_EQ(seeds.back(), 108u);
    const auto& v = varied.sensitivity.per_run;
    double mean = 0, ss = 0;
    for (double x : v) mean += x / v.size();
    for (double x : v) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(varied.sensitivity.half_width, 1.96 * std::sqrt(ss / (v.size() - 1)), 1e-12);
    EXPECT_NEAR(varied.sensitivity.mean, mean, 1e-12);
    EXPECT_THROW(repeated_runs([](std::uint64_t) { return ConfusionMetrics{}; }, 1, 0), Error);
}
