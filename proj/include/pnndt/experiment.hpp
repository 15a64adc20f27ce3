#pragma once

// Config-driven training and evaluation of the five classifier arms.

#include <pnndt/csv.hpp>
#include <pnndt/metrics.hpp>
#include <pnndt/model.hpp>
#include <pnndt/pipeline.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace pnndt {

inline constexpr std::array<std::string_view, 5> kArms{"dt", "gmdh", "pnn", "pnn-dt", "knn"};

inline std::string arm_display_name(std::string_view arm) {
    if (arm == "dt") return "DT";
    if (arm == "gmdh") return "GMDH";
    if (arm == "pnn") return "PNN";
    if (arm == "pnn-dt") return "PNN&DT";
    if (arm == "knn") return "k-nn (raw features)";
    return std::string(arm);
}

struct ExperimentConfig {
    std::string train_path, test_path, model_path;
    std::string arm = "pnn-dt";
    int runs = 1;
    std::uint64_t base_seed = 1;
    bool normalize = true;
    double threshold = 0.5;
    std::size_t k = 5;
    NetworkVariant network = NetworkVariant::Layered;  // used by the pnn-dt arm
    GrowConfig grow;
    DTConfig dt;

    /// Ordered key list; also the accepted config-file keys.
    static const std::vector<std::string>& keys() {
        static const std::vector<std::string> k{
            "train", "test", "model", "arm", "runs", "base_seed", "normalize", "threshold", "k", "network",
            "chi", "delta", "max_steps", "F", "Delta", "max_layers", "validation_fraction", "criterion_scope",
            "fail_limit", "max_attempts", "jobs", "min_examples", "min_fraction", "lambda"};
        return k;
    }

    /// Current value of `key` as text.
    std::string get(const std::string& key) const {
        auto num = [](auto v) {
            if constexpr (std::is_floating_point_v<decltype(v)>) return detail::format_double(v);
            else return std::to_string(v);
        };
        if (key == "train") return train_path;
        if (key == "test") return test_path;
        if (key == "model") return model_path;
        if (key == "arm") return arm;
        if (key == "runs") return num(runs);
        if (key == "base_seed") return num(base_seed);
        if (key == "normalize") return normalize ? "true" : "false";
        if (key == "threshold") return num(threshold);
        if (key == "k") return num(k);
        if (key == "network") return network == NetworkVariant::Layered ? "layered" : "random";
        if (key == "chi") return num(grow.fit.chi);
        if (key == "delta") return num(grow.fit.delta);
        if (key == "max_steps") return num(grow.fit.max_steps);
        if (key == "F") return num(grow.F);
        if (key == "Delta") return num(grow.Delta);
        if (key == "max_layers") return num(grow.max_layers);
        if (key == "validation_fraction") return num(grow.validation_fraction);
        if (key == "criterion_scope") return grow.criterion_scope == CriterionScope::Whole ? "whole" : "validation";
        if (key == "fail_limit") return num(grow.fail_limit);
        if (key == "max_attempts") return num(grow.max_attempts);
        if (key == "jobs") return num(grow.jobs);
        if (key == "min_examples") return num(dt.min_examples);
        if (key == "min_fraction") return num(dt.min_fraction);
        if (key == "lambda") return num(dt.lambda);
        throw Error("unknown configuration key '" + key + "'");
    }

    void set(const std::string& key, const std::string& value) {
        auto fail = [&](const char* what) {
            return Error("configuration key '" + key + "': '" + value + "' is not " + what);
        };
        auto as_double = [&] {
            double v;
            if (!detail::parse_double(value, v)) throw fail("a number");
            return v;
        };
        auto as_int = [&]() -> long long {
            long long v;
            auto t = detail::trim(value);
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size()) throw fail("an integer");
            return v;
        };
        auto as_count = [&](long long lo) {
            auto v = as_int();
            if (v < lo) throw fail(lo == 0 ? "a non-negative integer" : "a positive integer");
            return v;
        };

        if (key == "train") train_path = value;
        else if (key == "test") test_path = value;
        else if (key == "model") model_path = value;
        else if (key == "arm") {
            if (std::find(kArms.begin(), kArms.end(), value) == kArms.end())
                throw fail("one of dt, gmdh, pnn, pnn-dt, knn");
            arm = value;
        } else if (key == "runs") runs = static_cast<int>(as_count(1));
        else if (key == "base_seed") base_seed = static_cast<std::uint64_t>(as_count(0));
        else if (key == "normalize") {
            if (value != "true" && value != "false") throw fail("true or false");
            normalize = value == "true";
        } else if (key == "threshold") threshold = as_double();
        else if (key == "k") k = static_cast<std::size_t>(as_count(1));
        else if (key == "network") {
            if (value != "layered" && value != "random") throw fail("layered or random");
            network = value == "layered" ? NetworkVariant::Layered : NetworkVariant::RandomPairing;
        } else if (key == "chi") grow.fit.chi = as_double();
        else if (key == "delta") grow.fit.delta = as_double();
        else if (key == "max_steps") grow.fit.max_steps = static_cast<int>(as_count(1));
        else if (key == "F") grow.F = static_cast<std::size_t>(as_count(0));
        else if (key == "Delta") grow.Delta = as_double();
        else if (key == "max_layers") grow.max_layers = static_cast<int>(as_count(1));
        else if (key == "validation_fraction") grow.validation_fraction = as_double();
        else if (key == "criterion_scope") {
            if (value != "whole" && value != "validation") throw fail("whole or validation");
            grow.criterion_scope = value == "whole" ? CriterionScope::Whole : CriterionScope::Validation;
        } else if (key == "fail_limit") grow.fail_limit = static_cast<int>(as_count(1));
        else if (key == "max_attempts") grow.max_attempts = static_cast<int>(as_count(1));
        else if (key == "jobs") grow.jobs = static_cast<int>(as_count(1));
        else if (key == "min_examples") dt.min_examples = static_cast<int>(as_count(0));
        else if (key == "min_fraction") dt.min_fraction = as_double();
        else if (key == "lambda") dt.lambda = static_cast<int>(as_count(1));
        else throw Error("unknown configuration key '" + key + "'");
    }

    void validate() const {
        grow.validate();
        dt.validate();
    }

    /// Echo of every training-relevant setting, stored with saved models.
    std::map<std::string, std::string> echo() const {
        std::map<std::string, std::string> m;
        for (const auto& key : keys())
            if (key != "train" && key != "test" && key != "model" && key != "jobs") m[key] = get(key);
        return m;
    }
};

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are rejected.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path.string() + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    const auto& keys = ExperimentConfig::keys();
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config file line " + std::to_string(line_no) + ": expected key = value");
        std::string key(detail::trim(std::string_view(line).substr(0, eq)));
        std::string value(detail::trim(std::string_view(line).substr(eq + 1)));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw Error("config file line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

/// Trains the configured arm on raw (unnormalized) data with the given seed.
inline Model train_model(const ExperimentConfig& cfg, const LabeledDataset& raw, std::uint64_t seed) {
    cfg.validate();
    Model m;
    m.arm = cfg.arm;
    m.feature_names = raw.feature_names();
    m.threshold = cfg.threshold;
    m.config = cfg.echo();
    m.config["base_seed"] = std::to_string(seed);

    LabeledDataset d = raw;
    if (cfg.normalize) {
        m.normalization = normalize_fit(raw);
        d = normalize_apply(*m.normalization, raw);
    }
    GrowConfig grow = cfg.grow;
    grow.seed = seed;
    DTConfig dt = cfg.dt;
    dt.seed = seed;

    if (cfg.arm == "dt") {
        m.tree = find_node(d, dt);
    } else if (cfg.arm == "gmdh") {
        m.network = train_gmdh(d, grow).network;
    } else if (cfg.arm == "pnn") {
        m.network = train_gmdh_random(d, grow).network;
    } else if (cfg.arm == "pnn-dt") {
        auto r = train_pnn_dt(d, grow, dt, cfg.network, cfg.threshold);
        m.network = std::move(r.network);
        m.tree = std::move(r.tree);
        m.kept_features = std::move(r.report.kept_features);
    } else if (cfg.arm == "knn") {
        if (cfg.k > d.rows()) throw Error("k exceeds the number of training rows");
        m.reference = std::move(d);
        m.k = cfg.k;
    } else {
        throw Error("unknown arm '" + cfg.arm + "'");
    }
    return m;
}

inline void require_same_features(const Model& m, const std::vector<std::string>& names) {
    if (names.size() != m.feature_names.size())
        throw Error("test data has " + std::to_string(names.size()) + " features, model expects " +
                    std::to_string(m.feature_names.size()));
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] != m.feature_names[j])
            throw Error("feature " + std::to_string(j + 1) + " is '" + names[j] + "' in the test data but '" +
                        m.feature_names[j] + "' in the model");
}

inline ConfusionMetrics evaluate_model(const Model& m, const LabeledDataset& test) {
    require_same_features(m, test.feature_names());
    return evaluate([&](std::span<const double> x) { return m.classify(x); }, test);
}

// ---------------------------------------------------------------------------
// Reports

inline std::string format_percent(double fraction) { return format_fixed(100.0 * fraction, 1); }

inline std::string format_summary(const RunSummary& s) {
    return format_percent(s.mean) + "\xC2\xB1" + format_percent(s.half_width);
}

inline std::string report_header() { return "Classifier | Sensitivity % | Specificity % | Performance %\n"; }

inline std::string report_row(std::string_view arm, const ConfusionMetrics& m) {
    return arm_display_name(arm) + " | " + format_percent(m.sensitivity()) + " | " + format_percent(m.specificity()) +
           " | " + format_percent(m.performance()) + "\n";
}

inline std::string report_row(std::string_view arm, const RepeatedRuns& r) {
    return arm_display_name(arm) + " | " + format_summary(r.sensitivity) + " | " + format_summary(r.specificity) +
           " | " + format_summary(r.performance) + "\n";
}

inline std::string report_note(int runs) {
    return "# mean\xC2\xB1half-width over " + std::to_string(runs) +
           " runs; half-width = 1.96 x sample standard deviation of the per-run values\n";
}

/// Machine-readable per-run values.
inline Json runs_to_json(std::string_view arm, std::uint64_t base_seed, const RepeatedRuns& r) {
    Json runs = Json::array();
    for (std::size_t i = 0; i < r.per_run.size(); ++i) {
        const auto& m = r.per_run[i];
        runs.push_back({{"seed", base_seed + i},
                        {"tp", m.tp},
                        {"tn", m.tn},
                        {"fp", m.fp},
                        {"fn", m.fn},
                        {"sensitivity", m.sensitivity()},
                        {"specificity", m.specificity()},
                        {"performance", m.performance()}});
    }
    auto summary = [](const RunSummary& s) { return Json{{"mean", s.mean}, {"half_width", s.half_width}}; };
    return {{"arm", arm},
            {"runs", r.per_run.size()},
            {"base_seed", base_seed},
            {"interval", "1.96 x sample standard deviation"},
            {"per_run", std::move(runs)},
            {"summary",
             {{"sensitivity", summary(r.sensitivity)},
              {"specificity", summary(r.specificity)},
              {"performance", summary(r.performance)}}}};
}

} // namespace pnndt
