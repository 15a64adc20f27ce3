#pragma once

// A trained classifier of any arm plus its JSON persistence.

#include <pnndt/dataset.hpp>
#include <pnndt/gmdh.hpp>
#include <pnndt/knn.hpp>
#include <pnndt/tree.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pnndt {

using Json = nlohmann::ordered_json;

struct Model {
    std::string arm;  // dt, gmdh, pnn, pnn-dt, knn
    std::vector<std::string> feature_names;
    std::optional<NormStats> normalization;
    double threshold = 0.5;
    std::optional<PNNetwork> network;
    std::optional<DecisionTree> tree;
    std::optional<LabeledDataset> reference;  // k-nn training rows, normalized
    std::size_t k = 5;
    std::vector<std::size_t> kept_features;  // pnn-dt cleaning result
    std::map<std::string, std::string> config;

    std::vector<double> prepare(std::span<const double> raw) const {
        if (raw.size() != feature_names.size())
            throw Error("input has " + std::to_string(raw.size()) + " features, model expects " +
                        std::to_string(feature_names.size()));
        std::vector<double> x(raw.begin(), raw.end());
        if (normalization)
            for (std::size_t j = 0; j < x.size(); ++j) x[j] = normalize_value(*normalization, j, x[j]);
        return x;
    }

    /// Tree leaf probability, network output or k-nn vote, on raw features.
    double score(std::span<const double> raw) const {
        const auto x = prepare(raw);
        if (tree) return predict_dt(*tree, x, feature_names.size()).p;
        if (network) return predict_network(*network, x);
        if (reference) return static_cast<double>(knn_predict(*reference, x, k));
        throw Error("model holds no classifier");
    }

    Label classify(std::span<const double> raw) const {
        const auto x = prepare(raw);
        if (tree) return predict_dt(*tree, x, feature_names.size()).label;
        if (network) return classify_network(*network, x, threshold);
        if (reference) return knn_predict(*reference, x, k);
        throw Error("model holds no classifier");
    }

    /// Rendered rules: polynomial listing, tree diagram, or both separated by a blank line.
    std::string render_rules() const {
        std::string out;
        if (network) out += render_polynomials(*network);
        if (tree) out += (out.empty() ? "" : "\n") + render_tree(*tree, feature_names);
        if (out.empty()) throw Error("a " + arm + " model has no rules to export");
        return out;
    }
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Json input_to_json(const InputRef& r) {
    Json j;
    if (r.is_feature()) j["feature"] = r.index;
    else j["neuron"] = r.index + 1;
    return j;
}

inline InputRef input_from_json(const Json& j) {
    if (j.contains("feature")) return InputRef::feature(j.at("feature").get<std::size_t>());
    const auto id = j.at("neuron").get<std::size_t>();
    if (id < 1) throw Error("neuron references are 1-based");
    return InputRef::neuron(id - 1);
}

inline Json tree_to_json(const DecisionTree& t, std::size_t id, const std::vector<std::string>& names) {
    const TreeNode& n = t.node(id);
    Json j;
    if (n.leaf) {
        j["p"] = n.p;
        j["n1"] = n.n1;
        j["n2"] = n.n2;
    } else {
        j["feature"] = n.feature;
        if (n.feature < names.size()) j["name"] = names[n.feature];
        j["q"] = n.q;
        j["left"] = tree_to_json(t, n.left, names);
        j["right"] = tree_to_json(t, n.right, names);
    }
    return j;
}

inline DecisionTree tree_from_json(const Json& j, const std::vector<std::string>& names) {
    if (j.contains("p"))
        return DecisionTree::leaf_with_probability(j.at("p").get<double>(), j.value("n1", std::size_t{0}),
                                                   j.value("n2", std::size_t{0}));
    const auto f = j.at("feature").get<std::size_t>();
    if (f >= names.size()) throw Error("tree split references feature " + std::to_string(f) + " of " +
                                       std::to_string(names.size()));
    if (j.contains("name") && j.at("name").get<std::string>() != names[f])
        throw Error("tree split names '" + j.at("name").get<std::string>() + "' but feature " + std::to_string(f) +
                    " is '" + names[f] + "'");
    return DecisionTree::split(f, j.at("q").get<double>(), tree_from_json(j.at("left"), names),
                               tree_from_json(j.at("right"), names));
}

} // namespace detail

inline Json network_to_json(const PNNetwork& net) {
    Json neurons = Json::array();
    for (std::size_t id = 0; id < net.neurons().size(); ++id) {
        const auto& nn = net.neurons()[id];
        Json j;
        j["id"] = id + 1;
        j["layer"] = nn.layer;
        j["input_a"] = detail::input_to_json(nn.neuron.input_a);
        j["input_b"] = detail::input_to_json(nn.neuron.input_b);
        j["weights"] = nn.neuron.weights;
        neurons.push_back(std::move(j));
    }
    Json j;
    j["neurons"] = std::move(neurons);
    j["output"] = net.output() + 1;
    return j;
}

inline PNNetwork network_from_json(const Json& j, std::vector<std::string> names) {
    std::vector<NetworkNeuron> neurons;
    for (const auto& n : j.at("neurons")) {
        if (n.at("id").get<std::size_t>() != neurons.size() + 1)
            throw Error("network neuron ids must run 1, 2, ... in order");
        NetworkNeuron nn;
        nn.layer = n.at("layer").get<int>();
        nn.neuron.input_a = detail::input_from_json(n.at("input_a"));
        nn.neuron.input_b = detail::input_from_json(n.at("input_b"));
        nn.neuron.weights = n.at("weights").get<Weights>();
        neurons.push_back(nn);
    }
    const auto out = j.at("output").get<std::size_t>();
    if (out < 1) throw Error("network output id is 1-based");
    return {std::move(names), std::move(neurons), out - 1};
}

inline Json tree_to_json(const DecisionTree& t, const std::vector<std::string>& names) {
    return detail::tree_to_json(t, 0, names);
}

inline DecisionTree tree_from_json(const Json& j, const std::vector<std::string>& names) {
    return detail::tree_from_json(j, names);
}

inline Json model_to_json(const Model& m) {
    Json j;
    j["format"] = "pnndt-model";
    j["version"] = 1;
    j["arm"] = m.arm;
    j["feature_names"] = m.feature_names;
    if (m.normalization) j["normalization"] = {{"means", m.normalization->means}, {"stddevs", m.normalization->stddevs}};
    else j["normalization"] = nullptr;
    j["threshold"] = m.threshold;
    if (m.network) j["network"] = network_to_json(*m.network);
    if (m.tree) j["tree"] = tree_to_json(*m.tree, m.feature_names);
    if (!m.kept_features.empty()) j["kept_features"] = m.kept_features;
    if (m.reference) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < m.reference->rows(); ++i) {
            auto r = m.reference->row(i);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        j["knn"] = {{"k", m.k}, {"rows", std::move(rows)}, {"labels", m.reference->labels()}};
    }
    Json cfg = Json::object();
    for (const auto& [key, value] : m.config) cfg[key] = value;
    j["config"] = std::move(cfg);
    return j;
}

inline Model model_from_json(const Json& j) {
    if (j.value("format", std::string{}) != "pnndt-model") throw Error("not a pnndt model file");
    Model m;
    m.arm = j.at("arm").get<std::string>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (const auto& n = j.at("normalization"); !n.is_null()) {
        m.normalization = NormStats{n.at("means").get<std::vector<double>>(), n.at("stddevs").get<std::vector<double>>()};
        if (m.normalization->means.size() != m.feature_names.size() ||
            m.normalization->stddevs.size() != m.feature_names.size())
            throw Error("normalization statistics do not match the feature count");
    }
    m.threshold = j.value("threshold", 0.5);
    if (j.contains("network")) m.network = network_from_json(j.at("network"), m.feature_names);
    if (j.contains("tree")) {
        m.tree = tree_from_json(j.at("tree"), m.feature_names);
    }
    if (j.contains("kept_features")) m.kept_features = j.at("kept_features").get<std::vector<std::size_t>>();
    if (j.contains("knn")) {
        const auto& kj = j.at("knn");
        m.k = kj.at("k").get<std::size_t>();
        std::vector<double> values;
        for (const auto& r : kj.at("rows")) {
            auto row = r.get<std::vector<double>>();
            if (row.size() != m.feature_names.size()) throw Error("k-nn reference row has the wrong width");
            values.insert(values.end(), row.begin(), row.end());
        }
        m.reference = LabeledDataset(std::move(values), kj.at("labels").get<std::vector<Label>>(), m.feature_names);
    }
    if (j.contains("config"))
        for (const auto& [key, value] : j.at("config").items()) m.config[key] = value.get<std::string>();
    if (!m.network && !m.tree && !m.reference) throw Error("model file holds no classifier");
    return m;
}

inline void save_model(const std::filesystem::path& path, const Model& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file '" + path.string() + "'");
    out << model_to_json(m).dump(2) << '\n';
    if (!out) throw Error("failed writing model file '" + path.string() + "'");
}

inline Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file '" + path.string() + "'");
    try {
        return model_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw Error("corrupt model file '" + path.string() + "': " + e.what());
    }
}

} // namespace pnndt
