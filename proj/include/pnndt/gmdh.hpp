#pragma once

// GMDH-type polynomial network induction.
//
// Layered growth: every pair of available inputs becomes a candidate neuron,
// candidates are fitted on D_A/D_B and ranked by the exterior criterion
// CR = sum_k (g(v_k; w) - y_k)^2, and the F best feed the next layer. Growth
// stops at the first layer r* with |CR_min(r*) - CR_min(r*-1)| < Delta; the
// best neuron of layer r*-1 becomes the network output.
//
// Random pairing: neurons are drawn from a growing pool of features and
// previously accepted neurons and kept only when they improve on both parents.

#include <pnndt/common.hpp>
#include <pnndt/dataset.hpp>
#include <pnndt/neuron.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace pnndt {

// ---------------------------------------------------------------------------
// Network

struct NetworkNeuron {
    PolynomialNeuron neuron;
    int layer = 1;
};

/// Layered DAG of polynomial neurons. Neuron ids are positions in `neurons()`.
class PNNetwork {
public:
    PNNetwork() = default;

    PNNetwork(std::vector<std::string> feature_names, std::vector<NetworkNeuron> neurons, std::size_t output)
        : names_(std::move(feature_names)), neurons_(std::move(neurons)), output_(output) {
        if (neurons_.empty()) throw Error("network has no neurons");
        if (output_ >= neurons_.size()) throw Error("network output id out of range");
        for (std::size_t id = 0; id < neurons_.size(); ++id) {
            const auto& nn = neurons_[id];
            if (nn.neuron.input_a == nn.neuron.input_b)
                throw Error("neuron y" + std::to_string(id + 1) + " uses the same input twice");
            for (const auto& w : nn.neuron.weights)
                if (!std::isfinite(w)) throw Error("neuron y" + std::to_string(id + 1) + " has a non-finite weight");
            for (const InputRef& in : {nn.neuron.input_a, nn.neuron.input_b}) {
                if (in.is_feature()) {
                    if (in.index >= names_.size())
                        throw Error("neuron y" + std::to_string(id + 1) + " references unknown feature " +
                                    std::to_string(in.index));
                } else if (in.index >= id || neurons_[in.index].layer >= nn.layer) {
                    throw Error("neuron y" + std::to_string(id + 1) + " must reference a neuron of an earlier layer");
                }
            }
        }
        std::set<std::size_t> features;
        std::vector<bool> seen(neurons_.size(), false);
        std::vector<std::size_t> stack{output_};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (seen[id]) continue;
            seen[id] = true;
            for (const InputRef& in : {neurons_[id].neuron.input_a, neurons_[id].neuron.input_b})
                in.is_feature() ? void(features.insert(in.index)) : stack.push_back(in.index);
        }
        input_features_.assign(features.begin(), features.end());
    }

    const std::vector<std::string>& feature_names() const { return names_; }
    std::size_t feature_count() const { return names_.size(); }
    const std::vector<NetworkNeuron>& neurons() const { return neurons_; }
    std::size_t output() const { return output_; }
    /// Original feature columns reachable from the output neuron, ascending.
    const std::vector<std::size_t>& input_feature_ids() const { return input_features_; }

    friend bool operator==(const PNNetwork& a, const PNNetwork& b) {
        if (a.names_ != b.names_ || a.output_ != b.output_ || a.neurons_.size() != b.neurons_.size()) return false;
        for (std::size_t i = 0; i < a.neurons_.size(); ++i) {
            const auto &x = a.neurons_[i], &y = b.neurons_[i];
            if (x.layer != y.layer || x.neuron.input_a != y.neuron.input_a || x.neuron.input_b != y.neuron.input_b ||
                x.neuron.weights != y.neuron.weights)
                return false;
        }
        return true;
    }

private:
    std::vector<std::string> names_;
    std::vector<NetworkNeuron> neurons_;
    std::size_t output_ = 0;
    std::vector<std::size_t> input_features_;
};

inline double predict_network(const PNNetwork& net, std::span<const double> x) {
    if (x.size() != net.feature_count())
        throw Error("input has " + std::to_string(x.size()) + " features, network expects " +
                    std::to_string(net.feature_count()));
    std::vector<double> out(net.neurons().size());
    auto value = [&](const InputRef& in) { return in.is_feature() ? x[in.index] : out[in.index]; };
    for (std::size_t id = 0; id < net.neurons().size(); ++id) {
        const auto& n = net.neurons()[id].neuron;
        out[id] = transfer(n, value(n.input_a), value(n.input_b));
    }
    return out[net.output()];
}

inline Label classify_network(const PNNetwork& net, std::span<const double> x, double threshold = 0.5) {
    return predict_network(net, x) >= threshold ? kArtifact : kNormal;
}

// ---------------------------------------------------------------------------
// Polynomial listing: `y1 = P(AbsPowThetaC4, RelPowThetaC4; [0.9466 -0.0875 0.0731 0.0703])`

inline std::string render_polynomials(const PNNetwork& net) {
    auto name = [&](const InputRef& in) {
        return in.is_feature() ? net.feature_names()[in.index] : "y" + std::to_string(in.index + 1);
    };
    std::string s;
    for (std::size_t id = 0; id < net.neurons().size(); ++id) {
        const auto& n = net.neurons()[id].neuron;
        s += "y" + std::to_string(id + 1) + " = P(" + name(n.input_a) + ", " + name(n.input_b) + "; [";
        for (std::size_t c = 0; c < 4; ++c) s += (c ? " " : "") + format_fixed(n.weights[c], 4);
        s += "])\n";
    }
    return s;
}

/// Reads a polynomial listing back into a network over `feature_names`.
/// The last listed neuron becomes the output.
inline PNNetwork parse_polynomials(const std::string& text, std::vector<std::string> feature_names) {
    std::map<std::string, std::size_t> feature_index;
    for (std::size_t j = 0; j < feature_names.size(); ++j) feature_index[feature_names[j]] = j;

    std::vector<NetworkNeuron> neurons;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fail = [&](const std::string& why) {
            return Error("polynomial listing line " + std::to_string(line_no) + ": " + why);
        };
        const auto eq = line.find(" = P("), semi = line.find("; ["), close = line.find("])");
        if (eq == std::string::npos || semi == std::string::npos || close == std::string::npos || semi > close)
            throw fail("expected 'y<k> = P(<a>, <b>; [w0 w1 w2 w3])'");
        if (line.substr(0, eq) != "y" + std::to_string(neurons.size() + 1))
            throw fail("neurons must be numbered consecutively from y1");

        const std::string args = line.substr(eq + 5, semi - eq - 5);
        const auto comma = args.find(", ");
        if (comma == std::string::npos) throw fail("expected two comma-separated inputs");
        auto resolve = [&](const std::string& token) -> InputRef {
            if (auto it = feature_index.find(token); it != feature_index.end()) return InputRef::feature(it->second);
            if (token.size() > 1 && token[0] == 'y' && token.find_first_not_of("0123456789", 1) == std::string::npos) {
                const auto k = std::stoul(token.substr(1));
                if (k >= 1 && k <= neurons.size()) return InputRef::neuron(k - 1);
            }
            throw fail("unknown input '" + token + "'");
        };
        NetworkNeuron nn;
        nn.neuron.input_a = resolve(args.substr(0, comma));
        nn.neuron.input_b = resolve(args.substr(comma + 2));

        std::istringstream ws(line.substr(semi + 3, close - semi - 3));
        for (auto& w : nn.neuron.weights)
            if (!(ws >> w)) throw fail("expected four weights");
        std::string extra;
        if (ws >> extra) throw fail("more than four weights");

        nn.layer = 1;
        for (const InputRef& r : {nn.neuron.input_a, nn.neuron.input_b})
            if (!r.is_feature()) nn.layer = std::max(nn.layer, neurons[r.index].layer + 1);
        neurons.push_back(nn);
    }
    if (neurons.empty()) throw Error("polynomial listing is empty");
    const auto output = neurons.size() - 1;
    return {std::move(feature_names), std::move(neurons), output};
}

// ---------------------------------------------------------------------------
// Growth

enum class CriterionScope { Whole, Validation };

struct GrowConfig {
    std::size_t F = 0;         // survivors per layer; 0 selects floor(0.4 * C(m,2))
    double Delta = 1.5e-2;     // stopping threshold on |CR_min(r) - CR_min(r-1)|
    FitConfig fit;
    int max_layers = 10;
    std::uint64_t seed = 0;
    double validation_fraction = 0.5;  // n_B / n
    CriterionScope criterion_scope = CriterionScope::Whole;
    int fail_limit = 7;        // random pairing: consecutive rejections before stopping
    int max_attempts = 5000;   // random pairing: hard cap on fitted candidates
    int jobs = 1;

    void validate() const {
        fit.validate();
        if (!(Delta > 0.0)) throw Error("Delta must be positive");
        if (max_layers < 1) throw Error("max_layers must be at least 1");
        if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
            throw Error("validation_fraction must lie in (0,1)");
        if (fail_limit < 1) throw Error("fail_limit must be at least 1");
        if (max_attempts < 1) throw Error("max_attempts must be at least 1");
        if (jobs < 1) throw Error("jobs must be at least 1");
    }

    std::size_t survivors(std::size_t feature_count) const {
        if (F > 0) return F;
        const std::size_t pairs = feature_count * (feature_count - 1) / 2;
        return std::max<std::size_t>(1, static_cast<std::size_t>(0.4 * static_cast<double>(pairs)));
    }
};

struct LayerReport {
    int layer = 0;
    std::size_t candidate_count = 0;  // L_r
    std::vector<double> criteria;     // ascending
    double cr_min = 0.0;
};

/// All unordered pairs (i, j), i < j, of positions in `inputs`, lexicographic.
template <class T>
std::vector<std::pair<T, T>> generate_candidates(std::span<const T> inputs) {
    if (inputs.size() < 2) throw Error("candidate generation needs at least 2 inputs");
    std::vector<std::pair<T, T>> out;
    out.reserve(inputs.size() * (inputs.size() - 1) / 2);
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (std::size_t j = i + 1; j < inputs.size(); ++j) out.emplace_back(inputs[i], inputs[j]);
    return out;
}

inline std::vector<std::pair<InputRef, InputRef>> generate_candidates(const std::vector<InputRef>& inputs) {
    return generate_candidates(std::span<const InputRef>(inputs));
}

/// Sum of squared residuals of a neuron over the given rows.
inline double exterior_criterion(const Weights& w, const FitData& rows) { return sum_squared_error(rows, w); }

/// One signal available as a neuron input, evaluated on every row of D (in
/// the split order of GrowthData), with its per-part sums.
struct Signal {
    InputRef ref;
    std::vector<double> values;
    struct Sums {
        double x = 0, xx = 0, xy = 0;
    } train, valid;
};

struct FittedCandidate {
    std::size_t a = 0, b = 0;  // positions in the layer's input signal list
    Weights weights{};
    double criterion = 0.0;
    std::size_t order = 0;     // generation index
    FitTrace trace;
};

/// Training context shared by all candidates. Rows of D are held in split
/// order, D_A first and D_B after it, so each part is a contiguous range of
/// every signal.
class GrowthData {
public:
    GrowthData(const LabeledDataset& d, SplitAssignment split) : split_(std::move(split)) {
        order_ = split_.train;
        order_.insert(order_.end(), split_.validation.begin(), split_.validation.end());
        train_rows_ = split_.train.size();
        targets_.resize(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) {
            targets_[k] = static_cast<double>(d.label(order_[k]));
            auto& ts = target_sums_[k < train_rows_ ? 0 : 1];
            ts.y += targets_[k];
            ts.yy += targets_[k] * targets_[k];
        }
    }

    std::size_t rows() const { return targets_.size(); }
    std::size_t train_rows() const { return train_rows_; }
    /// Targets in split order.
    const std::vector<double>& targets() const { return targets_; }
    const SplitAssignment& assignment() const { return split_; }

    /// Wraps values (in split order) as a signal and records its sums.
    Signal signal(InputRef ref, std::vector<double> values) const {
        Signal s{ref, std::move(values), {}, {}};
        for (std::size_t k = 0; k < rows(); ++k) {
            auto& part = k < train_rows_ ? s.train : s.valid;
            const double x = s.values[k];
            part.x += x;
            part.xx += x * x;
            part.xy += x * targets_[k];
        }
        return s;
    }

    /// One signal per feature column of `d`, in split order.
    std::vector<Signal> feature_signals(const LabeledDataset& d) const {
        std::vector<Signal> s;
        for (std::size_t j = 0; j < d.cols(); ++j) {
            std::vector<double> v(order_.size());
            for (std::size_t k = 0; k < order_.size(); ++k) v[k] = d.at(order_[k], j);
            s.push_back(signal(InputRef::feature(j), std::move(v)));
        }
        return s;
    }

    /// Fits one candidate over signals (a, b) and scores it.
    FittedCandidate fit(const Signal& a, const Signal& b, const FitConfig& fit_cfg, CriterionScope scope) const {
        Moments train = part_moments(a, b, a.train, b.train, 0, train_rows_, target_sums_[0]);
        const Moments valid = part_moments(a, b, a.valid, b.valid, train_rows_, rows(), target_sums_[1]);
        auto res = fit_weights(train, valid, fit_cfg);
        FittedCandidate c;
        c.weights = res.weights;
        c.trace = std::move(res.trace);
        if (scope == CriterionScope::Whole) train += valid;
        c.criterion = sum_squared_error(scope == CriterionScope::Whole ? train : valid, c.weights);
        return c;
    }

private:
    struct TargetSums {
        double y = 0, yy = 0;
    };

    /// Moments of rows [begin, end) from the signals' cached sums plus the
    /// five sums involving the product term p = a b.
    Moments part_moments(const Signal& a, const Signal& b, const Signal::Sums& sa, const Signal::Sums& sb,
                         std::size_t begin, std::size_t end, const TargetSums& ts) const {
        const double* av = a.values.data();
        const double* bv = b.values.data();
        const double* yv = targets_.data();
        double p_sum = 0, ap = 0, bp = 0, pp = 0, py = 0;
#pragma omp simd reduction(+ : p_sum, ap, bp, pp, py)
        for (std::size_t k = begin; k < end; ++k) {
            const double p = av[k] * bv[k];
            p_sum += p;
            ap += av[k] * p;
            bp += bv[k] * p;
            pp += p * p;
            py += yv[k] * p;
        }
        Moments m;
        m.n = end - begin;
        m.gram = {{{static_cast<double>(m.n), sa.x, sb.x, p_sum},
                   {sa.x, sa.xx, p_sum, ap},
                   {sb.x, p_sum, sb.xx, bp},
                   {p_sum, ap, bp, pp}}};
        m.gy = {ts.y, sa.xy, sb.xy, py};
        m.yy = ts.yy;
        return m;
    }

    SplitAssignment split_;
    std::vector<std::size_t> order_;
    std::size_t train_rows_ = 0;
    std::vector<double> targets_;
    std::array<TargetSums, 2> target_sums_{};
};

struct LayerResult {
    std::vector<FittedCandidate> selected;  // ascending criterion
    LayerReport report;
};

inline std::vector<double> neuron_outputs(const Weights& w, const Signal& a, const Signal& b) {
    std::vector<double> v(a.values.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = transfer(w, a.values[k], b.values[k]);
    return v;
}

/// Fits every pair of `inputs`, ranks by (criterion, generation order) and keeps
/// the first min(F, L_r).
inline LayerResult grow_layer(std::span<const Signal> inputs, const GrowthData& data, const GrowConfig& cfg,
                              int layer, std::size_t survivors) {
    if (inputs.size() < 2) throw Error("a layer needs at least 2 inputs");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (std::size_t j = i + 1; j < inputs.size(); ++j) pairs.emplace_back(i, j);

    std::vector<FittedCandidate> cands(pairs.size());
    const std::uint64_t layer_seed = derive_seed(cfg.seed, 0xF17, static_cast<std::uint64_t>(layer));
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t c = begin; c < pairs.size(); c += stride) {
            FitConfig fc = cfg.fit;
            fc.seed = derive_seed(layer_seed, cfg.fit.seed, c);
            auto fc_res = data.fit(inputs[pairs[c].first], inputs[pairs[c].second], fc, cfg.criterion_scope);
            fc_res.a = pairs[c].first;
            fc_res.b = pairs[c].second;
            fc_res.order = c;
            cands[c] = std::move(fc_res);
        }
    };
    const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), pairs.size());
    if (jobs <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                try {
                    work(t, jobs);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        pool.clear();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::stable_sort(cands.begin(), cands.end(),
                     [](const FittedCandidate& x, const FittedCandidate& y) { return x.criterion < y.criterion; });
    LayerResult out;
    out.report.layer = layer;
    out.report.candidate_count = cands.size();
    for (const auto& c : cands) out.report.criteria.push_back(c.criterion);
    out.report.cr_min = out.report.criteria.front();
    cands.resize(std::min(survivors, cands.size()));
    out.selected = std::move(cands);
    return out;
}

struct GmdhResult {
    PNNetwork network;
    std::vector<LayerReport> reports;
    int stop_layer = 0;  // r*, the layer whose growth triggered the stop (0 if none)
};

namespace detail {

inline void require_two_classes(const LabeledDataset& d) {
    if (d.count(kNormal) < 2 || d.count(kArtifact) < 2)
        throw Error("training data must contain at least 2 examples of each class (got " +
                    std::to_string(d.count(kNormal)) + " normal, " + std::to_string(d.count(kArtifact)) +
                    " artifact)");
}

/// Growth-time neuron: inputs are either features or other growth neurons.
struct GrownNeuron {
    InputRef a, b;  // neuron refs index into the growth list
    Weights weights{};
    int layer = 1;
};

/// Keeps the output and its ancestors, renumbered in (layer, growth) order.
inline PNNetwork extract_network(const std::vector<GrownNeuron>& grown, std::size_t output,
                                 std::vector<std::string> names) {
    std::vector<bool> keep(grown.size(), false);
    std::vector<std::size_t> stack{output};
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        if (keep[id]) continue;
        keep[id] = true;
        for (const InputRef& in : {grown[id].a, grown[id].b})
            if (!in.is_feature()) stack.push_back(in.index);
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < grown.size(); ++i)
        if (keep[i]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return grown[x].layer < grown[y].layer; });
    std::vector<std::size_t> new_id(grown.size());
    for (std::size_t k = 0; k < order.size(); ++k) new_id[order[k]] = k;
    auto remap = [&](InputRef r) { return r.is_feature() ? r : InputRef::neuron(new_id[r.index]); };

    std::vector<NetworkNeuron> neurons;
    for (auto g : order) neurons.push_back({{remap(grown[g].a), remap(grown[g].b), grown[g].weights}, grown[g].layer});
    return {std::move(names), std::move(neurons), new_id[output]};
}

} // namespace detail

inline GmdhResult train_gmdh(const LabeledDataset& d, const GrowConfig& cfg) {
    cfg.validate();
    detail::require_two_classes(d);
    const GrowthData data(d, split(d, cfg.validation_fraction, derive_seed(cfg.seed, 0x5917)));
    const std::size_t survivors = cfg.survivors(d.cols());

    GmdhResult result;
    std::vector<detail::GrownNeuron> grown;
    std::vector<Signal> inputs = data.feature_signals(d);
    std::vector<std::size_t> prev_ids;  // growth ids of the previous layer's survivors, best first
    std::size_t output = 0;

    for (int r = 1; r <= cfg.max_layers; ++r) {
        auto layer = grow_layer(inputs, data, cfg, r, survivors);
        result.reports.push_back(layer.report);

        std::vector<std::size_t> ids;
        std::vector<Signal> next;
        for (const auto& c : layer.selected) {
            ids.push_back(grown.size());
            grown.push_back({inputs[c.a].ref, inputs[c.b].ref, c.weights, r});
            next.push_back(data.signal(InputRef::neuron(ids.back()), neuron_outputs(c.weights, inputs[c.a], inputs[c.b])));
        }

        if (r > 1) {
            const double prev_min = result.reports[result.reports.size() - 2].cr_min;
            if (std::abs(layer.report.cr_min - prev_min) < cfg.Delta) {
                result.stop_layer = r;
                output = prev_ids.front();
                break;
            }
        }
        output = ids.front();
        if (next.size() < 2) break;
        prev_ids = std::move(ids);
        inputs = std::move(next);
    }

    result.network = detail::extract_network(grown, output, d.feature_names());
    return result;
}

/// One candidate examined by the random-pairing search.
struct PairingAttempt {
    InputRef a, b;      // growth-pool references (neuron index = acceptance order)
    double criterion = 0.0;
    double parent_a = 0.0, parent_b = 0.0;  // parents' criteria when drawn
    bool accepted = false;
};

struct RandomGmdhResult {
    PNNetwork network;
    std::vector<PairingAttempt> attempts;
};

/// Random-pairing growth. A raw feature's criterion is the best criterion of
/// any candidate fitted directly on it so far, +inf until the first one.
inline RandomGmdhResult train_gmdh_random(const LabeledDataset& d, const GrowConfig& cfg) {
    cfg.validate();
    detail::require_two_classes(d);
    const GrowthData data(d, split(d, cfg.validation_fraction, derive_seed(cfg.seed, 0x5917)));
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<Signal> pool = data.feature_signals(d);
    std::vector<double> mu(pool.size(), kInf);
    std::vector<int> pool_layer(pool.size(), 0);
    std::vector<detail::GrownNeuron> grown;
    std::vector<double> grown_cr;

    RandomGmdhResult result;
    std::mt19937_64 rng(derive_seed(cfg.seed, 0x7a1));
    FittedCandidate fallback;
    InputRef fallback_a, fallback_b;
    bool have_fallback = false;

    int fails = 0;
    for (int attempt = 0; attempt < cfg.max_attempts && fails < cfg.fail_limit; ++attempt) {
        std::uniform_int_distribution<std::size_t> pick_a(0, pool.size() - 1), pick_b(0, pool.size() - 2);
        std::size_t i = pick_a(rng), j = pick_b(rng);
        if (j >= i) ++j;
        if (j < i) std::swap(i, j);

        FitConfig fc = cfg.fit;
        fc.seed = derive_seed(cfg.seed, cfg.fit.seed, static_cast<std::uint64_t>(attempt) + 0x10000);
        auto cand = data.fit(pool[i], pool[j], fc, cfg.criterion_scope);

        PairingAttempt log{pool[i].ref, pool[j].ref, cand.criterion, mu[i], mu[j], false};
        log.accepted = cand.criterion < std::min(mu[i], mu[j]);
        if (!have_fallback || cand.criterion < fallback.criterion) {
            fallback = cand;
            fallback_a = pool[i].ref;
            fallback_b = pool[j].ref;
            have_fallback = true;
        }
        for (auto p : {i, j})
            if (pool[p].ref.is_feature()) mu[p] = std::min(mu[p], cand.criterion);

        if (log.accepted) {
            fails = 0;
            const int layer = 1 + std::max(pool_layer[i], pool_layer[j]);
            const auto id = grown.size();
            grown.push_back({pool[i].ref, pool[j].ref, cand.weights, layer});
            grown_cr.push_back(cand.criterion);
            pool.push_back(data.signal(InputRef::neuron(id), neuron_outputs(cand.weights, pool[i], pool[j])));
            mu.push_back(cand.criterion);
            pool_layer.push_back(layer);
        } else {
            ++fails;
        }
        result.attempts.push_back(log);
    }

    std::size_t output = 0;
    if (grown.empty()) {
        int layer = 1;
        for (const InputRef& r : {fallback_a, fallback_b})
            if (!r.is_feature()) layer = std::max(layer, grown[r.index].layer + 1);
        grown.push_back({fallback_a, fallback_b, fallback.weights, layer});
    } else {
        output = static_cast<std::size_t>(std::min_element(grown_cr.begin(), grown_cr.end()) - grown_cr.begin());
    }
    result.network = detail::extract_network(grown, output, d.feature_names());
    return result;
}

} // namespace pnndt
