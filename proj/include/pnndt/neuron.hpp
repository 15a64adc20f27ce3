#pragma once

// Two-input polynomial neuron y = w0 + w1*v1 + w2*v2 + w3*v1*v2 and its
// distribution-free iterative weight fitting.
//
// Fitting repeats the projection step
//
//     w <- w - chi * ||G_A||_F^-2 * G_A^T * eta_A
//
// where G_A is the n_A x 4 design matrix of the training pairs and eta_A the
// training residual, and stops as soon as the validation MSE improves by less
// than delta between consecutive steps. Any chi in (1,2) converges.

#include <pnndt/common.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pnndt {

using Weights = std::array<double, 4>;

/// A neuron input: either an original feature column or an earlier neuron.
struct InputRef {
    enum class Kind { Feature, Neuron };
    Kind kind = Kind::Feature;
    std::size_t index = 0;

    static InputRef feature(std::size_t i) { return {Kind::Feature, i}; }
    static InputRef neuron(std::size_t i) { return {Kind::Neuron, i}; }
    bool is_feature() const { return kind == Kind::Feature; }

    friend bool operator==(const InputRef&, const InputRef&) = default;
    friend auto operator<=>(const InputRef&, const InputRef&) = default;
};

struct PolynomialNeuron {
    InputRef input_a;
    InputRef input_b;
    Weights weights{};
};

inline constexpr std::array<double, 4> design_row(double v1, double v2) { return {1.0, v1, v2, v1 * v2}; }

inline constexpr double transfer(const Weights& w, double v1, double v2) {
    return w[0] + w[1] * v1 + w[2] * v2 + w[3] * v1 * v2;
}

inline double transfer(const PolynomialNeuron& n, double v1, double v2) { return transfer(n.weights, v1, v2); }

struct FitConfig {
    double chi = 1.9;
    double delta = 1.5e-2;
    int max_steps = 200;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(chi > 1.0 && chi < 2.0)) throw Error("learning rate chi must lie in (1,2)");
        if (!(delta > 0.0)) throw Error("convergence threshold delta must be positive");
        if (max_steps < 1) throw Error("max_steps must be at least 1");
    }
};

struct FitTrace {
    int steps_taken = 0;                 // k*
    double initial_validation_error = 0;  // e_B(0), before the first update
    std::vector<double> validation_errors;  // e_B(1) .. e_B(k*)
};

struct FitResult {
    Weights weights{};
    FitTrace trace;
};

/// Paired neuron inputs with their regression targets.
struct FitData {
    std::span<const double> v1;
    std::span<const double> v2;
    std::span<const double> target;

    std::size_t size() const { return target.size(); }
};

/// G^T * (G w - y): half the gradient of the sum-squared error in w.
inline Weights update_direction(const FitData& d, const Weights& w) {
    Weights g{};
    for (std::size_t k = 0; k < d.size(); ++k) {
        const auto row = design_row(d.v1[k], d.v2[k]);
        const double eta = transfer(w, d.v1[k], d.v2[k]) - d.target[k];
        for (std::size_t c = 0; c < 4; ++c) g[c] += row[c] * eta;
    }
    return g;
}

inline double sum_squared_error(const FitData& d, const Weights& w) {
    double e = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double eta = transfer(w, d.v1[k], d.v2[k]) - d.target[k];
        e += eta * eta;
    }
    return e;
}

inline double mean_squared_error(const FitData& d, const Weights& w) {
    return d.size() == 0 ? 0.0 : sum_squared_error(d, w) / static_cast<double>(d.size());
}

/// Squared Frobenius norm of the design matrix built from `d`.
inline double design_norm_sq(const FitData& d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k)
        for (double x : design_row(d.v1[k], d.v2[k])) s += x * x;
    return s;
}

/// Sufficient statistics of a least-squares system over design rows
/// (1, v1, v2, v1 v2): G^T G, G^T y, y^T y and the row count. Every error and
/// update the fitter needs is a small quadratic form in these.
struct Moments {
    std::array<std::array<double, 4>, 4> gram{};
    Weights gy{};
    double yy = 0.0;
    std::size_t n = 0;

    void add(double v1, double v2, double y) {
        const auto row = design_row(v1, v2);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i; j < 4; ++j) gram[i][j] += row[i] * row[j];
            gy[i] += row[i] * y;
        }
        yy += y * y;
        ++n;
    }

    /// Copies the accumulated upper triangle into the lower one.
    void symmetrize() {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < i; ++j) gram[i][j] = gram[j][i];
    }

    Moments& operator+=(const Moments& o) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) gram[i][j] += o.gram[i][j];
            gy[i] += o.gy[i];
        }
        yy += o.yy;
        n += o.n;
        return *this;
    }
};

inline Moments moments(const FitData& d) {
    Moments m;
    for (std::size_t k = 0; k < d.size(); ++k) m.add(d.v1[k], d.v2[k], d.target[k]);
    m.symmetrize();
    return m;
}

/// G^T G w - G^T y, identical to update_direction on the underlying rows.
inline Weights update_direction(const Moments& m, const Weights& w) {
    Weights g{};
    for (std::size_t i = 0; i < 4; ++i) {
        double s = -m.gy[i];
        for (std::size_t j = 0; j < 4; ++j) s += m.gram[i][j] * w[j];
        g[i] = s;
    }
    return g;
}

/// w^T G^T G w - 2 w^T G^T y + y^T y, clamped at zero against round-off.
inline double sum_squared_error(const Moments& m, const Weights& w) {
    double e = m.yy;
    for (std::size_t i = 0; i < 4; ++i) {
        double gw = 0.0;
        for (std::size_t j = 0; j < 4; ++j) gw += m.gram[i][j] * w[j];
        e += w[i] * (gw - 2.0 * m.gy[i]);
    }
    return std::max(e, 0.0);
}

inline double mean_squared_error(const Moments& m, const Weights& w) {
    return m.n == 0 ? 0.0 : sum_squared_error(m, w) / static_cast<double>(m.n);
}

/// Iterative projection fit from precomputed moments of D_A (train) and D_B (valid).
inline FitResult fit_weights(const Moments& train, const Moments& valid, const FitConfig& cfg) {
    cfg.validate();
    if (train.n < 4) throw Error("weight fitting needs at least 4 training rows");

    const double norm_sq = train.gram[0][0] + train.gram[1][1] + train.gram[2][2] + train.gram[3][3];
    if (!(norm_sq > 0.0)) throw Error("design matrix has zero norm");
    const double step = cfg.chi / norm_sq;

    FitResult r;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> init(0.0, 1.0);
    for (double& w : r.weights) w = init(rng);

    double prev = mean_squared_error(valid, r.weights);
    r.trace.initial_validation_error = prev;
    for (int k = 1; k <= cfg.max_steps; ++k) {
        const Weights g = update_direction(train, r.weights);
        for (std::size_t c = 0; c < 4; ++c) {
            r.weights[c] -= step * g[c];
            if (!std::isfinite(r.weights[c]) || std::abs(r.weights[c]) > 1e12)
                throw Error("weight fitting diverged");
        }
        const double e = mean_squared_error(valid, r.weights);
        if (!std::isfinite(e)) throw Error("weight fitting produced a non-finite validation error");
        r.trace.validation_errors.push_back(e);
        r.trace.steps_taken = k;
        if (prev - e < cfg.delta) break;
        prev = e;
    }
    return r;
}

inline FitResult fit_weights(const FitData& train, const FitData& valid, const FitConfig& cfg) {
    cfg.validate();
    if (train.size() < 4) throw Error("weight fitting needs at least 4 training rows");
    if (train.v1.size() != train.size() || train.v2.size() != train.size() || valid.v1.size() != valid.size() ||
        valid.v2.size() != valid.size())
        throw Error("neuron input and target lengths differ");
    return fit_weights(moments(train), moments(valid), cfg);
}

} // namespace pnndt
