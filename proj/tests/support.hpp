#pragma once

// Dataset builders shared by the unit tests and the acceptance binary.

#include <pnndt/dataset.hpp>
#include <pnndt/neuron.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace support {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::vector<std::string> names(std::size_t m) {
    std::vector<std::string> n;
    for (std::size_t j = 0; j < m; ++j) n.push_back("f" + std::to_string(j));
    return n;
}

enum class Gate { And, Or, Xor };

/// Binary features; the label is a gate of `x[a]` and `x[b]`, which a single
/// neuron reproduces exactly: AND = ab, OR = a + b - ab, XOR = a + b - 2ab.
inline pnndt::LabeledDataset realizable_gate(std::size_t n, std::size_t m, std::size_t a, std::size_t b, Gate gate,
                                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> v(n * m);
    std::vector<pnndt::Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) v[i * m + j] = coin(rng) ? 1.0 : 0.0;
        const double xa = v[i * m + a], xb = v[i * m + b];
        const double t = gate == Gate::And ? xa * xb : gate == Gate::Or ? xa + xb - xa * xb : xa + xb - 2 * xa * xb;
        y[i] = static_cast<pnndt::Label>(t);
    }
    return {std::move(v), std::move(y), names(m)};
}

inline pnndt::LabeledDataset realizable_or(std::size_t n, std::size_t m, std::size_t a, std::size_t b,
                                           std::uint64_t seed) {
    return realizable_gate(n, m, a, b, Gate::Or, seed);
}

/// Gaussian features, labels drawn at random.
inline pnndt::LabeledDataset gaussian_random(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n * m);
    std::vector<pnndt::Label> y(n);
    for (auto& x : v) x = g(rng);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<pnndt::Label>(i % 2);
    std::shuffle(y.begin(), y.end(), rng);
    return {std::move(v), std::move(y), names(m)};
}

/// Noisy neuron regression problem: w* ~ N(0,1), Gaussian inputs, targets
/// w*.design_row + N(0, 0.1^2); the first half of the rows trains, the rest validates.
struct NeuronProblem {
    pnndt::Weights w_true{};
    std::vector<double> a_tr, b_tr, y_tr, a_va, b_va, y_va;
    pnndt::FitData train() const { return {a_tr, b_tr, y_tr}; }
    pnndt::FitData valid() const { return {a_va, b_va, y_va}; }
};

inline NeuronProblem neuron_problem(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 77);
    std::normal_distribution<double> g(0.0, 1.0);
    NeuronProblem p;
    for (auto& w : p.w_true) w = g(rng);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = g(rng), v = g(rng), t = pnndt::transfer(p.w_true, u, v) + 0.1 * g(rng);
        const bool train = k < n / 2;
        (train ? p.a_tr : p.a_va).push_back(u);
        (train ? p.b_tr : p.b_va).push_back(v);
        (train ? p.y_tr : p.y_va).push_back(t);
    }
    return p;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr, interleaved
};

/// Runs a shell command and captures its combined output.
inline CommandResult run_command(const std::string& cmd) {
    CommandResult r;
    FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace support
