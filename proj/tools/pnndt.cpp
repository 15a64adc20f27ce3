// pnndt: command-line front end.
//
//   pnndt synth        --n 100 --relevant 8 --noise 0.1 --seed 7 --out d.csv
//   pnndt train        --train d.csv --arm pnn-dt --model m.json
//   pnndt evaluate     --model m.json --test t.csv
//   pnndt evaluate     --train d.csv --test t.csv --arm dt --runs 30 --dump runs.json
//   pnndt predict      --model m.json --data x.csv --out p.csv
//   pnndt export-rules --model m.json --out rules.txt

#include <pnndt/pnndt.hpp>
#include <pnndt/synth.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr int kUsageError = 2;

/// Raised for argument and configuration problems (exit status 2).
struct UsageError : pnndt::Error {
    using pnndt::Error::Error;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pnndt::Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw pnndt::Error("failed writing '" + path + "'");
}

/// Registers one string flag per experiment key, showing built-in defaults.
struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--config", config_file, "Flat key=value config file (flags override it)");
        const pnndt::ExperimentConfig defaults;
        static const std::map<std::string, std::string> help{
            {"train", "Training CSV"},
            {"test", "Test CSV"},
            {"model", "Model file"},
            {"arm", "Classifier: dt, gmdh, pnn, pnn-dt, knn"},
            {"runs", "Repeated runs R (evaluate)"},
            {"base_seed", "Seed of the first run"},
            {"normalize", "Zero-mean/unit-variance scaling fitted on training data"},
            {"threshold", "Network output cut for class 1"},
            {"k", "Neighbours for the k-nn arm"},
            {"network", "Network used by pnn-dt: random or layered"},
            {"chi", "Weight-fit learning rate, in (1,2)"},
            {"delta", "Weight-fit stop threshold on validation MSE improvement"},
            {"max_steps", "Weight-fit step cap"},
            {"F", "Neurons kept per layer (0 = 0.4 * C(m,2))"},
            {"Delta", "Layer stop threshold on |CR_min(r) - CR_min(r-1)|"},
            {"max_layers", "Layer cap"},
            {"validation_fraction", "Share of rows in the validation part n_B/n"},
            {"criterion_scope", "Exterior criterion rows: whole or validation"},
            {"fail_limit", "Random pairing: consecutive failed attempts before stopping"},
            {"max_attempts", "Random pairing: cap on fitted candidates"},
            {"jobs", "Worker threads for candidate fitting (results unchanged)"},
            {"min_examples", "Tree: split a side only with more than this many of both classes"},
            {"min_fraction", "Tree: same limit as a fraction of the training set"},
            {"lambda", "Tree: random thresholds tried per feature"},
        };
        for (const auto& key : pnndt::ExperimentConfig::keys()) {
            auto* opt = cmd.add_option("--" + key, values[key], help.at(key));
            const auto def = defaults.get(key);
            if (!def.empty()) opt->default_str(def);
            options[key] = opt;
        }
    }

    /// Defaults, then the config file, then explicit flags.
    pnndt::ExperimentConfig resolve() const {
        pnndt::ExperimentConfig cfg;
        try {
            if (!config_file.empty())
                for (const auto& [k, v] : pnndt::read_config_file(config_file)) cfg.set(k, v);
            for (const auto& [key, opt] : options)
                if (opt->count() > 0) cfg.set(key, values.at(key));
            cfg.validate();
        } catch (const pnndt::Error& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

void warn_degenerate(const pnndt::Model& m) {
    if (!m.normalization) return;
    const auto flags = m.normalization->degenerate();
    for (std::size_t j = 0; j < flags.size(); ++j)
        if (flags[j])
            std::cerr << "warning: feature '" << m.feature_names[j]
                      << "' has zero variance in the training data; it is only mean-centered\n";
}

std::string require(const std::string& value, const char* what) {
    if (value.empty()) throw UsageError(std::string("missing required setting: ") + what);
    return value;
}

int cmd_synth(std::size_t n, int relevant, double noise, std::uint64_t seed, const std::string& out) {
    const auto ds = pnndt::synth_generate(n, relevant, noise, seed);
    pnndt::write_csv(out, ds);
    std::cout << "wrote " << ds.rows() << " rows x " << ds.cols() + 1 << " columns to " << out << "\n";
    return 0;
}

int cmd_train(const ConfigFlags& flags) {
    const auto cfg = flags.resolve();
    const auto data = pnndt::load_csv(require(cfg.train_path, "--train"));
    const auto model = pnndt::train_model(cfg, data, cfg.base_seed);
    warn_degenerate(model);
    if (model.network) std::cout << "# polynomial network\n" << pnndt::render_polynomials(*model.network);
    if (model.network && model.tree) std::cout << "\n";
    if (model.tree) std::cout << "# decision tree\n" << pnndt::render_tree(*model.tree, model.feature_names);
    if (model.reference) std::cout << "# k-nn over " << model.reference->rows() << " reference rows, k=" << model.k << "\n";
    if (!cfg.model_path.empty()) pnndt::save_model(cfg.model_path, model);
    return 0;
}

int cmd_evaluate(const ConfigFlags& flags, const std::string& dump_path) {
    const auto cfg = flags.resolve();
    const auto test = pnndt::load_csv(require(cfg.test_path, "--test"));

    if (cfg.runs <= 1) {
        pnndt::Model model;
        if (!cfg.train_path.empty()) {
            model = pnndt::train_model(cfg, pnndt::load_csv(cfg.train_path), cfg.base_seed);
        } else {
            model = pnndt::load_model(require(cfg.model_path, "--model or --train"));
        }
        const auto m = pnndt::evaluate_model(model, test);
        std::cout << pnndt::report_header() << pnndt::report_row(model.arm, m);
        if (!dump_path.empty()) {
            pnndt::Json j{{"arm", model.arm}, {"runs", 1}, {"tp", m.tp}, {"tn", m.tn}, {"fp", m.fp}, {"fn", m.fn}};
            write_text(dump_path, j.dump(2) + "\n");
        }
        return 0;
    }

    const auto train = pnndt::load_csv(require(cfg.train_path, "--train (required with --runs > 1)"));
    const auto runs = pnndt::repeated_runs(
        [&](std::uint64_t seed) { return pnndt::evaluate_model(pnndt::train_model(cfg, train, seed), test); },
        cfg.runs, cfg.base_seed);
    std::cout << pnndt::report_note(cfg.runs) << pnndt::report_header() << pnndt::report_row(cfg.arm, runs);
    if (!dump_path.empty()) write_text(dump_path, pnndt::runs_to_json(cfg.arm, cfg.base_seed, runs).dump(2) + "\n");
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path, const std::string& out_path) {
    const auto model = pnndt::load_model(model_path);
    const auto table = pnndt::load_features_csv(data_path);
    pnndt::require_same_features(model, table.names);
    std::string text = "row,label,score\n";
    for (std::size_t i = 0; i < table.rows(); ++i)
        text += std::to_string(i + 1) + "," + std::to_string(model.classify(table.row(i))) + "," +
                pnndt::format_fixed(model.score(table.row(i)), 6) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
    return 0;
}

int cmd_export(const std::string& model_path, const std::string& out_path) {
    const auto rules = pnndt::load_model(model_path).render_rules();
    if (out_path.empty()) std::cout << rules;
    else write_text(out_path, rules);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial network and decision tree induction for artifact classification"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Write a synthetic 36-feature labeled dataset");
    std::size_t n = 0;
    int relevant = 8;
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::string synth_out;
    synth->add_option("--n", n, "Examples per class")->required()->check(CLI::PositiveNumber);
    synth->add_option("--relevant", relevant, "Features whose mean differs between classes")
        ->capture_default_str()
        ->check(CLI::Range(1, 36));
    synth->add_option("--noise", noise, "Fraction of labels flipped")->capture_default_str()->check(CLI::Range(0.0, 0.999999));
    synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output CSV")->required();

    auto* train = app.add_subcommand("train", "Train one classifier arm and save the model");
    ConfigFlags train_flags;
    train_flags.add_to(*train);

    auto* evaluate = app.add_subcommand("evaluate", "Report sensitivity, specificity and performance");
    ConfigFlags eval_flags;
    eval_flags.add_to(*evaluate);
    std::string dump_path;
    evaluate->add_option("--dump", dump_path, "Write per-run values as JSON");

    auto* predict = app.add_subcommand("predict", "Classify the rows of a CSV file");
    std::string predict_model, predict_data, predict_out;
    predict->add_option("--model", predict_model, "Model file")->required();
    predict->add_option("--data", predict_data, "CSV with the model's feature columns")->required();
    predict->add_option("--out", predict_out, "Output CSV (default: stdout)");

    auto* exporter = app.add_subcommand("export-rules", "Write the polynomial listing and/or tree diagram");
    std::string export_model, export_out;
    exporter->add_option("--model", export_model, "Model file")->required();
    exporter->add_option("--out", export_out, "Output text file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*synth) return cmd_synth(n, relevant, noise, seed, synth_out);
        if (*train) return cmd_train(train_flags);
        if (*evaluate) return cmd_evaluate(eval_flags, dump_path);
        if (*predict) return cmd_predict(predict_model, predict_data, predict_out);
        if (*exporter) return cmd_export(export_model, export_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsageError;
}
