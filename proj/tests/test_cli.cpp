#include <pnndt/experiment.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("pnndt_cli_" + std::string(
                   ::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    support::CommandResult cli(const std::string& args) const {
        return support::run_command(std::string(PNNDT_CLI) + " " + args);
    }

    std::string read(const std::string& name) const { return support::read_text_file(path(name)); }

    void make_data() const {
        ASSERT_EQ(cli("synth --n 80 --relevant 6 --noise 0.05 --seed 3 --out " + path("train.csv")).exit_code, 0);
        ASSERT_EQ(cli("synth --n 50 --relevant 6 --noise 0.05 --seed 4 --out " + path("test.csv")).exit_code, 0);
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, SynthIsDeterministic) {
    ASSERT_EQ(cli("synth --n 20 --relevant 4 --seed 9 --out " + path("a.csv")).exit_code, 0);
    ASSERT_EQ(cli("synth --n 20 --relevant 4 --seed 9 --out " + path("b.csv")).exit_code, 0);
    EXPECT_EQ(read("a.csv"), read("b.csv"));
    ASSERT_EQ(cli("synth --n 20 --relevant 4 --seed 10 --out " + path("c.csv")).exit_code, 0);
    EXPECT_NE(read("a.csv"), read("c.csv"));
    const auto text = read("a.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 41);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(cli("synth --n 20 --relevant 40 --out " + path("x.csv")).exit_code, 2);
    EXPECT_EQ(cli("synth --relevant 4 --out " + path("x.csv")).exit_code, 2);
    EXPECT_EQ(cli("no-such-command").exit_code, 2);
    EXPECT_EQ(cli("train --arm forest --train " + path("x.csv")).exit_code, 2);
    EXPECT_EQ(cli("train --chi 2.5 --train " + path("x.csv")).exit_code, 2);
    EXPECT_EQ(cli("train").exit_code, 2);
}

TEST_F(Cli, MissingInputIsARuntimeError) {
    const auto r = cli("train --train " + path("missing.csv"));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("missing.csv"), std::string::npos);
}

TEST_F(Cli, DtArmHasNoPolynomialSection) {
    make_data();
    ASSERT_EQ(cli("train --arm dt --train " + path("train.csv") + " --model " + path("dt.json")).exit_code, 0);
    const auto r = cli("export-rules --model " + path("dt.json"));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output.find(" = P("), std::string::npos);
    EXPECT_NE(r.output.find("artifact("), std::string::npos);
}

TEST_F(Cli, PnnDtExportHasBothSections) {
    make_data();
    ASSERT_EQ(cli("train --train " + path("train.csv") + " --model " + path("m.json")).exit_code, 0);
    ASSERT_EQ(cli("export-rules --model " + path("m.json") + " --out " + path("rules.txt")).exit_code, 0);
    const auto rules = read("rules.txt");
    const auto gap = rules.find("\n\n");
    ASSERT_NE(gap, std::string::npos);
    EXPECT_EQ(rules.rfind("y1 = P(", 0), 0u);
    EXPECT_NE(rules.find("artifact(", gap), std::string::npos);
    // Exporting again gives the same bytes.
    ASSERT_EQ(cli("export-rules --model " + path("m.json") + " --out " + path("rules2.txt")).exit_code, 0);
    EXPECT_EQ(read("rules2.txt"), rules);
}

TEST_F(Cli, MismatchedFeaturesFail) {
    make_data();
    ASSERT_EQ(cli("train --arm dt --train " + path("train.csv") + " --model " + path("dt.json")).exit_code, 0);
    std::ofstream(path("narrow.csv")) << "a,b,label\n1,2,0\n3,4,1\n";
    const auto r = cli("evaluate --model " + path("dt.json") + " --test " + path("narrow.csv"));
    EXPECT_NE(r.exit_code, 0);
    EXPECT_NE(r.output.find("features"), std::string::npos);
    EXPECT_NE(cli("predict --model " + path("dt.json") + " --data " + path("narrow.csv")).exit_code, 0);
}

TEST_F(Cli, DumpRecomputesReportedSummary) {
    make_data();
    const auto r = cli("evaluate --arm pnn --train " + path("train.csv") + " --test " + path("test.csv") +
                       " --runs 4 --base_seed 7 --dump " + path("runs.json"));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const auto j = pnndt::Json::parse(read("runs.json"));
    ASSERT_EQ(j.at("per_run").size(), 4u);
    EXPECT_EQ(j.at("per_run").at(0).at("seed"), 7);
    for (const char* metric : {"sensitivity", "specificity", "performance"}) {
        std::vector<double> v;
        for (const auto& run : j.at("per_run")) {
            const double tp = run.at("tp"), tn = run.at("tn"), fp = run.at("fp"), fn = run.at("fn");
            const double expect = std::string(metric) == "sensitivity"   ? tp / (tp + fn)
                                  : std::string(metric) == "specificity" ? tn / (tn + fp)
                                                                         : (tp + tn) / (tp + tn + fp + fn);
            EXPECT_NEAR(run.at(metric).get<double>(), expect, 1e-12);
            v.push_back(expect);
        }
        double mean = 0, ss = 0;
        for (double x : v) mean += x / v.size();
        for (double x : v) ss += (x - mean) * (x - mean);
        const double hw = 1.96 * std::sqrt(ss / (v.size() - 1));
        EXPECT_NEAR(j.at("summary").at(metric).at("mean").get<double>(), mean, 1e-12);
        EXPECT_NEAR(j.at("summary").at(metric).at("half_width").get<double>(), hw, 1e-12);
    }
    const double mean = j.at("summary").at("performance").at("mean");
    const double hw = j.at("summary").at("performance").at("half_width");
    EXPECT_NE(r.output.find(pnndt::format_percent(mean) + "\xC2\xB1" + pnndt::format_percent(hw)), std::string::npos);
}

TEST_F(Cli, PredictWritesOneLinePerRow) {
    make_data();
    ASSERT_EQ(cli("train --arm pnn --train " + path("train.csv") + " --model " + path("m.json")).exit_code, 0);
    ASSERT_EQ(cli("predict --model " + path("m.json") + " --data " + path("test.csv") + " --out " + path("p.csv"))
                  .exit_code,
              0);
    const auto text = read("p.csv");
    EXPECT_EQ(text.rfind("row,label,score\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
}

TEST_F(Cli, LeafOnlyTreeExports) {
    std::ofstream out(path("pure.csv"));
    out << "a,b,label\n";
    for (int i = 0; i < 10; ++i) out << i << "," << i * 2 << ",0\n";
    out.close();
    ASSERT_EQ(cli("train --arm dt --train " + path("pure.csv") + " --model " + path("leaf.json")).exit_code, 0);
    const auto r = cli("export-rules --model " + path("leaf.json"));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output, "artifact(0.0)\n");
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    make_data();
    std::ofstream(path("exp.cfg")) << "arm = knn\nk = 3\n";
    const auto base = "evaluate --train " + path("train.csv") + " --test " + path("test.csv") + " --config " +
                      path("exp.cfg");
    const auto from_file = cli(base);
    ASSERT_EQ(from_file.exit_code, 0) << from_file.output;
    EXPECT_NE(from_file.output.find("k-nn (raw features)"), std::string::npos);
    const auto overridden = cli(base + " --arm dt");
    ASSERT_EQ(overridden.exit_code, 0);
    EXPECT_NE(overridden.output.find("\nDT |"), std::string::npos);
    std::ofstream(path("bad.cfg")) << "colour = blue\n";
    EXPECT_EQ(cli("train --train " + path("train.csv") + " --config " + path("bad.cfg")).exit_code, 2);
}

TEST_F(Cli, HelpListsDefaults) {
    const auto r = cli("train --help");
    ASSERT_EQ(r.exit_code, 0);
    for (const char* expected : {"--chi TEXT [1.9]", "--delta TEXT [0.015]", "--fail_limit TEXT [7]",
                                 "--Delta TEXT [0.015]", "--lambda TEXT [300]", "--min_examples TEXT [5]",
                                 "--min_fraction TEXT [0.004]", "--max_steps TEXT [200]", "--k TEXT [5]"})
        EXPECT_NE(r.output.find(expected), std::string::npos) << expected;
    const auto s = cli("synth --help");
    EXPECT_NE(s.output.find("--noise"), std::string::npos);
    EXPECT_NE(cli("evaluate --help").output.find("--dump"), std::string::npos);
    EXPECT_NE(cli("predict --help").output.find("--data"), std::string::npos);
    EXPECT_NE(cli("export-rules --help").output.find("--out"), std::string::npos);
}

TEST_F(Cli, ReferenceNetworkExportsGolden) {
    const auto r = cli("export-rules --model " PNNDT_FIXTURE_DIR "/reference_network.json");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.output, support::read_text_file(PNNDT_FIXTURE_DIR "/reference_network.txt"));
}
