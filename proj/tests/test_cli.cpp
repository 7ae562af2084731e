#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "chaoslyap/app.hpp"
#include "table_fixtures.hpp"

using namespace chaoslyap;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("chaoslyap_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

json read_json(const std::string &path) {
    std::ifstream in(path);
    return json::parse(in);
}

RunConfig small_config() {
    RunConfig c;
    c.bounds = {1, 2, 2};
    c.n_starts = 2;
    return c;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path);
    f << text;
}

} // namespace

TEST(CmdRank, SelectionFileTopThree) {
    TempDir dir;
    json results = json::array();
    for (const auto &r : fixtures::selection_results()) results.push_back(to_json(r, false));
    write_text(dir.file("results.json"), json{{"results", results}}.dump());

    std::ostringstream out, err;
    ASSERT_EQ(cmd_rank(dir.file("results.json"), "product", 3, dir.file("sel.json"), out, err), exit_ok) << err.str();
    const auto sel = read_json(dir.file("sel.json"));
    ASSERT_EQ(sel["entries"].size(), 3u);
    EXPECT_EQ(sel["entries"][0]["label"], "CFFLD");
    EXPECT_EQ(sel["entries"][1]["label"], "CDP");
    EXPECT_EQ(sel["entries"][2]["label"], "FP");
    EXPECT_NE(out.str().find("CFFLD"), std::string::npos);
}

TEST(CmdRank, EmptyListWarns) {
    TempDir dir;
    write_text(dir.file("r.json"), "[]");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_rank(dir.file("r.json"), "product", std::nullopt, "", out, err), exit_ok);
    EXPECT_NE(err.str().find("warning"), std::string::npos);
}

TEST(CmdRank, BadInputs) {
    TempDir dir;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_rank(dir.file("missing.json"), "product", std::nullopt, "", out, err), exit_usage);
    write_text(dir.file("bad.json"), "{not json");
    EXPECT_EQ(cmd_rank(dir.file("bad.json"), "product", std::nullopt, "", out, err), exit_usage);
    write_text(dir.file("ok.json"), "[]");
    EXPECT_EQ(cmd_rank(dir.file("ok.json"), "alphabetical", std::nullopt, "", out, err), exit_usage);
    write_text(dir.file("p.json"), R"([{"signal_id":"a","lambda_hat":0.1,"p_value":2.0}])");
    EXPECT_EQ(cmd_rank(dir.file("p.json"), "product", std::nullopt, "", out, err), exit_usage);
}

TEST(CmdRank, SkipsFailedEntries) {
    TempDir dir;
    write_text(dir.file("r.json"),
               R"({"results":[{"signal_id":"c","status":"failed","reason":"degenerate signal"},)"
               R"({"signal_id":"a","status":"ok","lambda_hat":0.1,"p_value":0.9}]})");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_rank(dir.file("r.json"), "combined", std::nullopt, dir.file("s.json"), out, err), exit_ok);
    EXPECT_EQ(read_json(dir.file("s.json"))["entries"].size(), 1u);
}

TEST(CmdAnalyze, ConstantColumnFailsOthersSucceed) {
    TempDir dir;
    std::ostringstream csv;
    csv << "wave,flat\n";
    double x = 0.3;
    for (int i = 0; i < 150; ++i) {
        csv << x << ",2.5\n";
        x = 4 * x * (1 - x);
    }
    write_text(dir.file("in.csv"), csv.str());
    auto config = small_config();
    config.labels["wave"] = "LOG";
    std::ostringstream out, err;
    ASSERT_EQ(cmd_analyze(dir.file("in.csv"), dir.file("out.json"), config, out, err), exit_ok) << err.str();
    const auto doc = read_json(dir.file("out.json"));
    ASSERT_EQ(doc["results"].size(), 2u);
    EXPECT_EQ(doc["results"][0]["status"], "ok");
    EXPECT_EQ(doc["results"][0]["label"], "LOG");
    EXPECT_EQ(doc["results"][1]["status"], "failed");
    EXPECT_NE(doc["results"][1]["reason"].get<std::string>().find("degenerate signal"), std::string::npos);
    EXPECT_TRUE(doc.contains("created"));
    EXPECT_EQ(doc["config"]["m_max"], 2);
    EXPECT_FALSE(doc["results"][0].contains("local_rates"));
}

TEST(CmdAnalyze, AllFailedExitCode) {
    TempDir dir;
    write_text(dir.file("in.csv"), "a\n1\n1\n1\n1\n");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_analyze(dir.file("in.csv"), dir.file("o.json"), small_config(), out, err), exit_all_failed);
}

TEST(CmdAnalyze, UsageErrors) {
    TempDir dir;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_analyze(dir.file("missing.csv"), "", small_config(), out, err), exit_usage);
    write_text(dir.file("bad.csv"), "a\n1\nx\n");
    EXPECT_EQ(cmd_analyze(dir.file("bad.csv"), "", small_config(), out, err), exit_usage);
    auto config = small_config();
    config.alpha = 1.5;
    write_text(dir.file("ok.csv"), "a\n1\n2\n");
    EXPECT_EQ(cmd_analyze(dir.file("ok.csv"), "", config, out, err), exit_usage);
}

TEST(CmdAnalyze, VerboseIncludesRates) {
    TempDir dir;
    GeneratorSpec spec;
    spec.n = 120;
    std::ostringstream err;
    ASSERT_EQ(cmd_generate(spec, dir.file("g.csv"), err), exit_ok);
    auto config = small_config();
    config.verbose = true;
    std::ostringstream out;
    ASSERT_EQ(cmd_analyze(dir.file("g.csv"), dir.file("o.json"), config, out, err), exit_ok);
    const auto r = read_json(dir.file("o.json"))["results"][0];
    EXPECT_EQ(r["local_rates"].size(), static_cast<std::size_t>(r["M"].get<int>() - 1));
}

TEST(CmdGenerate, WritesCsvAndSidecar) {
    TempDir dir;
    GeneratorSpec spec;
    spec.kind = GeneratorKind::ar1;
    spec.n = 50;
    spec.seed = 7;
    std::ostringstream err;
    ASSERT_EQ(cmd_generate(spec, dir.file("a.csv"), err), exit_ok);
    ASSERT_EQ(cmd_generate(spec, dir.file("b.csv"), err), exit_ok);
    const auto a = load_csv(dir.file("a.csv")), b = load_csv(dir.file("b.csv"));
    EXPECT_EQ(a[0].samples(), b[0].samples());
    EXPECT_EQ(a[0].samples(), generate(spec).samples());
    EXPECT_EQ(read_json(dir.file("a.csv.json"))["seed"], 7);
}

TEST(CmdGenerate, InvalidParameter) {
    TempDir dir;
    GeneratorSpec spec;
    spec.parameters["x0"] = 1.5;
    std::ostringstream err;
    EXPECT_EQ(cmd_generate(spec, dir.file("x.csv"), err), exit_usage);
    EXPECT_NE(err.str().find("(0, 1)"), std::string::npos);
}

TEST(Config, JsonOverridesAndUnknownKeys) {
    RunConfig c;
    apply_config_json(c, json::parse(R"({"alpha":0.1,"n_starts":3,"L_max":2})"));
    EXPECT_EQ(c.alpha, 0.1);
    EXPECT_EQ(c.n_starts, 3);
    EXPECT_EQ(c.bounds.L_max, 2);
    EXPECT_EQ(c.bounds.m_max, 6);
    EXPECT_THROW(apply_config_json(c, json::parse(R"({"alpah":0.1})")), Error);
}
