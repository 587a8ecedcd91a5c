#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string kCli = CROPSENSE_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;
    void SetUp() override {
        if (kCli.empty()) GTEST_SKIP() << "command-line tool not built";
        dir = fs::temp_directory_path() /
              ("cropsense_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
               std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string p(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run("roster verify"), 2);  // missing required flags
}

TEST_F(Cli, RosterVerifyFixture) {
    const std::string fixtures = CROPSENSE_FIXTURE_DIR;
    ASSERT_EQ(run("roster verify --in " + fixtures + "/table1_candidates.csv --quotas " + fixtures +
                  "/table1_quotas.json --out " + p("v")),
              0);
    EXPECT_EQ(count(slurp(dir / "v" / "roster.jsonl"), "\"status\":\"Selected\""), 175u);
    EXPECT_TRUE(fs::exists(dir / "v" / "roster_summary.csv"));
    EXPECT_TRUE(fs::exists(dir / "v" / "quota_transfers.csv"));
}

TEST_F(Cli, FixtureCommandMatchesCheckedInFixture) {
    ASSERT_EQ(run("roster fixture --out " + p("f")), 0);
    const std::string fixtures = CROPSENSE_FIXTURE_DIR;
    EXPECT_EQ(slurp(dir / "f" / "candidates.csv"), slurp(fs::path(fixtures) / "table1_candidates.csv"));
}

TEST_F(Cli, ValidationErrorsExitTwo) {
    {
        std::ofstream bad(p("bad.csv"));
        bad << "candidate_id,name\n\"unterminated,x\n";
    }
    const std::string fixtures = CROPSENSE_FIXTURE_DIR;
    EXPECT_EQ(run("roster verify --in " + p("bad.csv") + " --quotas " + fixtures + "/table1_quotas.json --out " +
                  p("o")),
              2);
    EXPECT_EQ(run("roster verify --in " + fixtures + "/table1_candidates.csv --quotas " + p("missing.json") +
                  " --out " + p("o")),
              2);
    {
        std::ofstream cfg(p("bad.json"));
        cfg << R"({"duration_days": -3})";
    }
    EXPECT_EQ(run("simulate --config " + p("bad.json") + " --out " + p("s")), 2);
    EXPECT_EQ(run("density --store " + p("nostore") + " --cell 0"), 2);
}

TEST_F(Cli, EvalFromMatrixFixture) {
    const std::string fixtures = CROPSENSE_FIXTURE_DIR;
    ASSERT_EQ(run("eval matrix --matrix " + fixtures + "/table2_matrix.csv --out " + p("e")), 0);
    const auto metrics = slurp(dir / "e" / "class_metrics.csv");
    EXPECT_NE(metrics.find("CBB,0.616181,0.431489,1518"), std::string::npos) << metrics;
    EXPECT_TRUE(fs::exists(dir / "e" / "confusion_matrix.csv"));
}

TEST_F(Cli, SimulatedCampaignPipeline) {
    {
        std::ofstream cfg(p("campaign.json"));
        cfg << R"({"preset":"none","seed":4,"duration_days":21,"budget":3000000,"base_rate":6})";
    }
    const std::string store = p("sim");
    ASSERT_EQ(run("simulate --config " + p("campaign.json") + " --out " + store), 0);
    for (const char* f : {"reports.jsonl", "registry.jsonl", "ledger.csv", "weekly_spend.csv", "weekly_series.csv"}) {
        EXPECT_TRUE(fs::exists(fs::path(store) / f)) << f;
    }
    EXPECT_EQ(run("analyze --store " + store + " --dimension gender --out " + p("a")), 0);
    EXPECT_EQ(slurp(dir / "a" / "aggregate_gender.csv").rfind("key,count,share\nMale,", 0), 0u);
    EXPECT_EQ(run("analyze --store " + store + " --dimension shoe-size --out " + p("a")), 2);
    EXPECT_EQ(run("density --store " + store + " --out " + p("d")), 0);
    const auto geo = nlohmann::json::parse(slurp(dir / "d" / "density.geojson"));
    EXPECT_FALSE(geo["features"].empty());
    EXPECT_EQ(run("calls assign --store " + store + " --operators 6 --out " + p("c")), 0);
    EXPECT_EQ(count(slurp(dir / "c" / "call_assignments.csv"), "\n"), 176u);
    EXPECT_EQ(run("pay compute --store " + store + " --period 2018-W17 --out " + p("pay")), 0);
    EXPECT_TRUE(fs::exists(dir / "pay" / "statements.csv"));
    EXPECT_EQ(run("pay compute --store " + store + " --period 2018-17 --out " + p("pay")), 2);
    EXPECT_EQ(run("eval matrix --store " + store + " --out " + p("e")), 0);
    EXPECT_TRUE(fs::exists(dir / "e" / "coverage.csv"));
}

TEST_F(Cli, IssuesLogAndReport) {
    const std::string log = p("issues.jsonl");
    ASSERT_EQ(run("issues log --log " + log + " --agent A1 --week 2018-W20 --category Network --note 'no bars'"), 0);
    ASSERT_EQ(run("issues log --log " + log + " --agent A2 --week 2018-W20 --category Technical --escalate"), 0);
    EXPECT_EQ(run("issues log --log " + log + " --agent A2 --week 2018-W20 --category Weather"), 2);
    ASSERT_EQ(run("issues report --log " + log + " --week 2018-W20 --out " + p("r")), 0);
    const auto report = slurp(dir / "r" / "issues_2018-W20.csv");
    EXPECT_NE(report.find("count,Network,1,,"), std::string::npos) << report;
    EXPECT_NE(report.find("open,Technical,1,A2"), std::string::npos) << report;
}
