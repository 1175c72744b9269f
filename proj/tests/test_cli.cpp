#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args)
{
    const std::string cmd = std::string(ESGBENCH_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        return r;
    }
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) {
        r.out.append(buf, n);
    }
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const std::string kSmall = "--news 300 --stocks 12 --sectors 4 --days 14 --bars-per-day 3 --esg-fraction 0.1";

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("gen").code, 2);
    EXPECT_EQ(cli("bench --reps 0").code, 2);
}

TEST(Cli, RuntimeFailuresExitThree)
{
    EXPECT_EQ(cli("ingest --data /nonexistent/dataset").code, 3);
    EXPECT_EQ(cli("verify --engines sqlite " + kSmall).code, 3);
    EXPECT_EQ(cli("report --in /nonexistent/report.csv --out /tmp/x").code, 3);
}

TEST(Cli, VerifyAgreesOnGeneratedData)
{
    const auto r = cli("verify --shards 3 " + kSmall);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("document vs graph (Q1 ordered): equivalent"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("relational vs graph (Q1 as set): equivalent"), std::string::npos) << r.out;
}

TEST(Cli, GenIsDeterministicAndIngestsCleanly)
{
    const auto dir = fixture::temp_dir("cli_gen");
    ASSERT_EQ(cli("gen --seed 7 " + kSmall + " --out " + (dir / "a").string()).code, 0);
    ASSERT_EQ(cli("gen --seed 7 " + kSmall + " --out " + (dir / "b").string()).code, 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
        if (!e.is_regular_file()) {
            continue;
        }
        ++files;
        const auto twin = dir / "b" / fs::relative(e.path(), dir / "a");
        EXPECT_EQ(slurp(e.path()), slurp(twin)) << e.path();
    }
    EXPECT_GT(files, 0u);

    const auto idx = dir / "news.idx";
    const auto ing = cli("ingest --data " + (dir / "a").string() + " --index-out " + idx.string());
    EXPECT_EQ(ing.code, 0) << ing.out;
    EXPECT_NE(ing.out.find("0 ingest issues, 0 rejections"), std::string::npos) << ing.out;
    EXPECT_NO_THROW(esgbench::text::load_index(idx));

    const auto v = cli("verify --data " + (dir / "a").string());
    EXPECT_EQ(v.code, 0) << v.out;
    fs::remove_all(dir);
}

TEST(Cli, BenchWritesReportAndReportReRenders)
{
    const auto dir = fixture::temp_dir("cli_bench");
    const auto r = cli("bench --engines graph --reps 5 --warmups 0 --interval 5 " + kSmall + " --out " + (dir / "run").string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("25 samples"), std::string::npos) << r.out;
    ASSERT_TRUE(fs::exists(dir / "run" / "report.csv"));
    EXPECT_TRUE(fs::exists(dir / "run" / "series" / "median_ms.tsv"));

    const auto again = cli("report --in " + (dir / "run" / "report.csv").string() + " --out " + (dir / "copy").string());
    EXPECT_EQ(again.code, 0) << again.out;
    EXPECT_EQ(slurp(dir / "run" / "report.csv"), slurp(dir / "copy" / "report.csv"));
    fs::remove_all(dir);
}

TEST(Cli, QueryPrintsRows)
{
    const auto r = cli("query --engine document --query Q1 --limit 3 " + kSmall);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("document Q1:"), std::string::npos);
    EXPECT_NE(r.out.find("Stock"), std::string::npos);
    EXPECT_EQ(cli("query --engine graph --query Q7 " + kSmall).code, 3);
}
