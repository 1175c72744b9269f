#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <thread>

#include "support.hpp"

using namespace esgbench;
using namespace esgbench::bench;
namespace fs = std::filesystem;

namespace {

BenchReport sample_report()
{
    BenchReport r;
    r.host = {{"hostname", "box"}, {"cpu", "Some CPU, 8 cores"}};
    r.load_ms = {{EngineKind::Relational, 12.5}, {EngineKind::Graph, 40.25}};
    double v = 0.1;
    for (auto e : kAllEngines) {
        for (auto q : kAllQueries) {
            v *= 1.37;
            r.cells[{e, q}] = CellStats{v, v * 1.5, 99.5, 12.0 + v, 123.456789, 30};
        }
    }
    return r;
}

}  // namespace

TEST(Harness, OneRepetitionOneSample)
{
    BenchConfig cfg;
    cfg.warmups = 0;
    cfg.repetitions = 1;
    int calls = 0;
    const auto s = time_callable(EngineKind::Graph, QueryId::Q3, cfg, [&] { ++calls; });
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(s[0].engine, EngineKind::Graph);
    EXPECT_EQ(s[0].query, QueryId::Q3);
    cfg.warmups = 2;
    cfg.repetitions = 4;
    calls = 0;
    EXPECT_EQ(time_callable(EngineKind::Graph, QueryId::Q1, cfg, [&] { ++calls; }).size(), 4u);
    EXPECT_EQ(calls, 6);
    cfg.repetitions = 0;
    EXPECT_THROW(time_callable(EngineKind::Graph, QueryId::Q1, cfg, [] {}), Error);
}

TEST(Harness, CpuAverageNeverExceedsMax)
{
    BenchConfig cfg;
    cfg.warmups = 0;
    cfg.repetitions = 5;
    cfg.sample_interval_ms = 2;
    const auto samples = time_callable(EngineKind::Relational, QueryId::Q1, cfg, [] {
        volatile double x = 0;
        const auto until = std::chrono::steady_clock::now() + std::chrono::milliseconds(20);
        while (std::chrono::steady_clock::now() < until) {
            x = x + 1.0;
        }
    });
    for (const auto& s : samples) {
        EXPECT_LE(s.cpu_avg_pct, s.cpu_max_pct + 1e-9);
        EXPECT_GE(s.cpu_avg_pct, 0.0);
        EXPECT_GT(s.peak_mem_mb, 0.0);
        EXPECT_GE(s.wall_ms, 20.0);
    }
    const auto c = summarize(samples);
    EXPECT_LE(c.cpu_avg_pct, c.cpu_max_pct);
    EXPECT_LE(c.median_ms, c.p95_ms);
}

TEST(Harness, SleepingCallIsTimedAccurately)
{
    BenchConfig cfg;
    cfg.warmups = 1;
    cfg.repetitions = 5;
    const auto c = summarize(time_callable(EngineKind::Document, QueryId::Q2, cfg, [] {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }));
    EXPECT_NEAR(c.median_ms, 50.0, 10.0);
    EXPECT_LT(c.cpu_avg_pct, 50.0);
}

TEST(Stats, QuantilesInterpolate)
{
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
    EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.95), 4.8);
    EXPECT_DOUBLE_EQ(quantile({7.0}, 0.95), 7.0);
    EXPECT_DOUBLE_EQ(quantile({1.0, 9.0}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile({1.0, 9.0}, 1.0), 9.0);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> v(1 + rng() % 40);
        for (auto& x : v) {
            x = static_cast<double>(rng() % 1000) / 7.0;
        }
        EXPECT_LE(median(v), quantile(v, 0.95));
        EXPECT_LE(quantile(v, 0.95), *std::max_element(v.begin(), v.end()));
    }
    EXPECT_THROW(summarize(std::vector<BenchSample>{}), Error);
}

TEST(Matrix, EveryCellGetsItsRepetitions)
{
    const auto data = fixture::validated(fixture::small_market());
    std::map<EngineKind, AnyEngine> engines;
    for (auto k : kAllEngines) {
        engines.emplace(k, load_engine(k, data));
    }
    BenchConfig cfg;
    cfg.warmups = 0;
    cfg.repetitions = 3;
    const auto run = run_matrix(engines, QuerySpec{}, cfg);
    EXPECT_EQ(run.samples.size(), 15u);
    for (const auto& [key, s] : run.samples) {
        EXPECT_EQ(s.size(), 3u);
    }
    EXPECT_EQ(run.q1_hits.at(EngineKind::Graph).size(), 5u);
    const auto report = make_report(run, {}, {});
    EXPECT_NO_THROW(check_complete(report, kAllEngines, kAllQueries));
    auto partial = report;
    partial.cells.erase({EngineKind::Document, QueryId::Q4});
    try {
        check_complete(partial, kAllEngines, kAllQueries);
        FAIL() << "expected missing cell";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("document/Q4"), std::string::npos);
    }
}

TEST(Report, CsvRoundTripsExactly)
{
    const auto r = sample_report();
    const auto csv = to_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kReportCsvHeader);
    EXPECT_EQ(parse_report_csv(csv), r);
    EXPECT_THROW(parse_report_csv("wrong,header\n"), ParseError);
    EXPECT_THROW(parse_report_csv(std::string(kReportCsvHeader) + "\nsqlite,Q1,median_ms,1\n"), ParseError);
    EXPECT_THROW(parse_report_csv(std::string(kReportCsvHeader) + "\ngraph,Q9,median_ms,1\n"), ParseError);
    EXPECT_THROW(parse_report_csv(std::string(kReportCsvHeader) + "\ngraph,Q1,speed,1\n"), ParseError);
}

TEST(Report, MarkdownHasOneRowPerCellAndEchoTables)
{
    const auto r = sample_report();
    std::map<EngineKind, std::vector<SearchHit>> echo;
    echo[EngineKind::Document] = {SearchHit{DocId{1}, Symbol("TATASTEEL"), fixture::ts("2023-07-28 21:17:13.284140"), "Tata Steel", 16.650661}};
    const auto md = to_markdown(r, echo);
    std::size_t rows = 0;
    std::istringstream in(md);
    std::string line;
    bool in_table = false;
    while (std::getline(in, line)) {
        if (line.rfind("| Engine | Query |", 0) == 0) {
            in_table = true;
            std::getline(in, line);
            continue;
        }
        if (in_table && line.rfind("| ", 0) == 0) {
            ++rows;
        } else if (in_table) {
            break;
        }
    }
    EXPECT_EQ(rows, 15u);
    EXPECT_NE(md.find("| Stock | Date | Media | Score |"), std::string::npos);
    EXPECT_NE(md.find("| TATASTEEL | 2023-07-28 21:17:13.284140 | Tata Steel | 16.650661 |"), std::string::npos);
}

TEST(Report, TsvSeries)
{
    const auto r = sample_report();
    const auto tsv = to_tsv(r, "median_ms");
    std::istringstream in(tsv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "query\trelational\tdocument\tgraph");
    int lines = 0;
    for (std::string l; std::getline(in, l);) {
        ++lines;
        EXPECT_EQ(std::count(l.begin(), l.end(), '\t'), 3);
    }
    EXPECT_EQ(lines, 5);
}

TEST(Report, EmitWritesAllFiles)
{
    const auto dir = fixture::temp_dir("report");
    const auto files = emit_report(sample_report(), dir / "out");
    EXPECT_TRUE(fs::exists(files.csv));
    EXPECT_TRUE(fs::exists(files.markdown));
    EXPECT_EQ(files.series.size(), 5u);
    std::ifstream in(files.csv);
    std::string body{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    EXPECT_EQ(parse_report_csv(body), sample_report());
    EXPECT_THROW(emit_report(BenchReport{}, dir / "empty"), Error);
    fs::remove_all(dir);
}

TEST(Report, UnwritableDirectoryIsAnIoError)
{
    const auto dir = fixture::temp_dir("blocked");
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(emit_report(sample_report(), dir / "file" / "sub"), IoError);
    fs::remove_all(dir);
}

TEST(Report, HostMetadataIsPopulated)
{
    const auto host = host_metadata();
    std::set<std::string> keys;
    for (const auto& [k, v] : host) {
        keys.insert(k);
        EXPECT_FALSE(v.empty()) << k;
    }
    for (const char* k : {"hostname", "os", "cpu", "cores", "memory_mb", "compiler"}) {
        EXPECT_TRUE(keys.contains(k)) << k;
    }
}
