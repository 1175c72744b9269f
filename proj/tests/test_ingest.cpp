#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "support.hpp"

using namespace esgbench;
using namespace esgbench::ingest;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& body)
{
    std::ofstream out(p, std::ios::binary);
    out << body;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::vector<Stock> kStocks = {{Symbol("TATASTEEL"), "Tata Steel", SectorId{0}},
                                    {Symbol("TATAMOTORS"), "Tata Motors", SectorId{1}},
                                    {Symbol("SBIN"), "State Bank of India", SectorId{2}},
                                    {Symbol("INFY"), "Infosys", SectorId{3}}};

}  // namespace

TEST(Csv, SplitsQuotedFields)
{
    EXPECT_EQ(split_csv_line("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
    EXPECT_EQ(split_csv_line("\"x, y\",\"he said \"\"hi\"\"\",z\r"), (std::vector<std::string>{"x, y", "he said \"hi\"", "z"}));
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(split_csv_line(csv_field("q\"uote,d")), (std::vector<std::string>{"q\"uote,d"}));
}

TEST(OhlcLoader, DuplicateAcrossFilesIsDroppedOnce)
{
    const auto dir = fixture::temp_dir("ohlc");
    std::string a = std::string(kOhlcHeader) + "\n", b = a;
    for (int i = 0; i < 5; ++i) {
        a += "SBIN,2023-07-03 10:0" + std::to_string(i) + ":00,100,101,99,100.5,10\n";
        b += "INFY,2023-07-03 10:0" + std::to_string(i) + ":00,100,101,99,100.5,10\n";
    }
    b += "SBIN,2023-07-03 10:02:00,1,1,1,1,1\n";
    write_file(dir / "a.csv", a);
    write_file(dir / "b.csv", b);
    const auto load = load_ohlc_csvs({dir / "a.csv", dir / "b.csv"});
    EXPECT_EQ(load.bars.size(), 10u);
    ASSERT_EQ(load.issues.size(), 1u);
    EXPECT_EQ(load.issues[0].reason, "duplicate (symbol,timestamp)");
    EXPECT_EQ(load.issues[0].line, 7u);
    EXPECT_EQ(load.bars[2].close, Price::parse("100.5"));
    fs::remove_all(dir);
}

TEST(OhlcLoader, TwoFilesFiveRowsOneDuplicate)
{
    const auto dir = fixture::temp_dir("ohlc5");
    const std::string h = std::string(kOhlcHeader) + "\n";
    write_file(dir / "x.csv", h + "A,2023-07-03 10:00:00,1,1,1,1,1\nA,2023-07-03 11:00:00,1,1,1,1,1\nA,2023-07-03 12:00:00,1,1,1,1,1\n"
                                  "A,2023-07-03 13:00:00,1,1,1,1,1\nA,2023-07-03 14:00:00,1,1,1,1,1\n");
    write_file(dir / "y.csv", h + "B,2023-07-03 10:00:00,1,1,1,1,1\nB,2023-07-03 11:00:00,1,1,1,1,1\nB,2023-07-03 12:00:00,1,1,1,1,1\n"
                                  "A,2023-07-03 14:00:00,2,2,2,2,2\nB,2023-07-03 14:00:00,1,1,1,1,1\n");
    const auto load = load_ohlc_csvs({dir / "x.csv", dir / "y.csv"});
    EXPECT_EQ(load.bars.size(), 9u);
    // First occurrence wins.
    EXPECT_EQ(load.bars[4].open, Price::parse("1"));
    fs::remove_all(dir);
}

TEST(OhlcLoader, BadRowsAreReportedWithLineNumbers)
{
    const auto dir = fixture::temp_dir("ohlcbad");
    write_file(dir / "bad.csv", std::string(kOhlcHeader) +
                                    "\nSBIN,2023-07-03 10:00:00,100,101,99,abc,10\n"
                                    "SBIN,2023-07-03 11:00:00,100,101,99\n"
                                    "SBIN,03/07/2023 12:00,100,101,99,100,10\n"
                                    "SBIN,2023-07-03 13:00:00,100,101,99,100,lots\n"
                                    "SBIN,2023-07-03 14:00:00,100,101,99,100,10\n");
    const auto load = load_ohlc_csvs({dir / "bad.csv"});
    ASSERT_EQ(load.bars.size(), 1u);
    const std::vector<IngestIssue> want = {{(dir / "bad.csv").string(), 2, "non-numeric close"},
                                           {(dir / "bad.csv").string(), 3, "expected 7 fields, got 5"},
                                           {(dir / "bad.csv").string(), 4, "malformed timestamp"},
                                           {(dir / "bad.csv").string(), 5, "non-numeric volume"}};
    EXPECT_EQ(load.issues, want);
    write_file(dir / "hdr.csv", "sym,ts\n");
    EXPECT_THROW(load_ohlc_csvs({dir / "hdr.csv"}), ParseError);
    fs::remove_all(dir);
}

TEST(OhlcLoader, UnreadablePathIsNamed)
{
    try {
        load_ohlc_csvs({"/nonexistent/esgbench/TATASTEEL.csv"});
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/esgbench/TATASTEEL.csv"), std::string::npos);
    }
}

TEST(OhlcLoader, MicrosecondTimestampsSurvive)
{
    const auto dir = fixture::temp_dir("ohlcts");
    write_file(dir / "t.csv", std::string(kOhlcHeader) + "\nTATASTEEL,2023-07-28 21:17:13.284140,1,1,1,1,1\n");
    const auto load = load_ohlc_csvs({dir / "t.csv"});
    ASSERT_EQ(load.bars.size(), 1u);
    EXPECT_EQ(load.bars[0].timestamp.to_string(), "2023-07-28 21:17:13.284140");
    fs::remove_all(dir);
}

TEST(Mentions, NamesAndTickersAreMatched)
{
    const MentionMatcher m(kStocks);
    EXPECT_EQ(m.extract("Tata Steel cuts emissions"), (std::vector<Symbol>{Symbol("TATASTEEL")}));
    EXPECT_TRUE(m.extract("Monsoon arrives early").empty());
    EXPECT_TRUE(m.extract("Tata group news").empty());
    EXPECT_EQ(m.extract("SBIN and state bank of india, plus INFY; infosys."), (std::vector<Symbol>{Symbol("INFY"), Symbol("SBIN")}));
    EXPECT_EQ(m.extract("TATA MOTORS outpaces Tata Steel"), (std::vector<Symbol>{Symbol("TATAMOTORS"), Symbol("TATASTEEL")}));
    EXPECT_TRUE(m.extract("").empty());
}

TEST(SectorMap, LoadsStocksAndSectors)
{
    const auto dir = fixture::temp_dir("sectors");
    write_file(dir / "s.csv", "symbol,name,sector\nTATASTEEL,Tata Steel,Metals\nSBIN,\"State Bank of India\",Banks\nJSWSTEEL,JSW Steel,Metals\nBROKEN,row\n");
    const auto load = load_sector_map(dir / "s.csv");
    ASSERT_EQ(load.sectors.size(), 2u);
    EXPECT_EQ(load.sectors[0].name, "Metals");
    EXPECT_EQ(load.sectors[1].name, "Banks");
    ASSERT_EQ(load.stocks.size(), 3u);
    EXPECT_EQ(load.stocks[2].sector, SectorId{0});
    ASSERT_EQ(load.issues.size(), 1u);
    EXPECT_EQ(load.issues[0].line, 5u);
    EXPECT_EQ(load.issues[0].reason, "expected 3 fields, got 2");
    fs::remove_all(dir);
}

TEST(NewsLoader, ValidRecordsKeepMediaVerbatim)
{
    const auto dir = fixture::temp_dir("news");
    write_file(dir / "n.jsonl",
               R"({"media":"Biodiesel Magazine","date":"2023-07-02 21:27:20.801828","content":"SBIN funds biodiesel"})"
               "\n"
               R"({"media":"  Mint ","date":"2023-07-03","content":"Tata Steel cuts emissions"})"
               "\n\n"
               R"({"media":"x","content":"no date"})"
               "\n"
               R"({"media":1,"date":"2023-07-03","content":"numeric media"})"
               "\n"
               R"({"media":"x","date":"July 3rd","content":"bad date"})"
               "\n"
               "not json at all\n");
    const auto load = load_news(dir / "n.jsonl", MentionMatcher(kStocks));
    ASSERT_EQ(load.docs.size(), 2u);
    EXPECT_EQ(load.docs[0].id, DocId{0});
    EXPECT_EQ(load.docs[0].media, "Biodiesel Magazine");
    EXPECT_EQ(load.docs[0].timestamp.to_string(), "2023-07-02 21:27:20.801828");
    EXPECT_EQ(load.docs[0].mentions, (std::vector<Symbol>{Symbol("SBIN")}));
    EXPECT_EQ(load.docs[1].id, DocId{1});
    EXPECT_EQ(load.docs[1].media, "  Mint ");
    EXPECT_EQ(load.docs[1].timestamp.to_string(), "2023-07-03 00:00:00");
    std::vector<std::pair<std::size_t, std::string>> got;
    for (const auto& i : load.issues) {
        got.emplace_back(i.line, i.reason);
    }
    const std::vector<std::pair<std::size_t, std::string>> want = {
        {4, "missing field 'date'"}, {5, "field 'media' is not a string"}, {6, "malformed date"}, {7, "malformed record"}};
    EXPECT_EQ(got, want);
    fs::remove_all(dir);
}

TEST(Generator, SameSeedSameDataset)
{
    const auto cfg = fixture::small_config(7);
    EXPECT_EQ(generate(cfg), generate(cfg));
    EXPECT_NE(generate(cfg), generate(fixture::small_config(8)));
}

TEST(Generator, RejectsImpossibleConfigs)
{
    auto cfg = fixture::small_config(1);
    cfg.n_sectors = cfg.n_stocks + 1;
    try {
        generate(cfg);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("exceeds n_stocks"), std::string::npos);
    }
    for (auto mutate : std::vector<std::function<void(GeneratorConfig&)>>{
             [](GeneratorConfig& c) { c.n_stocks = 0; }, [](GeneratorConfig& c) { c.days = 0; },
             [](GeneratorConfig& c) { c.bars_per_day = 0; }, [](GeneratorConfig& c) { c.esg_fraction = 1.5; }}) {
        auto c = fixture::small_config(1);
        mutate(c);
        EXPECT_THROW(generate(c), Error);
    }
}

TEST(Generator, EsgFractionZeroGivesNoHits)
{
    auto cfg = fixture::small_config(3);
    cfg.esg_fraction = 0.0;
    const auto raw = generate(cfg);
    EXPECT_TRUE(oracle::q1_triples(raw, EsgLexicon::defaults()).empty());
    const auto g = graph::GraphEngine::load(fixture::validated(raw));
    EXPECT_TRUE(run_query(g, QueryId::Q1, QuerySpec{}, {}).hits.empty());
}

TEST(Generator, EsgFractionOneHitsEveryMention)
{
    auto cfg = fixture::small_config(4);
    cfg.esg_fraction = 1.0;
    cfg.n_news = 100;
    GenerationLog log;
    const auto raw = generate(cfg, EsgLexicon::defaults(), &log);
    EXPECT_EQ(log.esg_docs.size(), 100u);
    std::size_t mentions = 0;
    for (const auto& n : raw.news) {
        mentions += n.mentions.size();
    }
    EXPECT_EQ(log.esg_mentions, mentions);
    const auto rel = relational::RelationalEngine::load(fixture::validated(raw));
    EXPECT_EQ(run_query(rel, QueryId::Q1, QuerySpec{}, {}).hits.size(), mentions);
}

TEST(Generator, EsgCountIsExact)
{
    for (double f : {0.001, 0.01, 0.37}) {
        auto cfg = fixture::small_config(9);
        cfg.n_news = 1000;
        cfg.esg_fraction = f;
        GenerationLog log;
        const auto raw = generate(cfg, EsgLexicon::defaults(), &log);
        EXPECT_EQ(log.esg_docs.size(), static_cast<std::size_t>(std::llround(f * 1000)));
        std::size_t matching = 0;
        for (const auto& n : raw.news) {
            const auto t = oracle::tokens(n.content);
            bool any = false;
            for (const auto& term : EsgLexicon::defaults().terms()) {
                any = any || std::find(t.begin(), t.end(), term) != t.end();
            }
            matching += any;
        }
        EXPECT_EQ(matching, log.esg_docs.size());
    }
}

TEST(Generator, BarsAreValidWeekdaySessions)
{
    const auto raw = generate(fixture::small_config(10));
    const auto v = validate_dataset(raw);
    EXPECT_TRUE(v.report.clean());
    for (const auto& b : raw.bars) {
        EXPECT_LT(b.day().iso_weekday_index(), 5u);
    }
    EXPECT_TRUE(std::is_sorted(raw.bars.begin(), raw.bars.end(), [](const OhlcBar& a, const OhlcBar& b) {
        return std::tie(a.symbol, a.timestamp) < std::tie(b.symbol, b.timestamp);
    }));
    // 14 days from Saturday 2023-07-01 hold 10 weekdays.
    EXPECT_EQ(raw.bars.size(), 12u * 10u * 3u);
}

TEST(Generator, ExtractedMentionsEqualPlantedOnes)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto cfg = GeneratorConfig{};
        cfg.seed = seed;
        cfg.n_news = 2000;
        cfg.days = 5;
        const auto raw = generate(cfg);
        const MentionMatcher m(raw.stocks);
        for (const auto& n : raw.news) {
            ASSERT_EQ(m.extract(n.content), n.mentions) << n.content;
        }
    }
}

TEST(Generator, SentenceOrderDoesNotChangeMentions)
{
    const auto raw = generate(fixture::small_config(11));
    const MentionMatcher m(raw.stocks);
    std::mt19937_64 rng(2);
    for (const auto& n : raw.news) {
        std::vector<std::string> sentences;
        std::string cur;
        for (char c : n.content) {
            cur += c;
            if (c == '.') {
                sentences.push_back(cur);
                cur.clear();
            }
        }
        std::shuffle(sentences.begin(), sentences.end(), rng);
        std::string shuffled;
        for (const auto& s : sentences) {
            shuffled += s;
        }
        EXPECT_EQ(m.extract(shuffled), n.mentions);
    }
}

TEST(DatasetIo, WriteThenLoadRoundTrips)
{
    const auto dir = fixture::temp_dir("roundtrip");
    const auto raw = generate(fixture::small_config(14));
    write_dataset(dir, raw);
    EXPECT_TRUE(fs::exists(dir / "stocks.csv"));
    EXPECT_TRUE(fs::exists(dir / "news.jsonl"));
    EXPECT_TRUE(fs::exists(dir / "ohlc" / "TATASTEEL.csv"));
    const auto back = load_dataset(dir);
    EXPECT_TRUE(back.issues.empty());
    EXPECT_EQ(back.data, raw);
    EXPECT_TRUE(validate_dataset(back.data).report.clean());
    // Writing the reloaded dataset gives the same bytes.
    const auto again = fixture::temp_dir("roundtrip2");
    write_dataset(again, back.data);
    EXPECT_EQ(read_file(again / "news.jsonl"), read_file(dir / "news.jsonl"));
    EXPECT_EQ(read_file(again / "stocks.csv"), read_file(dir / "stocks.csv"));
    fs::remove_all(dir);
    fs::remove_all(again);
    EXPECT_THROW(load_dataset(dir), IoError);
}
