#pragma once

// Fixtures and brute-force oracles shared by the test binaries. Oracles are
// written from the definitions, without calling into the library code they
// check: plain loops, no indexes, exhaustive sorts.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "esgbench/esgbench.hpp"

namespace fixture {

using namespace esgbench;

inline Timestamp ts(const char* s) { return Timestamp::parse(s); }
inline Price px(const char* s) { return Price::parse(s); }

inline OhlcBar bar(const char* sym, const char* when, const char* o, const char* h, const char* l, const char* c, std::int64_t v = 100)
{
    return OhlcBar{Symbol(sym), ts(when), px(o), px(h), px(l), px(c), v};
}

inline NewsDoc news(std::uint64_t id, const char* media, const char* when, std::string content, std::vector<std::string> mentions)
{
    NewsDoc d{DocId{id}, media, ts(when), std::move(content), {}};
    for (auto& m : mentions) {
        d.mentions.emplace_back(std::move(m));
    }
    std::sort(d.mentions.begin(), d.mentions.end());
    return d;
}

/// Four stocks over three sectors, two weeks of July 2023 (July 1-2 and
/// 8-9 are weekends). A handful of intraday bars per trading day.
inline Dataset small_market()
{
    Dataset ds;
    ds.sectors = {{SectorId{0}, "Metals and Mining"}, {SectorId{1}, "Financial Services"}, {SectorId{2}, "Information Technology"}};
    ds.stocks = {{Symbol("TATASTEEL"), "Tata Steel", SectorId{0}},
                 {Symbol("JSWSTEEL"), "JSW Steel", SectorId{0}},
                 {Symbol("SBIN"), "State Bank of India", SectorId{1}},
                 {Symbol("INFY"), "Infosys", SectorId{2}}};
    const char* syms[] = {"TATASTEEL", "JSWSTEEL", "SBIN", "INFY"};
    const int days[] = {3, 4, 5, 6, 7, 10, 11, 12, 13, 14};
    for (const char* s : syms) {
        for (int d : days) {
            for (int h : {10, 12, 14}) {
                char when[40];
                std::snprintf(when, sizeof when, "2023-07-%02d %02d:00:00", d, h);
                ds.bars.push_back(bar(s, when, "100.0000", "101.5000", "99.2500", "100.7500", 1000 + d * 10 + h));
            }
        }
    }
    ds.news = {
        news(1, "Tata Steel", "2023-07-03 09:10:11.100000", "Tata Steel cuts carbon emission at Jamshedpur plant", {"TATASTEEL"}),
        news(2, "Biodiesel Magazine", "2023-07-03 21:27:20.801828", "SBIN funds renewable biodiesel capacity", {"SBIN"}),
        news(3, "Equitypandit", "2023-07-05 11:00:00", "Infosys and TATASTEEL sign a governance pact", {"INFY", "TATASTEEL"}),
        news(4, "Mint", "2023-07-06 08:00:00", "Quarterly results beat estimates", {"JSWSTEEL"}),
        news(5, "Reuters", "2023-07-08 10:00:00", "Weekend ESG summit for steel makers", {"JSWSTEEL"}),
        news(6, "Mint", "2023-07-10 16:45:00", "Markets closed higher", {}),
    };
    return ds;
}

inline ValidatedDataset validated(Dataset ds)
{
    auto v = validate_dataset(std::move(ds));
    if (!v.report.clean()) {
        throw Error("fixture did not validate: " + v.report.rejections.front().reason);
    }
    return std::move(v.data);
}

inline ingest::GeneratorConfig small_config(std::uint64_t seed)
{
    ingest::GeneratorConfig g;
    g.seed = seed;
    g.n_stocks = 12;
    g.n_sectors = 4;
    g.n_news = 300;
    g.days = 14;
    g.bars_per_day = 3;
    g.esg_fraction = 0.1;
    return g;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag)
{
    static std::mt19937_64 rng(std::random_device{}());
    auto p = std::filesystem::temp_directory_path() / ("esgbench-" + tag + "-" + std::to_string(rng()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace fixture

namespace oracle {

using namespace esgbench;

/// Tokens as the analyzer is specified: maximal runs of ASCII letters,
/// digits or non-ASCII bytes; ASCII letters lowercased.
inline std::vector<std::string> tokens(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 128;
        if (word) {
            cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : static_cast<char>(c));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

struct Corpus {
    std::vector<std::uint64_t> ids;
    std::vector<std::vector<std::string>> toks;

    explicit Corpus(const std::vector<std::pair<std::uint64_t, std::string>>& docs)
    {
        for (const auto& [id, text] : docs) {
            ids.push_back(id);
            toks.push_back(tokens(text));
        }
    }

    std::size_t tf(std::size_t d, const std::string& term) const
    {
        return static_cast<std::size_t>(std::count(toks[d].begin(), toks[d].end(), term));
    }

    std::size_t df(const std::string& term) const
    {
        std::size_t n = 0;
        for (std::size_t d = 0; d < toks.size(); ++d) {
            n += tf(d, term) > 0;
        }
        return n;
    }

    double avgdl() const
    {
        double total = 0;
        for (const auto& t : toks) {
            total += static_cast<double>(t.size());
        }
        return toks.empty() ? 0.0 : total / static_cast<double>(toks.size());
    }

    /// term -> [(doc id, tf, positions)] by doc id.
    std::map<std::string, std::vector<std::tuple<std::uint64_t, std::uint32_t, std::vector<std::uint32_t>>>> postings() const
    {
        std::map<std::string, std::vector<std::tuple<std::uint64_t, std::uint32_t, std::vector<std::uint32_t>>>> out;
        std::vector<std::size_t> order(ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
        std::set<std::string> vocab;
        for (const auto& t : toks) {
            vocab.insert(t.begin(), t.end());
        }
        for (const auto& term : vocab) {
            for (auto d : order) {
                std::vector<std::uint32_t> pos;
                for (std::uint32_t i = 0; i < toks[d].size(); ++i) {
                    if (toks[d][i] == term) {
                        pos.push_back(i);
                    }
                }
                if (!pos.empty()) {
                    out[term].emplace_back(ids[d], static_cast<std::uint32_t>(pos.size()), pos);
                }
            }
        }
        return out;
    }

    double bm25(std::size_t d, const std::vector<std::string>& query, double k1 = 1.2, double b = 0.75) const
    {
        std::set<std::string> uniq(query.begin(), query.end());
        const double n = static_cast<double>(toks.size());
        double score = 0.0;
        for (const auto& term : uniq) {
            const double f = static_cast<double>(tf(d, term));
            if (f == 0) {
                continue;
            }
            const double dfv = static_cast<double>(df(term));
            const double idf = std::log(1.0 + (n - dfv + 0.5) / (dfv + 0.5));
            const double len = static_cast<double>(toks[d].size());
            score += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * len / avgdl()));
        }
        return score;
    }

    double tsrank(std::size_t d, const std::vector<std::string>& query) const
    {
        std::set<std::string> uniq(query.begin(), query.end());
        double sum = 0.0;
        for (const auto& term : uniq) {
            const double f = static_cast<double>(tf(d, term));
            sum += f / (f + 1.0);
        }
        if (sum == 0.0) {
            return 0.0;
        }
        return sum / (1.0 + std::log(static_cast<double>(toks[d].size())));
    }

    /// Every doc with at least one query term, scored, sorted by (score desc, id asc).
    std::vector<std::pair<std::uint64_t, double>> rank_all(const std::vector<std::string>& query) const
    {
        std::vector<std::pair<std::uint64_t, double>> out;
        for (std::size_t d = 0; d < toks.size(); ++d) {
            bool any = false;
            for (const auto& q : query) {
                any = any || tf(d, q) > 0;
            }
            if (any) {
                out.emplace_back(ids[d], bm25(d, query));
            }
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
        return out;
    }
};

using HitTriple = std::tuple<std::string, std::int64_t, std::string>;

/// Q1 as a sorted multiset of (symbol, timestamp, media): every matching doc
/// times every mention.
inline std::vector<HitTriple> q1_triples(const Dataset& ds, const EsgLexicon& lex)
{
    std::vector<HitTriple> out;
    for (const auto& d : ds.news) {
        const auto t = tokens(d.content);
        bool match = false;
        for (const auto& term : lex.terms()) {
            match = match || std::find(t.begin(), t.end(), term) != t.end();
        }
        if (match) {
            for (const auto& m : d.mentions) {
                out.emplace_back(m.value, d.timestamp.micros, d.media);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<HitTriple> triples(const std::vector<SearchHit>& hits)
{
    std::vector<HitTriple> out;
    for (const auto& h : hits) {
        out.emplace_back(h.symbol.value, h.timestamp.micros, h.media);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::int32_t day_of(const Timestamp& t)
{
    const std::int64_t per_day = 86'400'000'000LL;
    return static_cast<std::int32_t>(t.micros >= 0 ? t.micros / per_day : -((-t.micros + per_day - 1) / per_day));
}

inline std::vector<BarRow> sorted_unique(std::vector<BarRow> rows)
{
    auto key = [](const BarRow& r) { return std::tie(r.bar.symbol.value, r.bar.timestamp.micros, r.anchor.days, r.seed.value); };
    std::sort(rows.begin(), rows.end(), [&](const BarRow& a, const BarRow& b) { return key(a) < key(b); });
    rows.erase(std::unique(rows.begin(), rows.end(), [&](const BarRow& a, const BarRow& b) { return key(a) == key(b); }), rows.end());
    return rows;
}

/// Nested loop: hits x offsets x bars.
inline std::vector<BarRow> bars_for_hits(const Dataset& ds, const std::vector<SearchHit>& hits, const std::vector<std::int32_t>& offsets)
{
    std::vector<BarRow> out;
    for (const auto& h : hits) {
        for (auto o : offsets) {
            for (const auto& b : ds.bars) {
                if (b.symbol == h.symbol && day_of(b.timestamp) == day_of(h.timestamp) + o) {
                    out.push_back(BarRow{Date{day_of(h.timestamp)}, h.symbol, b});
                }
            }
        }
    }
    return sorted_unique(std::move(out));
}

/// Reference days x stocks not mentioned by a hit that day x offsets x bars.
inline std::vector<BarRow> complement_bars(const Dataset& ds, const std::vector<SearchHit>& hits, const std::vector<std::int32_t>& offsets)
{
    std::set<std::int32_t> ref_days;
    for (const auto& h : hits) {
        ref_days.insert(day_of(h.timestamp));
    }
    std::vector<BarRow> out;
    for (auto day : ref_days) {
        for (const auto& s : ds.stocks) {
            bool affected = false;
            for (const auto& h : hits) {
                affected = affected || (h.symbol == s.symbol && day_of(h.timestamp) == day);
            }
            if (affected) {
                continue;
            }
            for (auto o : offsets) {
                for (const auto& b : ds.bars) {
                    if (b.symbol == s.symbol && day_of(b.timestamp) == day + o) {
                        out.push_back(BarRow{Date{day}, Symbol{}, b});
                    }
                }
            }
        }
    }
    return sorted_unique(std::move(out));
}

/// hits x stocks (same sector, not self) x bars on the hit day.
inline std::vector<BarRow> sector_peer_bars(const Dataset& ds, const std::vector<SearchHit>& hits)
{
    std::vector<BarRow> out;
    for (const auto& h : hits) {
        const Stock* seed = nullptr;
        for (const auto& s : ds.stocks) {
            if (s.symbol == h.symbol) {
                seed = &s;
            }
        }
        if (!seed) {
            continue;
        }
        for (const auto& peer : ds.stocks) {
            if (peer.sector != seed->sector || peer.symbol == seed->symbol) {
                continue;
            }
            for (const auto& b : ds.bars) {
                if (b.symbol == peer.symbol && day_of(b.timestamp) == day_of(h.timestamp)) {
                    out.push_back(BarRow{Date{day_of(h.timestamp)}, h.symbol, b});
                }
            }
        }
    }
    return sorted_unique(std::move(out));
}

}  // namespace oracle
