#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "esgbench/core/chars.hpp"
#include "esgbench/core/error.hpp"
#include "esgbench/core/price.hpp"
#include "esgbench/core/timestamp.hpp"

namespace esgbench {

/// Uppercase ticker, e.g. "TATASTEEL".
struct Symbol {
    std::string value;

    Symbol() = default;
    explicit Symbol(std::string v) : value(std::move(v)) {}

    bool empty() const { return value.empty(); }
    std::string_view view() const { return value; }

    friend auto operator<=>(const Symbol&, const Symbol&) = default;
    friend bool operator==(const Symbol&, const Symbol&) = default;

    /// Non-empty, uppercase ASCII letters and digits only.
    static bool well_formed(std::string_view s)
    {
        if (s.empty()) {
            return false;
        }
        return std::all_of(s.begin(), s.end(), [](char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); });
    }
};

struct SectorId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(SectorId, SectorId) = default;
};

struct DocId {
    std::uint64_t value = 0;
    friend constexpr auto operator<=>(DocId, DocId) = default;
};

struct Sector {
    SectorId id;
    std::string name;

    friend bool operator==(const Sector&, const Sector&) = default;
};

struct Stock {
    Symbol symbol;
    std::string name;
    SectorId sector;

    friend bool operator==(const Stock&, const Stock&) = default;
};

struct NewsDoc {
    DocId id;
    std::string media;
    Timestamp timestamp;
    std::string content;
    std::vector<Symbol> mentions;  // sorted, unique

    friend bool operator==(const NewsDoc&, const NewsDoc&) = default;
};

struct OhlcBar {
    Symbol symbol;
    Timestamp timestamp;
    Price open;
    Price high;
    Price low;
    Price close;
    std::int64_t volume = 0;

    Date day() const { return timestamp.date(); }

    friend bool operator==(const OhlcBar&, const OhlcBar&) = default;
};

/// Set of lowercase single-token terms that flag a news article as ESG-relevant.
class EsgLexicon {
  public:
    EsgLexicon(std::initializer_list<std::string_view> terms) : EsgLexicon(std::vector<std::string>(terms.begin(), terms.end())) {}

    explicit EsgLexicon(std::vector<std::string> terms) : terms_(std::move(terms))
    {
        if (terms_.empty()) {
            throw Error("ESG lexicon must contain at least one term");
        }
        for (const auto& t : terms_) {
            if (!is_analyzer_stable(t)) {
                throw Error("lexicon term '" + t + "' is not a lowercase single token");
            }
        }
        std::sort(terms_.begin(), terms_.end());
        terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    }

    /// Default term list shipped with the tool. Overridable through the query config.
    static const EsgLexicon& defaults()
    {
        static const EsgLexicon lex{"esg",    "environmental", "social",    "governance", "sustainability",
                                    "emission", "carbon",      "biodiesel", "renewable"};
        return lex;
    }

    const std::vector<std::string>& terms() const { return terms_; }

    friend bool operator==(const EsgLexicon&, const EsgLexicon&) = default;

  private:
    std::vector<std::string> terms_;  // sorted, unique
};

/// One (news article, mentioned stock) pair returned by the ESG search.
struct SearchHit {
    DocId doc;
    Symbol symbol;
    Timestamp timestamp;
    std::string media;
    double score = 0.0;

    Date day() const { return timestamp.date(); }

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// A bar returned by one of the OHLC queries. `anchor` is the article day the
/// row was derived from; `seed` is the hit stock that led to it (empty for
/// the unaffected-stock queries).
struct BarRow {
    Date anchor;
    Symbol seed;
    OhlcBar bar;

    friend bool operator==(const BarRow&, const BarRow&) = default;
};

enum class QueryId { Q1 = 1, Q2, Q3, Q4, Q5 };

inline constexpr QueryId kAllQueries[] = {QueryId::Q1, QueryId::Q2, QueryId::Q3, QueryId::Q4, QueryId::Q5};

inline std::string_view to_string(QueryId q)
{
    switch (q) {
        case QueryId::Q1: return "Q1";
        case QueryId::Q2: return "Q2";
        case QueryId::Q3: return "Q3";
        case QueryId::Q4: return "Q4";
        case QueryId::Q5: return "Q5";
    }
    return "Q?";
}

inline QueryId parse_query_id(std::string_view s)
{
    for (auto q : kAllQueries) {
        if (to_string(q) == s) {
            return q;
        }
    }
    throw Error("unknown query id '" + std::string(s) + "'");
}

struct ResultSet {
    QueryId query = QueryId::Q1;
    std::vector<SearchHit> hits;  // Q1
    std::vector<BarRow> bars;     // Q2..Q5

    std::size_t size() const { return query == QueryId::Q1 ? hits.size() : bars.size(); }

    friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

enum class EngineKind { Relational, Document, Graph };

inline constexpr EngineKind kAllEngines[] = {EngineKind::Relational, EngineKind::Document, EngineKind::Graph};

inline std::string_view to_string(EngineKind e)
{
    switch (e) {
        case EngineKind::Relational: return "relational";
        case EngineKind::Document: return "document";
        case EngineKind::Graph: return "graph";
    }
    return "?";
}

inline EngineKind parse_engine_kind(std::string_view s)
{
    for (auto e : kAllEngines) {
        if (to_string(e) == s) {
            return e;
        }
    }
    throw Error("unknown engine '" + std::string(s) + "'");
}

/// One measured execution.
struct BenchSample {
    EngineKind engine = EngineKind::Relational;
    QueryId query = QueryId::Q1;
    double wall_ms = 0.0;
    double cpu_max_pct = 0.0;
    double cpu_avg_pct = 0.0;
    double peak_mem_mb = 0.0;
};

/// Raw, not yet validated collections as produced by ingest or the generator.
struct Dataset {
    std::vector<Sector> sectors;
    std::vector<Stock> stocks;
    std::vector<NewsDoc> news;
    std::vector<OhlcBar> bars;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace esgbench

template <>
struct std::hash<esgbench::Symbol> {
    std::size_t operator()(const esgbench::Symbol& s) const noexcept { return std::hash<std::string>{}(s.value); }
};

template <>
struct std::hash<esgbench::DocId> {
    std::size_t operator()(esgbench::DocId d) const noexcept { return std::hash<std::uint64_t>{}(d.value); }
};

template <>
struct std::hash<esgbench::SectorId> {
    std::size_t operator()(esgbench::SectorId d) const noexcept { return std::hash<std::uint32_t>{}(d.value); }
};
