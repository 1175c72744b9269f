#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "esgbench/core/hash.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/core/order.hpp"
#include "esgbench/core/validate.hpp"
#include "esgbench/relational/table.hpp"
#include "esgbench/text/scoring.hpp"
#include "esgbench/workload/engine.hpp"

namespace esgbench::relational {

struct SectorRow {
    SectorId id;
    std::string name;
};

struct StockRow {
    Symbol symbol;
    std::string name;
    SectorId sector;
};

struct NewsRow {
    DocId id;
    std::string media;
    Timestamp timestamp;
    std::string content;
    text::TokenVector tsv;  // precomputed full-text column
};

struct MentionRow {
    DocId doc;
    Symbol symbol;
};

struct BarRecord {
    OhlcBar bar;
    Date day;
};

/// Row-store engine. Full-text search is a sequential scan over the news
/// table scoring each row's token vector; every join is a hash join whose
/// build side is the (small) hit list and whose probe side is a scan of the
/// bars table. Immutable after load.
class RelationalEngine {
  public:
    static constexpr EngineKind kind = EngineKind::Relational;

    EngineKind engine_kind() const { return kind; }

    static RelationalEngine load(const ValidatedDataset& data)
    {
        RelationalEngine e;
        for (const auto& s : data.sectors()) {
            e.sectors_.append({s.id, s.name});
        }
        for (const auto& s : data.stocks()) {
            e.stocks_.append({s.symbol, s.name, s.sector});
        }
        e.news_.reserve(data.news().size());
        for (const auto& n : data.news()) {
            e.news_.append({n.id, n.media, n.timestamp, n.content, text::TokenVector::from_text(n.content)});
            for (const auto& m : n.mentions) {
                e.mentions_.append({n.id, m});
            }
        }
        e.bars_.reserve(data.bars().size());
        for (const auto& b : data.bars()) {
            e.bars_.append({b, b.day()});
        }
        e.sector_pk_ = HashIndex<SectorId>::build(e.sectors_, [](const SectorRow& r) { return r.id; }, true);
        e.stock_pk_ = HashIndex<Symbol>::build(e.stocks_, [](const StockRow& r) { return r.symbol; }, true);
        e.stock_by_sector_ = HashIndex<SectorId>::build(e.stocks_, [](const StockRow& r) { return r.sector; }, false);
        e.news_pk_ = HashIndex<DocId>::build(e.news_, [](const NewsRow& r) { return r.id; }, true);
        e.bar_pk_ = HashIndex<SymbolTime>::build(
            e.bars_, [](const BarRecord& r) { return SymbolTime{r.bar.symbol, r.bar.timestamp}; }, true);
        return e;
    }

    const Table<SectorRow>& sectors() const { return sectors_; }
    const Table<StockRow>& stocks() const { return stocks_; }
    const Table<NewsRow>& news() const { return news_; }
    const Table<MentionRow>& mentions() const { return mentions_; }
    const Table<BarRecord>& bars() const { return bars_; }

    const StockRow* find_stock(const Symbol& s) const
    {
        const auto& rows = stock_pk_.lookup(s);
        return rows.empty() ? nullptr : &stocks_[rows.front()];
    }

    /// Sequential scan of news scoring every row with tsrank; matching
    /// articles are limited to the top `k`, then hash-joined with the
    /// mentions table.
    std::vector<SearchHit> fulltext(const EsgLexicon& lexicon, std::size_t k, QueryStats& stats) const
    {
        const auto terms = text::normalize_query(lexicon.terms());
        struct Match {
            std::size_t row;
            double score;
        };
        std::vector<Match> matches;
        for (std::size_t i = 0; i < news_.size(); ++i) {
            const double s = text::tsrank_score_normalized(news_[i].tsv, terms);
            if (s > 0.0) {
                matches.push_back({i, s});
            }
        }
        stats.sub_queries += 1;
        auto by_rank = [&](const Match& a, const Match& b) {
            if (a.score != b.score) {
                return a.score > b.score;
            }
            return news_[a.row].id < news_[b.row].id;
        };
        const auto keep = std::min(k, matches.size());
        std::partial_sort(matches.begin(), matches.begin() + static_cast<std::ptrdiff_t>(keep), matches.end(), by_rank);
        matches.resize(keep);

        std::unordered_map<DocId, const Match*> build;
        build.reserve(matches.size());
        for (const auto& m : matches) {
            build.emplace(news_[m.row].id, &m);
        }
        std::vector<SearchHit> hits;
        for (const auto& mention : mentions_) {
            auto it = build.find(mention.doc);
            if (it == build.end()) {
                continue;
            }
            const auto& row = news_[it->second->row];
            hits.push_back(SearchHit{row.id, mention.symbol, row.timestamp, row.media, it->second->score});
        }
        return canonical_order(std::move(hits));
    }

    /// Hash join hits x bars on (symbol, hit day + offset).
    std::vector<BarRow> bars_for_hits(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets, QueryStats& stats) const
    {
        struct Origin {
            Date anchor;
            Symbol seed;
        };
        std::unordered_map<SymbolDay, std::vector<Origin>> build;
        for (const auto& h : hits) {
            for (auto o : offsets) {
                build[SymbolDay{h.symbol, h.day().plus(o)}].push_back({h.day(), h.symbol});
            }
        }
        stats.sub_queries += 1;
        std::vector<BarRow> out;
        if (build.empty()) {
            return out;
        }
        for (const auto& rec : bars_) {
            auto it = build.find(SymbolDay{rec.bar.symbol, rec.day});
            if (it == build.end()) {
                continue;
            }
            for (const auto& origin : it->second) {
                out.push_back(BarRow{origin.anchor, origin.seed, rec.bar});
            }
        }
        return canonical_set(std::move(out));
    }

    /// Anti-join: bars of stocks that no hit mentions on a reference day.
    std::vector<BarRow> complement_bars(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets,
                                        QueryStats& stats) const
    {
        std::unordered_set<Date> ref_days;
        std::unordered_set<SymbolDay> affected;
        for (const auto& h : hits) {
            ref_days.insert(h.day());
            affected.insert(SymbolDay{h.symbol, h.day()});
        }
        stats.sub_queries += 1;
        std::vector<BarRow> out;
        if (ref_days.empty()) {
            return out;
        }
        for (const auto& rec : bars_) {
            for (auto o : offsets) {
                const Date anchor = rec.day.plus(-o);
                if (ref_days.contains(anchor) && !affected.contains(SymbolDay{rec.bar.symbol, anchor})) {
                    out.push_back(BarRow{anchor, Symbol{}, rec.bar});
                }
            }
        }
        return canonical_set(std::move(out));
    }

    /// hits -> stocks -> sector -> stocks (minus the hit stock) -> bars on the hit day.
    std::vector<BarRow> sector_peer_bars(std::span<const SearchHit> hits, QueryStats& stats) const
    {
        std::unordered_map<SymbolDay, std::vector<Symbol>> build;
        for (const auto& h : hits) {
            const auto* seed = find_stock(h.symbol);
            if (!seed) {
                continue;
            }
            for (auto row : stock_by_sector_.lookup(seed->sector)) {
                const auto& peer = stocks_[row];
                if (peer.symbol != seed->symbol) {
                    build[SymbolDay{peer.symbol, h.day()}].push_back(seed->symbol);
                }
            }
        }
        stats.sub_queries += 1;
        std::vector<BarRow> out;
        if (build.empty()) {
            return out;
        }
        for (const auto& rec : bars_) {
            auto it = build.find(SymbolDay{rec.bar.symbol, rec.day});
            if (it == build.end()) {
                continue;
            }
            for (const auto& seed : it->second) {
                out.push_back(BarRow{rec.day, seed, rec.bar});
            }
        }
        return canonical_set(std::move(out));
    }

  private:
    RelationalEngine() = default;

    Table<SectorRow> sectors_{"sectors"};
    Table<StockRow> stocks_{"stocks"};
    Table<NewsRow> news_{"news"};
    Table<MentionRow> mentions_{"mentions"};
    Table<BarRecord> bars_{"bars"};

    HashIndex<SectorId> sector_pk_{true};
    HashIndex<Symbol> stock_pk_{true};
    HashIndex<SectorId> stock_by_sector_{false};
    HashIndex<DocId> news_pk_{true};
    HashIndex<SymbolTime> bar_pk_{true};
};

static_assert(QueryEngine<RelationalEngine>);

}  // namespace esgbench::relational
