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
#include "esgbench/graph/store.hpp"
#include "esgbench/text/scoring.hpp"
#include "esgbench/workload/engine.hpp"

namespace esgbench::graph {

/// Native graph engine over the GraphStore. News nodes are searchable
/// through a full-text index; everything after that is traversal. Each stock
/// keeps a day-keyed skip map over its HAS_BAR relationships so "bars of
/// stock S on day D" reads only that day's slice of the adjacency list.
class GraphEngine {
  public:
    static constexpr EngineKind kind = EngineKind::Graph;

    EngineKind engine_kind() const { return kind; }

    static GraphEngine load(const ValidatedDataset& data, text::Bm25Params params = {})
    {
        GraphEngine g;
        g.params_ = params;
        g.intern_keys();
        auto& s = g.store_;

        std::unordered_map<SectorId, NodeId> sector_nodes;
        for (const auto& sec : data.sectors()) {
            PropertyMap p;
            p.set(g.k_sector_id_, static_cast<std::int64_t>(sec.id.value));
            p.set(g.k_name_, sec.name);
            sector_nodes.emplace(sec.id, s.create_node(Label::Sector, std::move(p)));
        }
        for (const auto& st : data.stocks()) {
            PropertyMap p;
            p.set(g.k_symbol_, st.symbol.value);
            p.set(g.k_name_, st.name);
            const auto id = s.create_node(Label::Stock, std::move(p));
            g.stock_by_symbol_.emplace(st.symbol, id);
            auto sec = sector_nodes.find(st.sector);
            if (sec == sector_nodes.end()) {
                throw Error("dangling IN_SECTOR endpoint for " + st.symbol.value);
            }
            s.create_relationship(RelType::InSector, id, sec->second);
        }

        std::vector<const OhlcBar*> bars;
        bars.reserve(data.bars().size());
        for (const auto& b : data.bars()) {
            bars.push_back(&b);
        }
        std::sort(bars.begin(), bars.end(), [](const OhlcBar* a, const OhlcBar* b) {
            return a->symbol != b->symbol ? a->symbol < b->symbol : a->timestamp < b->timestamp;
        });
        for (const auto* b : bars) {
            PropertyMap p;
            p.set(g.k_symbol_, b->symbol.value);
            p.set(g.k_timestamp_, b->timestamp.micros);
            p.set(g.k_open_, b->open.ticks);
            p.set(g.k_high_, b->high.ticks);
            p.set(g.k_low_, b->low.ticks);
            p.set(g.k_close_, b->close.ticks);
            p.set(g.k_volume_, b->volume);
            const auto bar = s.create_node(Label::Bar, std::move(p));
            s.create_relationship(RelType::HasBar, g.stock_node(b->symbol), bar);
        }
        for (auto stock : s.nodes_with_label(Label::Stock)) {
            g.index_days(stock);
        }
        for (const auto& [sym, node] : g.stock_by_symbol_) {
            g.by_rank_.push_back(node);
        }
        std::sort(g.by_rank_.begin(), g.by_rank_.end(),
                  [&](NodeId a, NodeId b) { return s.string_property(a, g.k_symbol_) < s.string_property(b, g.k_symbol_); });
        for (std::uint32_t r = 0; r < g.by_rank_.size(); ++r) {
            g.rank_.emplace(g.by_rank_[r], r);
            g.symbol_by_rank_.emplace_back(s.string_property(g.by_rank_[r], g.k_symbol_));
        }

        std::vector<const NewsDoc*> news;
        news.reserve(data.news().size());
        for (const auto& n : data.news()) {
            news.push_back(&n);
        }
        std::sort(news.begin(), news.end(), [](const NewsDoc* a, const NewsDoc* b) { return a->id < b->id; });
        for (const auto* n : news) {
            PropertyMap p;
            p.set(g.k_doc_id_, static_cast<std::int64_t>(n->id.value));
            p.set(g.k_media_, n->media);
            p.set(g.k_timestamp_, n->timestamp.micros);
            p.set(g.k_content_, n->content);
            const auto node = s.create_node(Label::News, std::move(p));
            for (const auto& m : n->mentions) {
                s.create_relationship(RelType::Mentions, node, g.stock_node(m));
            }
            g.fulltext_.add_document(n->id, n->content);
            g.news_by_ordinal_.push_back(node);
        }
        return g;
    }

    const GraphStore& store() const { return store_; }
    const text::InvertedIndex& fulltext_index() const { return fulltext_; }

    std::vector<NodeId> neighbors(NodeId id, RelType type, Direction dir) const { return store_.neighbors(id, type, dir); }

    std::optional<NodeId> find_stock(const Symbol& s) const
    {
        auto it = stock_by_symbol_.find(s);
        if (it == stock_by_symbol_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// BM25 over the News full-text index, then one MENTIONS hop per article.
    std::vector<SearchHit> fulltext(const EsgLexicon& lexicon, std::size_t k, QueryStats& stats) const
    {
        std::vector<SearchHit> hits;
        for (const auto& scored : text::search(fulltext_, lexicon.terms(), k, params_)) {
            const auto news = news_by_ordinal_[*fulltext_.ordinal_of(scored.doc)];
            ++stats.visited_nodes;
            const Timestamp ts{store_.int_property(news, k_timestamp_)};
            const auto& media = store_.string_property(news, k_media_);
            for (auto rel : store_.node(news).rels(RelType::Mentions, Direction::Out)) {
                const auto stock = store_.other(rel, Direction::Out);
                ++stats.visited_nodes;
                hits.push_back(SearchHit{scored.doc, Symbol{store_.string_property(stock, k_symbol_)}, ts, media, scored.score});
            }
        }
        return canonical_order(std::move(hits));
    }

    /// hit -> Stock -HAS_BAR-> Bar, restricted to hit day + offset.
    std::vector<BarRow> bars_for_hits(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets, QueryStats& stats) const
    {
        std::vector<Visit> plan;
        for (const auto& h : hits) {
            const auto rank = rank_of(h.symbol);
            if (!rank) {
                continue;
            }
            ++stats.visited_nodes;
            for (auto o : offsets) {
                plan.push_back(Visit{*rank, h.day().plus(o), h.day(), *rank + 1});
            }
        }
        return walk(std::move(plan), stats);
    }

    /// Stock label scan minus each reference day's hit stocks, then HAS_BAR for that day + offset.
    std::vector<BarRow> complement_bars(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets,
                                        QueryStats& stats) const
    {
        std::vector<Date> ref_days;
        std::unordered_set<SymbolDay> affected;
        for (const auto& h : hits) {
            ref_days.push_back(h.day());
            affected.insert(SymbolDay{h.symbol, h.day()});
        }
        std::sort(ref_days.begin(), ref_days.end());
        ref_days.erase(std::unique(ref_days.begin(), ref_days.end()), ref_days.end());

        std::vector<Visit> plan;
        for (auto day : ref_days) {
            for (auto stock : store_.nodes_with_label(Label::Stock)) {
                ++stats.visited_nodes;
                Symbol sym{store_.string_property(stock, k_symbol_)};
                if (affected.contains(SymbolDay{sym, day})) {
                    continue;
                }
                const auto rank = rank_.at(stock);
                for (auto o : offsets) {
                    plan.push_back(Visit{rank, day.plus(o), day, 0});
                }
            }
        }
        return walk(std::move(plan), stats);
    }

    /// hit -> Stock -IN_SECTOR-> Sector <-IN_SECTOR- peer Stock (not self) -HAS_BAR-> Bar on the hit day.
    std::vector<BarRow> sector_peer_bars(std::span<const SearchHit> hits, QueryStats& stats) const
    {
        std::vector<Visit> plan;
        for (const auto& h : hits) {
            const auto seed = find_stock(h.symbol);
            if (!seed) {
                continue;
            }
            ++stats.visited_nodes;
            const auto seed_rank = rank_.at(*seed);
            for (auto sector_rel : store_.node(*seed).rels(RelType::InSector, Direction::Out)) {
                const auto sector = store_.other(sector_rel, Direction::Out);
                ++stats.visited_nodes;
                for (auto peer_rel : store_.node(sector).rels(RelType::InSector, Direction::In)) {
                    const auto peer = store_.other(peer_rel, Direction::In);
                    if (peer == *seed) {
                        continue;
                    }
                    ++stats.visited_nodes;
                    plan.push_back(Visit{rank_.at(peer), h.day(), h.day(), seed_rank + 1});
                }
            }
        }
        return walk(std::move(plan), stats);
    }

    /// Bars hanging off `stock` on `day`, via the skip-to-day map.
    template <typename Fn>
    void for_each_bar_on(NodeId stock, Date day, QueryStats& stats, Fn&& fn) const
    {
        auto it = day_index_.find(stock);
        if (it == day_index_.end()) {
            return;
        }
        const auto& slices = it->second;
        auto slice = std::lower_bound(slices.begin(), slices.end(), day, [](const DaySlice& s, Date d) { return s.day < d; });
        if (slice == slices.end() || slice->day != day) {
            return;
        }
        const auto rels = store_.node(stock).rels(RelType::HasBar, Direction::Out);
        for (auto i = slice->begin; i < slice->end; ++i) {
            const auto bar = store_.other(rels[i], Direction::Out);
            ++stats.visited_nodes;
            fn(read_bar(bar));
        }
    }

    OhlcBar read_bar(NodeId bar) const
    {
        return OhlcBar{Symbol{store_.string_property(bar, k_symbol_)},
                       Timestamp{store_.int_property(bar, k_timestamp_)},
                       Price{store_.int_property(bar, k_open_)},
                       Price{store_.int_property(bar, k_high_)},
                       Price{store_.int_property(bar, k_low_)},
                       Price{store_.int_property(bar, k_close_)},
                       store_.int_property(bar, k_volume_)};
    }

  private:
    // One pending HAS_BAR expansion. Stocks are identified by their rank in
    // symbol order and seeds by rank + 1 (0 = no seed), so sorting visits
    // sorts the rows they produce into canonical order.
    struct Visit {
        std::uint32_t stock;
        Date target;
        Date anchor;
        std::uint32_t seed;

        friend auto operator<=>(const Visit&, const Visit&) = default;
    };

    std::optional<std::uint32_t> rank_of(const Symbol& s) const
    {
        auto node = find_stock(s);
        if (!node) {
            return std::nullopt;
        }
        return rank_.at(*node);
    }

    /// Expands visits into rows. Within one (stock, day) the adjacency is in
    /// timestamp order, so the output needs no final sort.
    std::vector<BarRow> walk(std::vector<Visit> plan, QueryStats& stats) const
    {
        std::sort(plan.begin(), plan.end());
        plan.erase(std::unique(plan.begin(), plan.end()), plan.end());
        std::vector<BarRow> out;
        for (std::size_t i = 0; i < plan.size();) {
            std::size_t j = i;
            while (j < plan.size() && plan[j].stock == plan[i].stock && plan[j].target == plan[i].target) {
                ++j;
            }
            for_each_bar_on(by_rank_[plan[i].stock], plan[i].target, stats, [&](const OhlcBar& bar) {
                for (std::size_t v = i; v < j; ++v) {
                    const auto seed = plan[v].seed;
                    out.push_back(BarRow{plan[v].anchor, seed == 0 ? Symbol{} : symbol_by_rank_[seed - 1], bar});
                }
            });
            i = j;
        }
        return out;
    }

    struct DaySlice {
        Date day;
        std::uint32_t begin;  // range into the stock's HAS_BAR out-adjacency
        std::uint32_t end;
    };

    GraphEngine() = default;

    void intern_keys()
    {
        k_symbol_ = store_.key("symbol");
        k_name_ = store_.key("name");
        k_sector_id_ = store_.key("sector_id");
        k_doc_id_ = store_.key("doc_id");
        k_media_ = store_.key("media");
        k_timestamp_ = store_.key("timestamp");
        k_content_ = store_.key("content");
        k_open_ = store_.key("open");
        k_high_ = store_.key("high");
        k_low_ = store_.key("low");
        k_close_ = store_.key("close");
        k_volume_ = store_.key("volume");
    }

    NodeId stock_node(const Symbol& s) const
    {
        auto it = stock_by_symbol_.find(s);
        if (it == stock_by_symbol_.end()) {
            throw Error("dangling endpoint: no Stock node for " + s.value);
        }
        return it->second;
    }

    // HAS_BAR relationships were created in timestamp order per stock, so
    // each day is one contiguous run of the adjacency list.
    void index_days(NodeId stock)
    {
        const auto rels = store_.node(stock).rels(RelType::HasBar, Direction::Out);
        std::vector<DaySlice> slices;
        for (std::uint32_t i = 0; i < rels.size(); ++i) {
            const Date day = Timestamp{store_.int_property(store_.other(rels[i], Direction::Out), k_timestamp_)}.date();
            if (slices.empty() || slices.back().day != day) {
                slices.push_back({day, i, i});
            }
            slices.back().end = i + 1;
        }
        if (!slices.empty()) {
            day_index_.emplace(stock, std::move(slices));
        }
    }

    GraphStore store_;
    text::InvertedIndex fulltext_;
    text::Bm25Params params_;
    std::vector<NodeId> news_by_ordinal_;
    std::unordered_map<Symbol, NodeId> stock_by_symbol_;
    std::unordered_map<NodeId, std::vector<DaySlice>> day_index_;
    std::vector<NodeId> by_rank_;  // Stock nodes in symbol order
    std::vector<Symbol> symbol_by_rank_;
    std::unordered_map<NodeId, std::uint32_t> rank_;

    PropertyKey k_symbol_ = 0, k_name_ = 0, k_sector_id_ = 0, k_doc_id_ = 0, k_media_ = 0, k_timestamp_ = 0, k_content_ = 0;
    PropertyKey k_open_ = 0, k_high_ = 0, k_low_ = 0, k_close_ = 0, k_volume_ = 0;
};

static_assert(QueryEngine<GraphEngine>);

}  // namespace esgbench::graph
