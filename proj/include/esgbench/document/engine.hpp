#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "esgbench/core/hash.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/core/order.hpp"
#include "esgbench/core/validate.hpp"
#include "esgbench/document/collection.hpp"
#include "esgbench/text/analyzer.hpp"
#include "esgbench/workload/engine.hpp"

namespace esgbench::document {

using json = nlohmann::json;

/// Document-store engine. News, bars and stocks live in separate
/// collections and every read goes through a JSON request/response pair
/// (`handle`), the way a client talks to a search server. There are no
/// server-side joins: relating news to bars means one bar request per hit.
class DocumentEngine {
  public:
    static constexpr EngineKind kind = EngineKind::Document;

    EngineKind engine_kind() const { return kind; }

    static DocumentEngine load(const ValidatedDataset& data, std::size_t shard_count = 1, text::Bm25Params params = {})
    {
        if (shard_count < 1) {
            throw Error("shard_count must be >= 1");
        }
        DocumentEngine e(shard_count, params);

        std::vector<const NewsDoc*> news;
        for (const auto& n : data.news()) {
            news.push_back(&n);
        }
        std::sort(news.begin(), news.end(), [](const NewsDoc* a, const NewsDoc* b) { return a->id < b->id; });
        for (const auto* n : news) {
            DocRecord r{n->id, {}};
            r.fields.emplace("media", n->media);
            r.fields.emplace("date", n->timestamp);
            r.fields.emplace("content", n->content);
            std::string mentions;
            for (const auto& m : n->mentions) {
                if (!mentions.empty()) {
                    mentions += ' ';
                }
                mentions += m.value;
            }
            r.fields.emplace("mentions", std::move(mentions));
            e.news_.insert(std::move(r));
        }

        std::uint64_t next = 0;
        for (const auto& b : data.bars()) {
            DocRecord r{DocId{next++}, {}};
            r.fields.emplace("symbol", b.symbol.value);
            r.fields.emplace("timestamp", b.timestamp);
            r.fields.emplace("open", b.open.ticks);
            r.fields.emplace("high", b.high.ticks);
            r.fields.emplace("low", b.low.ticks);
            r.fields.emplace("close", b.close.ticks);
            r.fields.emplace("volume", b.volume);
            e.bars_.insert(std::move(r));
        }

        std::unordered_map<SectorId, std::string> sector_names;
        for (const auto& s : data.sectors()) {
            sector_names.emplace(s.id, s.name);
        }
        next = 0;
        for (const auto& s : data.stocks()) {
            DocRecord r{DocId{next++}, {}};
            r.fields.emplace("symbol", s.symbol.value);
            r.fields.emplace("name", s.name);
            r.fields.emplace("sector", sector_names.at(s.sector));
            e.stocks_.insert(std::move(r));
            e.sector_of_.emplace(s.symbol, s.sector);
            e.members_[s.sector].push_back(s.symbol);
        }
        e.news_.refresh();
        e.bars_.refresh();
        e.stocks_.refresh();
        return e;
    }

    const Collection& news() const { return news_; }
    const Collection& bars() const { return bars_; }
    const Collection& stocks() const { return stocks_; }
    std::size_t shard_count() const { return news_.shard_count(); }

    // ---------------------------------------------------------------- server

    /// Executes one JSON request against a collection and returns the JSON
    /// response. Supported queries: `match` on the text field, `bool.filter`
    /// with one `term` and one `range` clause, and `match_all`.
    std::string handle(std::string_view request) const
    {
        const auto req = json::parse(request);
        const auto& index = req.at("index").get_ref<const std::string&>();
        const Collection& coll = collection(index);
        const auto& query = req.at("query");
        json hits = json::array();

        if (query.contains("match")) {
            const auto& [field, text_value] = *query.at("match").items().begin();
            if (!coll.schema().text_field || *coll.schema().text_field != field) {
                throw Error("field '" + field + "' is not full-text searchable in '" + index + "'");
            }
            const auto terms = text::tokenize(text_value.get<std::string>()).terms();
            const std::size_t size = req.contains("size") ? req.at("size").get<std::size_t>() : text::kUnlimited;
            if (!terms.empty() && size > 0) {
                for (const auto& sd : coll.match(terms, size, params_)) {
                    hits.push_back(hit_json(*coll.get(sd.doc), sd.score));
                }
            }
        } else if (query.contains("bool")) {
            std::string term_field, term_value, range_field;
            Timestamp from{INT64_MIN}, to{INT64_MAX};
            for (const auto& clause : query.at("bool").at("filter")) {
                if (clause.contains("term")) {
                    const auto& [f, v] = *clause.at("term").items().begin();
                    term_field = f;
                    term_value = v.get<std::string>();
                } else if (clause.contains("range")) {
                    const auto& [f, bounds] = *clause.at("range").items().begin();
                    range_field = f;
                    if (bounds.contains("gte")) {
                        from = Timestamp::parse(bounds.at("gte").get<std::string>());
                    }
                    if (bounds.contains("lt")) {
                        to = Timestamp::parse(bounds.at("lt").get<std::string>());
                    }
                }
            }
            for (const auto* rec : coll.filter(term_field, term_value, range_field, from, to)) {
                hits.push_back(hit_json(*rec, 0.0));
            }
        } else if (query.contains("match_all")) {
            coll.for_each([&](const DocRecord& rec) { hits.push_back(hit_json(rec, 1.0)); });
        } else {
            throw Error("unsupported query: " + query.dump());
        }
        json resp;
        resp["hits"]["total"] = hits.size();
        resp["hits"]["hits"] = std::move(hits);
        return resp.dump();
    }

    // ---------------------------------------------------------------- client

    std::vector<SearchHit> fulltext(const EsgLexicon& lexicon, std::size_t k, QueryStats& stats) const
    {
        std::string q;
        for (const auto& t : lexicon.terms()) {
            if (!q.empty()) {
                q += ' ';
            }
            q += t;
        }
        json req{{"index", "news"}, {"query", {{"match", {{"content", q}}}}}};
        if (k != text::kUnlimited) {
            req["size"] = k;
        }
        const auto resp = request(req, stats);
        std::vector<SearchHit> hits;
        for (const auto& h : resp.at("hits").at("hits")) {
            const auto& src = h.at("_source");
            const DocId id{h.at("_id").get<std::uint64_t>()};
            const double score = h.at("_score").get<double>();
            const auto ts = Timestamp::parse(src.at("date").get<std::string>());
            const auto& media = src.at("media").get_ref<const std::string&>();
            std::string_view rest = src.at("mentions").get_ref<const std::string&>();
            while (!rest.empty()) {
                const auto sp = rest.find(' ');
                hits.push_back(SearchHit{id, Symbol{std::string(rest.substr(0, sp))}, ts, media, score});
                rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
            }
        }
        return canonical_order(std::move(hits));
    }

    /// One bar request per hit (per contiguous run of offsets).
    std::vector<BarRow> bars_for_hits(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets, QueryStats& stats) const
    {
        const auto runs = offset_runs(offsets);
        std::vector<BarRow> out;
        for (const auto& h : hits) {
            for (const auto& [lo, hi] : runs) {
                for (auto& bar : fetch_bars(h.symbol, h.day().plus(lo), h.day().plus(hi + 1), stats)) {
                    out.push_back(BarRow{h.day(), h.symbol, std::move(bar)});
                }
            }
        }
        return canonical_set(std::move(out));
    }

    /// Scans the stock universe, removes each reference day's hit symbols
    /// client-side, then requests bars stock by stock.
    std::vector<BarRow> complement_bars(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets,
                                        QueryStats& stats) const
    {
        std::set<Date> ref_days;
        std::unordered_set<SymbolDay> affected;
        for (const auto& h : hits) {
            ref_days.insert(h.day());
            affected.insert(SymbolDay{h.symbol, h.day()});
        }
        std::vector<BarRow> out;
        if (ref_days.empty()) {
            return out;
        }
        const auto universe = request(json{{"index", "stocks"}, {"query", {{"match_all", json::object()}}}}, stats);
        std::vector<Symbol> symbols;
        for (const auto& h : universe.at("hits").at("hits")) {
            symbols.emplace_back(h.at("_source").at("symbol").get<std::string>());
        }
        const auto runs = offset_runs(offsets);
        for (auto day : ref_days) {
            for (const auto& sym : symbols) {
                if (affected.contains(SymbolDay{sym, day})) {
                    continue;
                }
                for (const auto& [lo, hi] : runs) {
                    for (auto& bar : fetch_bars(sym, day.plus(lo), day.plus(hi + 1), stats)) {
                        out.push_back(BarRow{day, Symbol{}, std::move(bar)});
                    }
                }
            }
        }
        return canonical_set(std::move(out));
    }

    /// Sector lookup table on the client, then one bar request per peer.
    std::vector<BarRow> sector_peer_bars(std::span<const SearchHit> hits, QueryStats& stats) const
    {
        std::vector<BarRow> out;
        for (const auto& h : hits) {
            auto sec = sector_of_.find(h.symbol);
            if (sec == sector_of_.end()) {
                continue;
            }
            for (const auto& peer : members_.at(sec->second)) {
                if (peer == h.symbol) {
                    continue;
                }
                for (auto& bar : fetch_bars(peer, h.day(), h.day().plus(1), stats)) {
                    out.push_back(BarRow{h.day(), h.symbol, std::move(bar)});
                }
            }
        }
        return canonical_set(std::move(out));
    }

  private:
    DocumentEngine(std::size_t shards, text::Bm25Params params)
        : params_(params),
          news_(CollectionSchema{"news", {"media", "date", "content", "mentions"}, "content", {"mentions"}}, shards),
          bars_(CollectionSchema{"bars", {"symbol", "timestamp", "open", "high", "low", "close", "volume"}, std::nullopt, {"symbol"}},
                shards),
          stocks_(CollectionSchema{"stocks", {"symbol", "name", "sector"}, std::nullopt, {"symbol", "sector"}}, shards)
    {
    }

    const Collection& collection(std::string_view name) const
    {
        if (name == "news") {
            return news_;
        }
        if (name == "bars") {
            return bars_;
        }
        if (name == "stocks") {
            return stocks_;
        }
        throw Error("no such collection '" + std::string(name) + "'");
    }

    static json field_json(const FieldValue& v)
    {
        return std::visit(
            [](const auto& x) -> json {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Timestamp>) {
                    return x.to_string();
                } else {
                    return x;
                }
            },
            v);
    }

    static json hit_json(const DocRecord& rec, double score)
    {
        json src = json::object();
        for (const auto& [name, value] : rec.fields) {
            src[name] = field_json(value);
        }
        return json{{"_id", rec.id.value}, {"_score", score}, {"_source", std::move(src)}};
    }

    json request(const json& req, QueryStats& stats) const
    {
        ++stats.sub_queries;
        return json::parse(handle(req.dump()));
    }

    std::vector<OhlcBar> fetch_bars(const Symbol& symbol, Date from, Date to_exclusive, QueryStats& stats) const
    {
        json req;
        req["index"] = "bars";
        auto& filter = req["query"]["bool"]["filter"];
        filter = json::array();
        filter.push_back({{"term", {{"symbol", symbol.value}}}});
        json range;
        range["range"]["timestamp"]["gte"] = Timestamp::at(from).to_string();
        range["range"]["timestamp"]["lt"] = Timestamp::at(to_exclusive).to_string();
        filter.push_back(std::move(range));
        const auto resp = request(req, stats);
        std::vector<OhlcBar> out;
        for (const auto& h : resp.at("hits").at("hits")) {
            const auto& s = h.at("_source");
            out.push_back(OhlcBar{Symbol{s.at("symbol").get<std::string>()},
                                  Timestamp::parse(s.at("timestamp").get<std::string>()),
                                  Price{s.at("open").get<std::int64_t>()},
                                  Price{s.at("high").get<std::int64_t>()},
                                  Price{s.at("low").get<std::int64_t>()},
                                  Price{s.at("close").get<std::int64_t>()},
                                  s.at("volume").get<std::int64_t>()});
        }
        return out;
    }

    /// Groups offsets into contiguous inclusive [lo, hi] runs, one range request each.
    static std::vector<std::pair<std::int32_t, std::int32_t>> offset_runs(std::span<const std::int32_t> offsets)
    {
        std::vector<std::int32_t> sorted(offsets.begin(), offsets.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::pair<std::int32_t, std::int32_t>> runs;
        for (auto o : sorted) {
            if (!runs.empty() && runs.back().second + 1 == o) {
                runs.back().second = o;
            } else {
                runs.emplace_back(o, o);
            }
        }
        return runs;
    }

    text::Bm25Params params_;
    Collection news_;
    Collection bars_;
    Collection stocks_;
    std::unordered_map<Symbol, SectorId> sector_of_;
    std::unordered_map<SectorId, std::vector<Symbol>> members_;
};

static_assert(QueryEngine<DocumentEngine>);

}  // namespace esgbench::document
