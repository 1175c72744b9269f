#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "esgbench/core/model.hpp"
#include "esgbench/core/order.hpp"
#include "esgbench/text/scoring.hpp"
#include "esgbench/workload/engine.hpp"
#include "esgbench/workload/query_spec.hpp"

namespace esgbench {

using WorkloadResults = std::map<QueryId, ResultSet>;

/// Runtime handle over any QueryEngine. Default-constructed handles are
/// "not loaded" and refuse every query.
class AnyEngine {
  public:
    AnyEngine() = default;

    template <QueryEngine E>
    explicit AnyEngine(E engine) : impl_(std::make_shared<const Model<E>>(std::move(engine)))
    {
    }

    bool loaded() const { return impl_ != nullptr; }

    EngineKind engine_kind() const { return get().kind(); }

    std::vector<SearchHit> fulltext(const EsgLexicon& lexicon, std::size_t k, QueryStats& stats) const
    {
        return get().fulltext(lexicon, k, stats);
    }
    std::vector<BarRow> bars_for_hits(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets, QueryStats& stats) const
    {
        return get().bars_for_hits(hits, offsets, stats);
    }
    std::vector<BarRow> complement_bars(std::span<const SearchHit> hits, std::span<const std::int32_t> offsets,
                                        QueryStats& stats) const
    {
        return get().complement_bars(hits, offsets, stats);
    }
    std::vector<BarRow> sector_peer_bars(std::span<const SearchHit> hits, QueryStats& stats) const
    {
        return get().sector_peer_bars(hits, stats);
    }

    /// The wrapped engine, or nullptr when it is not an `E`.
    template <QueryEngine E>
    const E* as() const
    {
        auto* m = dynamic_cast<const Model<E>*>(impl_.get());
        return m ? &m->engine : nullptr;
    }

  private:
    struct Iface {
        virtual ~Iface() = default;
        virtual EngineKind kind() const = 0;
        virtual std::vector<SearchHit> fulltext(const EsgLexicon&, std::size_t, QueryStats&) const = 0;
        virtual std::vector<BarRow> bars_for_hits(std::span<const SearchHit>, std::span<const std::int32_t>, QueryStats&) const = 0;
        virtual std::vector<BarRow> complement_bars(std::span<const SearchHit>, std::span<const std::int32_t>, QueryStats&) const = 0;
        virtual std::vector<BarRow> sector_peer_bars(std::span<const SearchHit>, QueryStats&) const = 0;
    };

    template <typename E>
    struct Model final : Iface {
        explicit Model(E e) : engine(std::move(e)) {}
        EngineKind kind() const override { return engine.engine_kind(); }
        std::vector<SearchHit> fulltext(const EsgLexicon& l, std::size_t k, QueryStats& s) const override { return engine.fulltext(l, k, s); }
        std::vector<BarRow> bars_for_hits(std::span<const SearchHit> h, std::span<const std::int32_t> o, QueryStats& s) const override
        {
            return engine.bars_for_hits(h, o, s);
        }
        std::vector<BarRow> complement_bars(std::span<const SearchHit> h, std::span<const std::int32_t> o, QueryStats& s) const override
        {
            return engine.complement_bars(h, o, s);
        }
        std::vector<BarRow> sector_peer_bars(std::span<const SearchHit> h, QueryStats& s) const override { return engine.sector_peer_bars(h, s); }

        E engine;
    };

    const Iface& get() const
    {
        if (!impl_) {
            throw Error("engine not loaded");
        }
        return *impl_;
    }

    std::shared_ptr<const Iface> impl_;
};

static_assert(QueryEngine<AnyEngine>);

/// Article limit handed to the engines for a spec.
inline std::size_t effective_k(const QuerySpec& spec) { return spec.k == 0 ? text::kUnlimited : spec.k; }

/// Q4 day offsets: 1 .. horizon_days. The article day itself is never included.
inline std::vector<std::int32_t> horizon_offsets(const QuerySpec& spec)
{
    std::vector<std::int32_t> out(static_cast<std::size_t>(spec.horizon_days));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

/// Runs one query. Q2..Q5 take the Q1 hits they build on; Q1 ignores them.
///
///   Q1  ESG articles and the stocks they mention
///   Q2  bars of each hit stock on the article day
///   Q3  bars of the stocks no hit mentions, on each article day
///   Q4  Q2 and Q3 again for each of the next horizon_days days
///   Q5  bars of each hit stock's sector peers on the article day
template <QueryEngine E>
ResultSet run_query(const E& engine, QueryId q, const QuerySpec& spec, std::span<const SearchHit> q1_hits, QueryStats& stats)
{
    static constexpr std::int32_t kSameDay[] = {0};
    ResultSet rs;
    rs.query = q;
    switch (q) {
        case QueryId::Q1:
            rs.hits = engine.fulltext(spec.lexicon, effective_k(spec), stats);
            break;
        case QueryId::Q2:
            rs.bars = engine.bars_for_hits(q1_hits, kSameDay, stats);
            break;
        case QueryId::Q3:
            rs.bars = engine.complement_bars(q1_hits, kSameDay, stats);
            break;
        case QueryId::Q4: {
            const auto offsets = horizon_offsets(spec);
            auto rows = engine.bars_for_hits(q1_hits, offsets, stats);
            auto rest = engine.complement_bars(q1_hits, offsets, stats);
            rows.insert(rows.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
            rs.bars = canonical_set(std::move(rows));
            break;
        }
        case QueryId::Q5:
            rs.bars = engine.sector_peer_bars(q1_hits, stats);
            break;
    }
    return rs;
}

template <QueryEngine E>
ResultSet run_query(const E& engine, QueryId q, const QuerySpec& spec, std::span<const SearchHit> q1_hits)
{
    QueryStats stats;
    return run_query(engine, q, spec, q1_hits, stats);
}

/// Q1 first, then Q2..Q5 over its hits.
template <QueryEngine E>
WorkloadResults run_workload(const E& engine, const QuerySpec& spec)
{
    if constexpr (std::is_same_v<E, AnyEngine>) {
        if (!engine.loaded()) {
            throw Error("engine not loaded");
        }
    }
    WorkloadResults out;
    out[QueryId::Q1] = run_query(engine, QueryId::Q1, spec, {});
    const auto& hits = out[QueryId::Q1].hits;
    for (auto q : {QueryId::Q2, QueryId::Q3, QueryId::Q4, QueryId::Q5}) {
        out[q] = run_query(engine, q, spec, hits);
    }
    return out;
}

}  // namespace esgbench
