#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "esgbench/core/model.hpp"
#include "esgbench/workload/workload.hpp"

namespace esgbench {

inline std::string format_hit(const SearchHit& h)
{
    std::ostringstream o;
    o << h.symbol.value << ' ' << h.timestamp.to_string() << ' ' << h.media;
    return o.str();
}

inline std::string format_bar_row(const BarRow& r)
{
    std::ostringstream o;
    o << r.bar.symbol.value << ' ' << r.bar.timestamp.to_string() << " O=" << r.bar.open.to_string() << " H=" << r.bar.high.to_string()
      << " L=" << r.bar.low.to_string() << " C=" << r.bar.close.to_string() << " V=" << r.bar.volume << " anchor=" << r.anchor.to_string()
      << " seed=" << (r.seed.empty() ? "-" : r.seed.value);
    return o.str();
}

struct Divergence {
    QueryId query;
    std::size_t row;    // first differing row index
    std::string left;   // "<missing>" when that side ran out of rows
    std::string right;
};

struct EquivalenceReport {
    bool q1_ordered = false;
    std::vector<Divergence> divergences;  // at most one per query

    bool equivalent() const { return divergences.empty(); }

    std::string summary() const
    {
        if (equivalent()) {
            return "equivalent";
        }
        std::ostringstream o;
        for (const auto& d : divergences) {
            o << to_string(d.query) << " diverges at row " << d.row << ": [" << d.left << "] vs [" << d.right << "]\n";
        }
        return o.str();
    }
};

/// True when both engines rank Q1 with the same scorer (BM25 for document
/// and graph, tsrank for relational), so Q1 order must agree too.
inline bool same_scorer(EngineKind a, EngineKind b) { return (a == EngineKind::Relational) == (b == EngineKind::Relational); }

namespace detail {

template <typename Row, typename Fmt>
std::optional<Divergence> first_difference(QueryId q, const std::vector<Row>& a, const std::vector<Row>& b, Fmt&& fmt)
{
    const auto n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto left = i < a.size() ? fmt(a[i]) : std::string("<missing>");
        const auto right = i < b.size() ? fmt(b[i]) : std::string("<missing>");
        if (i >= a.size() || i >= b.size() || !(a[i] == b[i])) {
            return Divergence{q, i, left, right};
        }
    }
    return std::nullopt;
}

using HitKey = std::tuple<std::string, std::int64_t, std::string>;

inline std::vector<HitKey> hit_keys(const std::vector<SearchHit>& hits, bool sort)
{
    std::vector<HitKey> keys;
    keys.reserve(hits.size());
    for (const auto& h : hits) {
        keys.emplace_back(h.symbol.value, h.timestamp.micros, h.media);
    }
    if (sort) {
        std::sort(keys.begin(), keys.end());
    }
    return keys;
}

inline std::string format_key(const HitKey& k)
{
    return std::get<0>(k) + ' ' + Timestamp{std::get<1>(k)}.to_string() + ' ' + std::get<2>(k);
}

}  // namespace detail

/// Compares two workload runs. Q1 is compared as (stock, date, media)
/// triples: in order when `q1_ordered`, as multisets otherwise. Q2..Q5 must
/// match row for row.
inline EquivalenceReport assert_equivalent(const WorkloadResults& a, const WorkloadResults& b, bool q1_ordered)
{
    EquivalenceReport rep;
    rep.q1_ordered = q1_ordered;
    static const ResultSet empty;
    auto find = [](const WorkloadResults& r, QueryId q) -> const ResultSet& {
        auto it = r.find(q);
        return it == r.end() ? empty : it->second;
    };
    for (auto q : kAllQueries) {
        const auto& ra = find(a, q);
        const auto& rb = find(b, q);
        std::optional<Divergence> d;
        if (q == QueryId::Q1) {
            d = detail::first_difference(q, detail::hit_keys(ra.hits, !q1_ordered), detail::hit_keys(rb.hits, !q1_ordered),
                                         detail::format_key);
        } else {
            d = detail::first_difference(q, ra.bars, rb.bars, format_bar_row);
        }
        if (d) {
            rep.divergences.push_back(std::move(*d));
        }
    }
    return rep;
}

inline EquivalenceReport assert_equivalent(const WorkloadResults& a, EngineKind ka, const WorkloadResults& b, EngineKind kb)
{
    return assert_equivalent(a, b, same_scorer(ka, kb));
}

}  // namespace esgbench
