#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "esgbench/core/model.hpp"

namespace esgbench {

/// Total order on hits: score desc, timestamp desc, symbol asc, then media
/// and doc id so distinct hits never compare equal.
struct HitOrder {
    bool operator()(const SearchHit& a, const SearchHit& b) const
    {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.timestamp != b.timestamp) {
            return a.timestamp > b.timestamp;
        }
        if (a.symbol != b.symbol) {
            return a.symbol < b.symbol;
        }
        if (a.media != b.media) {
            return a.media < b.media;
        }
        return a.doc < b.doc;
    }
};

/// Total order on bar rows: symbol asc, timestamp asc, then anchor day and seed.
struct BarRowOrder {
    bool operator()(const BarRow& a, const BarRow& b) const
    {
        if (a.bar.symbol != b.bar.symbol) {
            return a.bar.symbol < b.bar.symbol;
        }
        if (a.bar.timestamp != b.bar.timestamp) {
            return a.bar.timestamp < b.bar.timestamp;
        }
        if (a.anchor != b.anchor) {
            return a.anchor < b.anchor;
        }
        return a.seed < b.seed;
    }
};

inline std::vector<SearchHit> canonical_order(std::vector<SearchHit> rows)
{
    std::stable_sort(rows.begin(), rows.end(), HitOrder{});
    return rows;
}

inline std::vector<BarRow> canonical_order(std::vector<BarRow> rows)
{
    std::stable_sort(rows.begin(), rows.end(), BarRowOrder{});
    return rows;
}

/// Sorts and drops exact duplicates. Bar queries have set semantics: two hits
/// on the same stock and day must not yield the same bar twice.
inline std::vector<BarRow> canonical_set(std::vector<BarRow> rows)
{
    std::sort(rows.begin(), rows.end(), BarRowOrder{});
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const BarRow& a, const BarRow& b) {
                               return a.bar.symbol == b.bar.symbol && a.bar.timestamp == b.bar.timestamp &&
                                      a.anchor == b.anchor && a.seed == b.seed;
                           }),
               rows.end());
    return rows;
}

}  // namespace esgbench
