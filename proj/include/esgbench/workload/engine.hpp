#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "esgbench/core/model.hpp"

namespace esgbench {

/// Per-query work counters. Each engine fills the one that reflects its
/// access path; neither is shared between queries.
struct QueryStats {
    std::size_t sub_queries = 0;    // document engine: requests issued to collections
    std::size_t visited_nodes = 0;  // graph engine: nodes touched by traversal
};

/// The operations every engine implements. The five benchmark queries are
/// composed from these in workload.hpp.
///
///  - fulltext: ESG search, one hit per (matching article, mentioned stock),
///    articles limited to the top `k` by the engine's own scorer.
///  - bars_for_hits: bars of each hit stock on hit day + offset.
///  - complement_bars: bars of every stock not mentioned by any hit on a
///    reference day, on reference day + offset.
///  - sector_peer_bars: bars of each hit stock's sector peers on the hit day.
template <typename E>
concept QueryEngine = requires(const E& e, const EsgLexicon& lexicon, std::size_t k, std::span<const SearchHit> hits,
                               std::span<const std::int32_t> offsets, QueryStats& stats) {
    { e.engine_kind() } -> std::convertible_to<EngineKind>;
    { e.fulltext(lexicon, k, stats) } -> std::same_as<std::vector<SearchHit>>;
    { e.bars_for_hits(hits, offsets, stats) } -> std::same_as<std::vector<BarRow>>;
    { e.complement_bars(hits, offsets, stats) } -> std::same_as<std::vector<BarRow>>;
    { e.sector_peer_bars(hits, stats) } -> std::same_as<std::vector<BarRow>>;
};

}  // namespace esgbench
