#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/text/analyzer.hpp"
#include "esgbench/text/inverted_index.hpp"

namespace esgbench::text {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// Okapi BM25 idf, kept non-negative by the `1 +` inside the log.
inline double bm25_idf(std::uint64_t df, std::uint64_t doc_count)
{
    const auto n = static_cast<double>(doc_count);
    const auto d = static_cast<double>(df);
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

/// Contribution of one term: idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avgdl)).
inline double bm25_term(std::uint32_t tf, std::uint32_t doc_len, double idf, double avg_doc_len, const Bm25Params& p)
{
    if (tf == 0) {
        return 0.0;
    }
    const double f = tf;
    const double norm = avg_doc_len > 0.0 ? static_cast<double>(doc_len) / avg_doc_len : 0.0;
    return idf * (f * (p.k1 + 1.0)) / (f + p.k1 * (1.0 - p.b + p.b * norm));
}

/// Sorted, de-duplicated query terms. Every scorer walks terms in this order
/// so sums are accumulated identically no matter which engine computes them.
inline std::vector<std::string> normalize_query(std::span<const std::string> terms)
{
    std::vector<std::string> out(terms.begin(), terms.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline double bm25_score(const InvertedIndex& index, std::span<const std::string> query, DocId doc, const Bm25Params& p = {},
                         const CorpusStats* global = nullptr)
{
    const auto ord = index.ordinal_of(doc);
    if (!ord) {
        throw Error("unknown doc id " + std::to_string(doc.value));
    }
    const std::uint64_t n = global ? global->doc_count : index.doc_count();
    const double avgdl = global ? global->avg_doc_len() : index.avg_doc_len();
    const auto len = index.length_at(*ord);
    double score = 0.0;
    for (const auto& term : normalize_query(query)) {
        const auto tf = index.tf_at(term, *ord);
        if (tf == 0) {
            continue;
        }
        const auto df = global ? global->df_of(term) : index.df(term);
        score += bm25_term(tf, len, bm25_idf(df, n), avgdl, p);
    }
    return score;
}

struct ScoredDoc {
    DocId doc;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// score desc, then doc id asc.
struct ScoredDocOrder {
    bool operator()(const ScoredDoc& a, const ScoredDoc& b) const
    {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc < b.doc;
    }
};

/// Every document containing at least one query term, BM25-scored, in
/// ScoredDocOrder, truncated to `k`. Passing `global` scores against
/// collection-wide statistics instead of this index's own.
inline std::vector<ScoredDoc> search(const InvertedIndex& index, std::span<const std::string> query, std::size_t k,
                                     const Bm25Params& p = {}, const CorpusStats* global = nullptr)
{
    if (k == 0) {
        throw Error("search requires k >= 1");
    }
    const auto terms = normalize_query(query);
    const std::uint64_t n = global ? global->doc_count : index.doc_count();
    const double avgdl = global ? global->avg_doc_len() : index.avg_doc_len();

    // (ordinal, term rank, contribution); sorted so each doc sums in term order.
    struct Contribution {
        std::uint32_t ord;
        std::uint32_t term;
        double value;
    };
    std::vector<Contribution> parts;
    for (std::uint32_t ti = 0; ti < terms.size(); ++ti) {
        const auto* pl = index.find(terms[ti]);
        if (!pl) {
            continue;
        }
        const auto df = global ? global->df_of(terms[ti]) : pl->size();
        const double idf = bm25_idf(df, n);
        for (std::size_t i = 0; i < pl->size(); ++i) {
            const auto ord = pl->ords[i];
            parts.push_back({ord, ti, bm25_term(pl->tfs[i], index.length_at(ord), idf, avgdl, p)});
        }
    }
    std::sort(parts.begin(), parts.end(), [](const Contribution& a, const Contribution& b) {
        return a.ord != b.ord ? a.ord < b.ord : a.term < b.term;
    });

    std::vector<ScoredDoc> scored;
    for (std::size_t i = 0; i < parts.size();) {
        const auto ord = parts[i].ord;
        double s = 0.0;
        for (; i < parts.size() && parts[i].ord == ord; ++i) {
            s += parts[i].value;
        }
        scored.push_back({index.doc_at(ord), s});
    }
    const auto keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), ScoredDocOrder{});
    scored.resize(keep);
    return scored;
}

/// Per-row token frequencies precomputed at load time; the relational
/// engine's full-text column. Entries are sorted by term.
class TokenVector {
  public:
    TokenVector() = default;

    static TokenVector from_text(std::string_view text)
    {
        TokenVector tv;
        std::vector<std::string> toks;
        for_each_raw_token(text, [&](std::string_view raw, std::uint32_t) { toks.push_back(to_lower_ascii(raw)); });
        tv.length_ = static_cast<std::uint32_t>(toks.size());
        std::sort(toks.begin(), toks.end());
        for (std::size_t i = 0; i < toks.size();) {
            std::size_t j = i;
            while (j < toks.size() && toks[j] == toks[i]) {
                ++j;
            }
            tv.entries_.emplace_back(std::move(toks[i]), static_cast<std::uint32_t>(j - i));
            i = j;
        }
        return tv;
    }

    std::uint32_t length() const { return length_; }
    const std::vector<std::pair<std::string, std::uint32_t>>& entries() const { return entries_; }

    std::uint32_t tf(std::string_view term) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                                   [](const auto& e, std::string_view t) { return std::string_view{e.first} < t; });
        return (it != entries_.end() && it->first == term) ? it->second : 0;
    }

    friend bool operator==(const TokenVector&, const TokenVector&) = default;

  private:
    std::vector<std::pair<std::string, std::uint32_t>> entries_;
    std::uint32_t length_ = 0;
};

/// Frequency rank without cover density: sum of tf / (tf + 1) over matched
/// query terms, divided by 1 + ln(doc length). `terms` must already be
/// normalized; tsrank_score() below does that for arbitrary input.
inline double tsrank_score_normalized(const TokenVector& tv, std::span<const std::string> terms)
{
    double sum = 0.0;
    for (const auto& term : terms) {
        const auto tf = tv.tf(term);
        if (tf > 0) {
            sum += static_cast<double>(tf) / (static_cast<double>(tf) + 1.0);
        }
    }
    if (sum == 0.0) {
        return 0.0;
    }
    return sum / (1.0 + std::log(static_cast<double>(tv.length())));
}

inline double tsrank_score(const TokenVector& tv, std::span<const std::string> query)
{
    return tsrank_score_normalized(tv, normalize_query(query));
}

}  // namespace esgbench::text
