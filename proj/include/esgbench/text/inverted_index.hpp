#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/text/analyzer.hpp"

namespace esgbench::text {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

/// Postings for one term in column layout. Entry i refers to the document at
/// ordinal `ords[i]`; its positions are `positions[pos_begin[i] .. pos_begin[i] + tfs[i])`.
struct PostingList {
    std::vector<std::uint32_t> ords;
    std::vector<std::uint32_t> tfs;
    std::vector<std::uint32_t> pos_begin;
    std::vector<std::uint32_t> positions;

    std::size_t size() const { return ords.size(); }

    std::span<const std::uint32_t> positions_of(std::size_t i) const
    {
        return std::span<const std::uint32_t>(positions).subspan(pos_begin[i], tfs[i]);
    }

    friend bool operator==(const PostingList&, const PostingList&) = default;
};

struct Posting {
    DocId doc;
    std::uint32_t tf = 0;
    std::vector<std::uint32_t> positions;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Corpus-level statistics BM25 needs. A sharded index scores with the global
/// statistics of the whole collection rather than its own.
struct CorpusStats {
    std::uint64_t doc_count = 0;
    std::uint64_t total_length = 0;
    std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>> df;

    double avg_doc_len() const { return doc_count == 0 ? 0.0 : static_cast<double>(total_length) / static_cast<double>(doc_count); }

    std::uint64_t df_of(std::string_view term) const
    {
        auto it = df.find(term);
        return it == df.end() ? 0 : it->second;
    }
};

/// Term -> postings over a set of documents. Documents are appended in
/// strictly increasing DocId order, which keeps every posting list sorted by
/// doc id without a merge step. Frozen after the build phase by convention;
/// concurrent readers are safe, concurrent writers are not.
class InvertedIndex {
  public:
    using TermMap = std::unordered_map<std::string, PostingList, StringHash, std::equal_to<>>;

    /// Appends one document. `id` must exceed every id already present.
    void add_document(DocId id, std::string_view text)
    {
        if (!ids_.empty() && id <= ids_.back()) {
            if (contains(id)) {
                throw Error("duplicate doc id " + std::to_string(id.value));
            }
            throw Error("documents must be added in increasing doc id order");
        }
        const auto ord = static_cast<std::uint32_t>(ids_.size());
        std::uint32_t pos = 0;
        for_each_raw_token(text, [&](std::string_view raw, std::uint32_t) {
            scratch_.assign(raw);
            for (auto& c : scratch_) {
                c = ascii_lower(c);
            }
            auto it = terms_.find(std::string_view{scratch_});
            if (it == terms_.end()) {
                it = terms_.emplace(scratch_, PostingList{}).first;
            }
            auto& pl = it->second;
            if (pl.ords.empty() || pl.ords.back() != ord) {
                pl.ords.push_back(ord);
                pl.tfs.push_back(0);
                pl.pos_begin.push_back(static_cast<std::uint32_t>(pl.positions.size()));
            }
            ++pl.tfs.back();
            pl.positions.push_back(pos++);
        });
        ids_.push_back(id);
        lengths_.push_back(pos);
        total_length_ += pos;
    }

    std::size_t doc_count() const { return ids_.size(); }
    std::uint64_t total_length() const { return total_length_; }
    double avg_doc_len() const { return ids_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(ids_.size()); }
    std::size_t term_count() const { return terms_.size(); }

    bool contains(DocId id) const { return ordinal_of(id).has_value(); }

    std::optional<std::uint32_t> ordinal_of(DocId id) const
    {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it == ids_.end() || *it != id) {
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(it - ids_.begin());
    }

    DocId doc_at(std::uint32_t ord) const { return ids_[ord]; }
    std::uint32_t length_at(std::uint32_t ord) const { return lengths_[ord]; }

    std::uint32_t doc_length(DocId id) const
    {
        auto ord = ordinal_of(id);
        if (!ord) {
            throw Error("unknown doc id " + std::to_string(id.value));
        }
        return lengths_[*ord];
    }

    const PostingList* find(std::string_view term) const
    {
        auto it = terms_.find(term);
        return it == terms_.end() ? nullptr : &it->second;
    }

    std::uint64_t df(std::string_view term) const
    {
        const auto* pl = find(term);
        return pl ? pl->size() : 0;
    }

    /// Term frequency of `term` in the document at `ord`, 0 when absent.
    std::uint32_t tf_at(std::string_view term, std::uint32_t ord) const
    {
        const auto* pl = find(term);
        if (!pl) {
            return 0;
        }
        auto it = std::lower_bound(pl->ords.begin(), pl->ords.end(), ord);
        if (it == pl->ords.end() || *it != ord) {
            return 0;
        }
        return pl->tfs[static_cast<std::size_t>(it - pl->ords.begin())];
    }

    /// Materialized postings for `term`, sorted by doc id.
    std::vector<Posting> postings(std::string_view term) const
    {
        std::vector<Posting> out;
        if (const auto* pl = find(term)) {
            out.reserve(pl->size());
            for (std::size_t i = 0; i < pl->size(); ++i) {
                auto pos = pl->positions_of(i);
                out.push_back(Posting{ids_[pl->ords[i]], pl->tfs[i], {pos.begin(), pos.end()}});
            }
        }
        return out;
    }

    CorpusStats stats() const
    {
        CorpusStats s;
        s.doc_count = ids_.size();
        s.total_length = total_length_;
        s.df.reserve(terms_.size());
        for (const auto& [term, pl] : terms_) {
            s.df.emplace(term, pl.size());
        }
        return s;
    }

    /// Terms in lexicographic order; the iteration order of the hash map is
    /// not stable across builds, this is.
    std::vector<std::string_view> sorted_terms() const
    {
        std::vector<std::string_view> out;
        out.reserve(terms_.size());
        for (const auto& [term, pl] : terms_) {
            out.push_back(term);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::vector<DocId>& doc_ids() const { return ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const { return lengths_; }
    const TermMap& term_map() const { return terms_; }

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b)
    {
        return a.ids_ == b.ids_ && a.lengths_ == b.lengths_ && a.total_length_ == b.total_length_ && a.terms_ == b.terms_;
    }

  private:
    friend class IndexReader;

    std::vector<DocId> ids_;
    std::vector<std::uint32_t> lengths_;
    std::uint64_t total_length_ = 0;
    TermMap terms_;
    std::string scratch_;
};

/// Builds an index over `docs`. Input order does not matter; doc ids must be unique.
inline InvertedIndex build_index(std::vector<std::pair<DocId, std::string_view>> docs)
{
    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].first == docs[i - 1].first) {
            throw Error("duplicate doc id " + std::to_string(docs[i].first.value));
        }
    }
    InvertedIndex idx;
    for (const auto& [id, text] : docs) {
        idx.add_document(id, text);
    }
    return idx;
}

}  // namespace esgbench::text
