#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/core/hash.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/text/inverted_index.hpp"
#include "esgbench/text/scoring.hpp"

namespace esgbench::document {

using FieldValue = std::variant<std::string, std::int64_t, double, Timestamp>;

/// A document in dictionary form: flat field name -> value.
struct DocRecord {
    DocId id;
    std::map<std::string, FieldValue, std::less<>> fields;

    const FieldValue* get(std::string_view field) const
    {
        auto it = fields.find(field);
        return it == fields.end() ? nullptr : &it->second;
    }
};

struct CollectionSchema {
    std::string name;
    std::vector<std::string> fields;
    std::optional<std::string> text_field;    // analyzed, BM25-searchable
    std::vector<std::string> keyword_fields;  // exact-term filters; values split on spaces

    bool has_field(std::string_view f) const { return std::find(fields.begin(), fields.end(), f) != fields.end(); }
};

/// One partition of a collection with its own record store and indexes.
struct Shard {
    std::vector<DocRecord> records;
    std::unordered_map<DocId, std::uint32_t> slot_of;
    text::InvertedIndex text;
    std::unordered_map<std::string, std::unordered_map<std::string, std::vector<std::uint32_t>>> keywords;
};

/// A named set of records spread over `shard_count` shards by hashed doc id.
/// Full-text scoring uses collection-wide statistics, so results do not
/// depend on the shard count.
class Collection {
  public:
    Collection(CollectionSchema schema, std::size_t shard_count) : schema_(std::move(schema))
    {
        if (shard_count < 1) {
            throw Error("shard_count must be >= 1");
        }
        shards_.resize(shard_count);
    }

    static std::size_t shard_for(DocId id, std::size_t shard_count) { return static_cast<std::size_t>(mix64(id.value) % shard_count); }

    /// Records must arrive in increasing doc id order.
    void insert(DocRecord rec)
    {
        for (const auto& [name, value] : rec.fields) {
            if (!schema_.has_field(name)) {
                throw Error("field '" + name + "' not in schema of collection '" + schema_.name + "'");
            }
        }
        auto& shard = shards_[shard_for(rec.id, shards_.size())];
        if (shard.slot_of.contains(rec.id)) {
            throw Error("duplicate doc id in collection '" + schema_.name + "'");
        }
        const auto slot = static_cast<std::uint32_t>(shard.records.size());
        if (schema_.text_field) {
            const auto* v = rec.get(*schema_.text_field);
            const auto* s = v ? std::get_if<std::string>(v) : nullptr;
            shard.text.add_document(rec.id, s ? std::string_view{*s} : std::string_view{});
        }
        for (const auto& kf : schema_.keyword_fields) {
            const auto* v = rec.get(kf);
            const auto* s = v ? std::get_if<std::string>(v) : nullptr;
            if (!s) {
                continue;
            }
            auto& terms = shard.keywords[kf];
            std::string_view rest = *s;
            while (!rest.empty()) {
                const auto sp = rest.find(' ');
                const auto term = rest.substr(0, sp);
                if (!term.empty()) {
                    terms[std::string(term)].push_back(slot);
                }
                rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
            }
        }
        shard.slot_of.emplace(rec.id, slot);
        shard.records.push_back(std::move(rec));
        stats_dirty_ = true;
    }

    /// Aggregates per-shard term statistics into the global table used at query time.
    void refresh()
    {
        global_ = text::CorpusStats{};
        for (const auto& sh : shards_) {
            global_.doc_count += sh.text.doc_count();
            global_.total_length += sh.text.total_length();
            for (const auto& [term, pl] : sh.text.term_map()) {
                global_.df[term] += pl.size();
            }
        }
        stats_dirty_ = false;
    }

    /// Scatter: every shard returns its local top-k scored with global
    /// statistics. Gather: merge the shard lists and keep the global top-k.
    std::vector<text::ScoredDoc> match(std::span<const std::string> terms, std::size_t k, const text::Bm25Params& p) const
    {
        if (stats_dirty_) {
            throw Error("collection '" + schema_.name + "' searched before refresh()");
        }
        std::vector<text::ScoredDoc> merged;
        for (const auto& sh : shards_) {
            auto local = text::search(sh.text, terms, k, p, &global_);
            merged.insert(merged.end(), local.begin(), local.end());
        }
        const auto keep = std::min(k, merged.size());
        std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(keep), merged.end(), text::ScoredDocOrder{});
        merged.resize(keep);
        return merged;
    }

    /// Records whose keyword `term_field` contains `term` and whose
    /// timestamp field lies in [from, to).
    std::vector<const DocRecord*> filter(std::string_view term_field, std::string_view term, std::string_view range_field,
                                         Timestamp from, Timestamp to) const
    {
        std::vector<const DocRecord*> out;
        for (const auto& sh : shards_) {
            auto field = sh.keywords.find(std::string(term_field));
            if (field == sh.keywords.end()) {
                continue;
            }
            auto postings = field->second.find(std::string(term));
            if (postings == field->second.end()) {
                continue;
            }
            for (auto slot : postings->second) {
                const auto& rec = sh.records[slot];
                const auto* v = rec.get(range_field);
                const auto* ts = v ? std::get_if<Timestamp>(v) : nullptr;
                if (ts && *ts >= from && *ts < to) {
                    out.push_back(&rec);
                }
            }
        }
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (const auto& sh : shards_) {
            for (const auto& rec : sh.records) {
                fn(rec);
            }
        }
    }

    const DocRecord* get(DocId id) const
    {
        const auto& sh = shards_[shard_for(id, shards_.size())];
        auto it = sh.slot_of.find(id);
        return it == sh.slot_of.end() ? nullptr : &sh.records[it->second];
    }

    const CollectionSchema& schema() const { return schema_; }
    std::size_t shard_count() const { return shards_.size(); }
    const Shard& shard(std::size_t i) const { return shards_.at(i); }
    const text::CorpusStats& global_stats() const { return global_; }

    std::size_t size() const
    {
        std::size_t n = 0;
        for (const auto& sh : shards_) {
            n += sh.records.size();
        }
        return n;
    }

  private:
    CollectionSchema schema_;
    std::vector<Shard> shards_;
    text::CorpusStats global_;
    bool stats_dirty_ = true;
};

}  // namespace esgbench::document
