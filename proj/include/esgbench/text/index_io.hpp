#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/text/inverted_index.hpp"

namespace esgbench::text {

// On-disk layout (all integers little-endian), see docs/index_format.md:
//
//   "ESGX1"                       5 bytes
//   u64 doc_count
//   doc_count x { u64 doc_id, u32 length }        ascending doc_id
//   u64 term_count
//   term_count x {                                 ascending term bytes
//       u32 term_len, term bytes,
//       u32 posting_count,
//       posting_count x { u32 ordinal, u32 tf, tf x u32 position }
//   }

inline constexpr std::string_view kIndexMagic = "ESGX1";

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

inline void put_u64(std::string& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

class ByteReader {
  public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(uint_le(4)); }
    std::uint64_t u64() { return uint_le(8); }

    std::string_view take(std::size_t n)
    {
        need(n);
        auto v = bytes_.substr(pos_, n);
        pos_ += n;
        return v;
    }

    bool done() const { return pos_ == bytes_.size(); }

  private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n) {
            throw ParseError("index file truncated");
        }
    }

    std::uint64_t uint_le(int width)
    {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Serializes `index`. Output depends only on index contents, so rebuilding
/// from the same documents produces identical bytes.
inline std::string serialize_index(const InvertedIndex& index)
{
    std::string out(kIndexMagic);
    detail::put_u64(out, index.doc_count());
    for (std::size_t i = 0; i < index.doc_count(); ++i) {
        detail::put_u64(out, index.doc_ids()[i].value);
        detail::put_u32(out, index.doc_lengths()[i]);
    }
    const auto terms = index.sorted_terms();
    detail::put_u64(out, terms.size());
    for (auto term : terms) {
        const auto& pl = *index.find(term);
        detail::put_u32(out, static_cast<std::uint32_t>(term.size()));
        out.append(term);
        detail::put_u32(out, static_cast<std::uint32_t>(pl.size()));
        for (std::size_t i = 0; i < pl.size(); ++i) {
            detail::put_u32(out, pl.ords[i]);
            detail::put_u32(out, pl.tfs[i]);
            for (auto p : pl.positions_of(i)) {
                detail::put_u32(out, p);
            }
        }
    }
    return out;
}

class IndexReader {
  public:
    static InvertedIndex read(std::string_view bytes)
    {
        if (bytes.substr(0, kIndexMagic.size()) != kIndexMagic) {
            throw ParseError("not an ESGX1 index (bad magic)");
        }
        detail::ByteReader in(bytes.substr(kIndexMagic.size()));
        InvertedIndex idx;
        const auto docs = in.u64();
        for (std::uint64_t i = 0; i < docs; ++i) {
            const DocId id{in.u64()};
            const auto len = in.u32();
            if (!idx.ids_.empty() && id <= idx.ids_.back()) {
                throw ParseError("index doc ids not strictly ascending");
            }
            idx.ids_.push_back(id);
            idx.lengths_.push_back(len);
            idx.total_length_ += len;
        }
        const auto term_count = in.u64();
        std::string prev;
        for (std::uint64_t t = 0; t < term_count; ++t) {
            std::string term(in.take(in.u32()));
            if (t > 0 && term <= prev) {
                throw ParseError(term == prev ? "duplicate term in index file" : "index terms not in ascending order");
            }
            prev = term;
            PostingList pl;
            const auto n = in.u32();
            for (std::uint32_t i = 0; i < n; ++i) {
                const auto ord = in.u32();
                const auto tf = in.u32();
                if (ord >= docs || (!pl.ords.empty() && ord <= pl.ords.back()) || tf == 0) {
                    throw ParseError("corrupt posting list for term '" + term + "'");
                }
                pl.ords.push_back(ord);
                pl.tfs.push_back(tf);
                pl.pos_begin.push_back(static_cast<std::uint32_t>(pl.positions.size()));
                for (std::uint32_t k = 0; k < tf; ++k) {
                    const auto p = in.u32();
                    if (p >= idx.lengths_[ord] || (k > 0 && p <= pl.positions.back())) {
                        throw ParseError("corrupt positions for term '" + term + "'");
                    }
                    pl.positions.push_back(p);
                }
            }
            if (!idx.terms_.emplace(std::move(term), std::move(pl)).second) {
                throw ParseError("duplicate term in index file");
            }
        }
        if (!in.done()) {
            throw ParseError("trailing bytes after index");
        }
        return idx;
    }
};

inline InvertedIndex deserialize_index(std::string_view bytes) { return IndexReader::read(bytes); }

inline void save_index(const InvertedIndex& index, const std::string& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot write index file '" + path + "'");
    }
    const auto bytes = serialize_index(index);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw IoError("failed writing index file '" + path + "'");
    }
}

inline InvertedIndex load_index(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot read index file '" + path + "'");
    }
    std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    return deserialize_index(bytes);
}

}  // namespace esgbench::text
