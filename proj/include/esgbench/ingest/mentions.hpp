#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "esgbench/core/model.hpp"
#include "esgbench/text/analyzer.hpp"

namespace esgbench::ingest {

/// Links article text to stocks by dictionary match on ticker symbols and
/// company names. Matching runs over analyzed tokens, so it is
/// case-insensitive and ignores punctuation; at each position the longest
/// dictionary entry wins and matching resumes after it.
class MentionMatcher {
  public:
    MentionMatcher() = default;

    explicit MentionMatcher(std::span<const Stock> stocks)
    {
        for (const auto& s : stocks) {
            add(s.symbol, s.symbol.value);
            add(s.symbol, s.name);
        }
        for (auto& [first, entries] : by_first_) {
            std::stable_sort(entries.begin(), entries.end(),
                             [](const Entry& a, const Entry& b) { return a.tokens.size() > b.tokens.size(); });
        }
    }

    /// Sorted, de-duplicated symbols mentioned in `content`.
    std::vector<Symbol> extract(std::string_view content) const
    {
        std::vector<std::string> toks;
        text::for_each_raw_token(content, [&](std::string_view raw, std::uint32_t) { toks.push_back(to_lower_ascii(raw)); });
        std::vector<Symbol> out;
        for (std::size_t i = 0; i < toks.size();) {
            const Entry* hit = nullptr;
            if (auto it = by_first_.find(toks[i]); it != by_first_.end()) {
                for (const auto& e : it->second) {
                    if (i + e.tokens.size() <= toks.size() && std::equal(e.tokens.begin(), e.tokens.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
                        hit = &e;
                        break;
                    }
                }
            }
            if (hit) {
                out.push_back(hit->symbol);
                i += hit->tokens.size();
            } else {
                ++i;
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool empty() const { return by_first_.empty(); }

  private:
    struct Entry {
        std::vector<std::string> tokens;
        Symbol symbol;
    };

    void add(const Symbol& sym, std::string_view phrase)
    {
        auto toks = text::tokenize(phrase).terms();
        if (toks.empty()) {
            return;
        }
        auto& bucket = by_first_[toks.front()];
        for (const auto& e : bucket) {
            if (e.tokens == toks) {
                return;  // first stock to claim a phrase keeps it
            }
        }
        bucket.push_back(Entry{std::move(toks), sym});
    }

    std::unordered_map<std::string, std::vector<Entry>> by_first_;
};

}  // namespace esgbench::ingest
