#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "esgbench/core/chars.hpp"

namespace esgbench::text {

struct Token {
    std::string text;
    std::uint32_t position = 0;  // ordinal within the stream
    std::uint32_t offset = 0;    // byte offset of the first character in the source

    friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
    std::vector<Token> tokens;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }

    std::vector<std::string> terms() const
    {
        std::vector<std::string> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) {
            out.push_back(t.text);
        }
        return out;
    }
};

/// Calls `fn(std::string_view raw, offset)` for every maximal run of token
/// characters. `raw` still has its original case.
template <typename Fn>
void for_each_raw_token(std::string_view text, Fn&& fn)
{
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && !is_token_char(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < n && is_token_char(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i > start) {
            fn(text.substr(start, i - start), static_cast<std::uint32_t>(start));
        }
    }
}

/// Standard-tokenizer-plus-lowercase analyzer: splits on every character that
/// is not an ASCII letter or digit (UTF-8 bytes stay inside tokens), drops
/// empty pieces and folds ASCII to lowercase. No stemming, no stop words.
inline TokenStream tokenize(std::string_view text)
{
    TokenStream out;
    std::uint32_t pos = 0;
    for_each_raw_token(text, [&](std::string_view raw, std::uint32_t offset) {
        out.tokens.push_back(Token{to_lower_ascii(raw), pos++, offset});
    });
    return out;
}

}  // namespace esgbench::text
