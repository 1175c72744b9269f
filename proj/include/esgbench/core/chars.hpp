#pragma once

#include <string>
#include <string_view>

namespace esgbench {

// Character classes shared by the analyzer and lexicon checks. Bytes >= 0x80
// belong to UTF-8 sequences and are kept inside tokens; only ASCII is folded.

constexpr bool is_token_char(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

constexpr char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

constexpr char ascii_upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

inline std::string to_lower_ascii(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = ascii_lower(c);
    }
    return out;
}

/// True when the analyzer maps `term` to exactly one token equal to itself.
constexpr bool is_analyzer_stable(std::string_view term)
{
    if (term.empty()) {
        return false;
    }
    for (char ch : term) {
        const auto c = static_cast<unsigned char>(ch);
        if (!is_token_char(c) || (c >= 'A' && c <= 'Z')) {
            return false;
        }
    }
    return true;
}

}  // namespace esgbench
