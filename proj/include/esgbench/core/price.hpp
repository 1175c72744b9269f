#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "esgbench/core/error.hpp"

namespace esgbench {

/// Fixed-point price with four fractional digits. Stored as an integer count
/// of ten-thousandths so every engine compares prices exactly.
struct Price {
    std::int64_t ticks = 0;

    static constexpr std::int64_t kScale = 10'000;

    friend constexpr auto operator<=>(Price, Price) = default;

    static constexpr Price from_ticks(std::int64_t t) { return Price{t}; }

    double to_double() const { return static_cast<double>(ticks) / kScale; }

    /// Parses plain decimals such as "1234", "12.5" or "-0.0001". More than
    /// four fractional digits, exponents and stray characters are rejected.
    static std::optional<Price> try_parse(std::string_view s)
    {
        if (s.empty()) {
            return std::nullopt;
        }
        bool negative = false;
        if (s.front() == '-' || s.front() == '+') {
            negative = s.front() == '-';
            s.remove_prefix(1);
        }
        const auto dot = s.find('.');
        const auto whole = s.substr(0, dot);
        auto frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
        if (whole.empty() && frac.empty()) {
            return std::nullopt;
        }
        if (frac.size() > 4 || (dot != std::string_view::npos && frac.empty() && whole.empty())) {
            return std::nullopt;
        }
        auto digits_only = [](std::string_view v) {
            for (char c : v) {
                if (c < '0' || c > '9') {
                    return false;
                }
            }
            return true;
        };
        if (!digits_only(whole) || !digits_only(frac) || whole.size() > 14) {
            return std::nullopt;
        }
        std::int64_t w = 0;
        if (!whole.empty() && std::from_chars(whole.data(), whole.data() + whole.size(), w).ec != std::errc{}) {
            return std::nullopt;
        }
        std::int64_t f = 0;
        if (!frac.empty() && std::from_chars(frac.data(), frac.data() + frac.size(), f).ec != std::errc{}) {
            return std::nullopt;
        }
        for (auto i = frac.size(); i < 4; ++i) {
            f *= 10;
        }
        const std::int64_t t = w * kScale + f;
        return Price{negative ? -t : t};
    }

    static Price parse(std::string_view s)
    {
        if (auto p = try_parse(s)) {
            return *p;
        }
        throw ParseError("malformed price '" + std::string(s) + "'");
    }

    std::string to_string() const
    {
        const auto mag = ticks < 0 ? -ticks : ticks;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%lld.%04lld", ticks < 0 ? "-" : "", static_cast<long long>(mag / kScale),
                      static_cast<long long>(mag % kScale));
        return buf;
    }
};

}  // namespace esgbench
