#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "esgbench/core/error.hpp"

namespace esgbench {

/// Calendar day, counted from 1970-01-01. Timestamps carry no zone, so a day
/// is simply the date component of the exchange-local timestamp.
struct Date {
    std::int32_t days = 0;

    friend constexpr auto operator<=>(Date, Date) = default;

    constexpr Date plus(std::int32_t delta) const { return Date{days + delta}; }

    static Date from_civil(int year, unsigned month, unsigned day)
    {
        using namespace std::chrono;
        const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
        if (!ymd.ok()) {
            throw ParseError("invalid calendar date");
        }
        return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
    }

    std::chrono::year_month_day civil() const
    {
        return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days}}};
    }

    /// 0 = Monday ... 6 = Sunday.
    unsigned iso_weekday_index() const
    {
        const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{days}}};
        return wd.iso_encoding() - 1;
    }

    std::string to_string() const
    {
        const auto ymd = civil();
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }
};

/// Microseconds since 1970-01-01 00:00:00, timezone-naive.
struct Timestamp {
    std::int64_t micros = 0;

    static constexpr std::int64_t kMicrosPerSecond = 1'000'000;
    static constexpr std::int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

    static constexpr Timestamp at(Date d, std::int64_t micros_into_day = 0)
    {
        return Timestamp{static_cast<std::int64_t>(d.days) * kMicrosPerDay + micros_into_day};
    }

    constexpr Date date() const
    {
        auto q = micros / kMicrosPerDay;
        if (micros % kMicrosPerDay < 0) {
            --q;
        }
        return Date{static_cast<std::int32_t>(q)};
    }

    constexpr std::int64_t micros_into_day() const { return micros - static_cast<std::int64_t>(date().days) * kMicrosPerDay; }

    /// Accepts `YYYY-MM-DD HH:MM:SS` with an optional `.f` .. `.ffffff` fraction.
    static std::optional<Timestamp> try_parse(std::string_view s)
    {
        auto num = [&](std::size_t pos, std::size_t len, int& out) {
            if (pos + len > s.size()) {
                return false;
            }
            const char* first = s.data() + pos;
            const char* last = first + len;
            for (const char* p = first; p != last; ++p) {
                if (*p < '0' || *p > '9') {
                    return false;
                }
            }
            return std::from_chars(first, last, out).ec == std::errc{};
        };
        if (s.size() < 19 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' || s[16] != ':') {
            return std::nullopt;
        }
        int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
        if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) || !num(17, 2, se)) {
            return std::nullopt;
        }
        if (h > 23 || mi > 59 || se > 59) {
            return std::nullopt;
        }
        std::int64_t frac = 0;
        if (s.size() > 19) {
            if (s[19] != '.' || s.size() == 20 || s.size() > 26) {
                return std::nullopt;
            }
            int digits = static_cast<int>(s.size()) - 20;
            int raw = 0;
            if (!num(20, static_cast<std::size_t>(digits), raw)) {
                return std::nullopt;
            }
            frac = raw;
            for (int i = digits; i < 6; ++i) {
                frac *= 10;
            }
        }
        const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                              std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) {
            return std::nullopt;
        }
        const Date date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
        return Timestamp::at(date, (static_cast<std::int64_t>(h) * 3600 + mi * 60 + se) * kMicrosPerSecond + frac);
    }

    static Timestamp parse(std::string_view s)
    {
        if (auto t = try_parse(s)) {
            return *t;
        }
        throw ParseError("malformed timestamp '" + std::string(s) + "'");
    }

    /// Inverse of parse(). The fraction is printed with all six digits, and
    /// omitted entirely when it is zero.
    std::string to_string() const
    {
        const auto in_day = micros_into_day();
        const auto secs = in_day / kMicrosPerSecond;
        const auto frac = in_day % kMicrosPerSecond;
        char buf[40];
        int n = std::snprintf(buf, sizeof buf, "%s %02lld:%02lld:%02lld", date().to_string().c_str(),
                              static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                              static_cast<long long>(secs % 60));
        if (frac != 0) {
            std::snprintf(buf + n, sizeof buf - static_cast<std::size_t>(n), ".%06lld", static_cast<long long>(frac));
        }
        return buf;
    }
};

}  // namespace esgbench

template <>
struct std::hash<esgbench::Date> {
    std::size_t operator()(esgbench::Date d) const noexcept { return std::hash<std::int32_t>{}(d.days); }
};
