#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "esgbench/core/error.hpp"
#include "esgbench/core/hash.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/ingest/csv.hpp"
#include "esgbench/ingest/mentions.hpp"

namespace esgbench::ingest {

/// A row the loader dropped. `line` is 1-based and counts the header.
struct IngestIssue {
    std::string file;
    std::size_t line = 0;
    std::string reason;

    friend bool operator==(const IngestIssue&, const IngestIssue&) = default;
};

inline constexpr std::string_view kOhlcHeader = "symbol,timestamp,open,high,low,close,volume";
inline constexpr std::string_view kSectorMapHeader = "symbol,name,sector";

namespace detail {

inline std::ifstream open_or_throw(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + p.string() + "'");
    }
    return in;
}

inline std::string_view chomp(std::string_view s)
{
    if (!s.empty() && s.back() == '\r') {
        s.remove_suffix(1);
    }
    return s;
}

inline std::optional<std::int64_t> parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

}  // namespace detail

struct OhlcLoad {
    std::vector<OhlcBar> bars;
    std::vector<IngestIssue> issues;
};

/// Reads one or more OHLC CSV files, in the order given, and concatenates
/// them. The first row seen for a (symbol, timestamp) key wins. Throws
/// IoError for a missing file and ParseError for a wrong header.
inline OhlcLoad load_ohlc_csvs(const std::vector<std::filesystem::path>& paths)
{
    OhlcLoad out;
    std::unordered_set<SymbolTime> seen;
    for (const auto& path : paths) {
        auto in = detail::open_or_throw(path);
        const auto file = path.string();
        std::string line;
        if (!std::getline(in, line) || detail::chomp(line) != kOhlcHeader) {
            throw ParseError("'" + file + "': expected header '" + std::string(kOhlcHeader) + "'");
        }
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (detail::chomp(line).empty()) {
                continue;
            }
            auto issue = [&](std::string reason) { out.issues.push_back({file, lineno, std::move(reason)}); };
            const auto f = split_csv_line(line);
            if (f.size() != 7) {
                issue("expected 7 fields, got " + std::to_string(f.size()));
                continue;
            }
            OhlcBar bar;
            bar.symbol = Symbol(f[0]);
            auto ts = Timestamp::try_parse(f[1]);
            if (!ts) {
                issue("malformed timestamp");
                continue;
            }
            bar.timestamp = *ts;
            static constexpr const char* kPriceNames[] = {"open", "high", "low", "close"};
            Price* slots[] = {&bar.open, &bar.high, &bar.low, &bar.close};
            bool ok = true;
            for (std::size_t i = 0; i < 4 && ok; ++i) {
                auto p = Price::try_parse(f[2 + i]);
                if (!p) {
                    issue(std::string("non-numeric ") + kPriceNames[i]);
                    ok = false;
                } else {
                    *slots[i] = *p;
                }
            }
            if (!ok) {
                continue;
            }
            auto vol = detail::parse_int(f[6]);
            if (!vol) {
                issue("non-numeric volume");
                continue;
            }
            bar.volume = *vol;
            if (!seen.insert(SymbolTime{bar.symbol, bar.timestamp}).second) {
                issue("duplicate (symbol,timestamp)");
                continue;
            }
            out.bars.push_back(std::move(bar));
        }
    }
    return out;
}

struct SectorMapLoad {
    std::vector<Sector> sectors;  // ids in order of first appearance
    std::vector<Stock> stocks;
    std::vector<IngestIssue> issues;
};

inline SectorMapLoad load_sector_map(const std::filesystem::path& path)
{
    auto in = detail::open_or_throw(path);
    const auto file = path.string();
    std::string line;
    if (!std::getline(in, line) || detail::chomp(line) != kSectorMapHeader) {
        throw ParseError("'" + file + "': expected header '" + std::string(kSectorMapHeader) + "'");
    }
    SectorMapLoad out;
    std::unordered_map<std::string, SectorId> ids;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::chomp(line).empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 3) {
            out.issues.push_back({file, lineno, "expected 3 fields, got " + std::to_string(f.size())});
            continue;
        }
        auto [it, fresh] = ids.try_emplace(f[2], SectorId{static_cast<std::uint32_t>(out.sectors.size())});
        if (fresh) {
            out.sectors.push_back(Sector{it->second, f[2]});
        }
        out.stocks.push_back(Stock{Symbol(f[0]), f[1], it->second});
    }
    return out;
}

struct NewsLoad {
    std::vector<NewsDoc> docs;
    std::vector<IngestIssue> issues;
};

/// Accepts "YYYY-MM-DD HH:MM:SS[.ffffff]" or a bare "YYYY-MM-DD" (midnight).
inline std::optional<Timestamp> parse_news_date(std::string_view s)
{
    if (s.size() == 10) {
        return Timestamp::try_parse(std::string(s) + " 00:00:00");
    }
    return Timestamp::try_parse(s);
}

/// Reads newline-delimited JSON records {media, date, content}. The doc id
/// is the 0-based line index, so ids stay stable when bad lines are dropped.
inline NewsLoad load_news(const std::filesystem::path& path, const MentionMatcher& matcher)
{
    auto in = detail::open_or_throw(path);
    const auto file = path.string();
    NewsLoad out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::chomp(line).empty()) {
            continue;
        }
        auto issue = [&](std::string reason) { out.issues.push_back({file, lineno, std::move(reason)}); };
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            issue("malformed record");
            continue;
        }
        std::string fields[3];
        bool ok = true;
        static constexpr const char* kFields[] = {"media", "date", "content"};
        for (std::size_t i = 0; i < 3 && ok; ++i) {
            auto it = rec.find(kFields[i]);
            if (it == rec.end()) {
                issue(std::string("missing field '") + kFields[i] + "'");
                ok = false;
            } else if (!it->is_string()) {
                issue(std::string("field '") + kFields[i] + "' is not a string");
                ok = false;
            } else {
                fields[i] = it->get<std::string>();
            }
        }
        if (!ok) {
            continue;
        }
        auto ts = parse_news_date(fields[1]);
        if (!ts) {
            issue("malformed date");
            continue;
        }
        NewsDoc doc;
        doc.id = DocId{lineno - 1};
        doc.media = std::move(fields[0]);
        doc.timestamp = *ts;
        doc.content = std::move(fields[2]);
        doc.mentions = matcher.extract(doc.content);
        out.docs.push_back(std::move(doc));
    }
    return out;
}

}  // namespace esgbench::ingest
