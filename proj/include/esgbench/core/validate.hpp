#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "esgbench/core/model.hpp"

namespace esgbench {

enum class RecordKind { Sector, Stock, News, Bar };

inline std::string_view to_string(RecordKind k)
{
    switch (k) {
        case RecordKind::Sector: return "sector";
        case RecordKind::Stock: return "stock";
        case RecordKind::News: return "news";
        case RecordKind::Bar: return "bar";
    }
    return "?";
}

struct Rejection {
    RecordKind kind;
    std::size_t index;  // position in the input collection
    std::string reason;
};

struct ValidationReport {
    std::size_t sectors_accepted = 0;
    std::size_t stocks_accepted = 0;
    std::size_t news_accepted = 0;
    std::size_t bars_accepted = 0;
    std::vector<Rejection> rejections;

    bool clean() const { return rejections.empty(); }
};

struct ValidationResult;

/// A dataset whose every record satisfies the model invariants. Engines only
/// accept this type, so a rejected record can never reach them.
class ValidatedDataset {
  public:
    const Dataset& data() const { return data_; }
    const std::vector<Sector>& sectors() const { return data_.sectors; }
    const std::vector<Stock>& stocks() const { return data_.stocks; }
    const std::vector<NewsDoc>& news() const { return data_.news; }
    const std::vector<OhlcBar>& bars() const { return data_.bars; }

  private:
    explicit ValidatedDataset(Dataset d) : data_(std::move(d)) {}
    friend ValidationResult validate_dataset(Dataset);

    Dataset data_;
};

struct ValidationResult {
    ValidatedDataset data;
    ValidationReport report;
};

namespace detail {

/// Reason the bar breaks an OHLC invariant, or empty when it is sound.
inline std::string bar_defect(const OhlcBar& b)
{
    if (b.open.ticks <= 0 || b.high.ticks <= 0 || b.low.ticks <= 0 || b.close.ticks <= 0) {
        return "non-positive price";
    }
    if (b.low > b.high) {
        return "low exceeds high";
    }
    if (b.low > std::min(b.open, b.close)) {
        return "low exceeds open/close";
    }
    if (b.high < std::max(b.open, b.close)) {
        return "high below open/close";
    }
    if (b.volume < 0) {
        return "negative volume";
    }
    return {};
}

}  // namespace detail

/// Splits `input` into accepted records and per-record rejections. Only an
/// empty stock universe is a hard error; everything else is reported.
inline ValidationResult validate_dataset(Dataset input)
{
    if (input.stocks.empty()) {
        throw Error("empty universe");
    }
    ValidationReport report;
    Dataset out;
    auto reject = [&](RecordKind k, std::size_t i, std::string why) { report.rejections.push_back({k, i, std::move(why)}); };

    std::unordered_set<SectorId> sector_ids;
    std::unordered_set<std::string> sector_names;
    for (std::size_t i = 0; i < input.sectors.size(); ++i) {
        auto& s = input.sectors[i];
        if (s.name.empty()) {
            reject(RecordKind::Sector, i, "empty sector name");
        } else if (sector_ids.contains(s.id)) {
            reject(RecordKind::Sector, i, "duplicate sector id");
        } else if (sector_names.contains(s.name)) {
            reject(RecordKind::Sector, i, "duplicate sector name");
        } else {
            sector_ids.insert(s.id);
            sector_names.insert(s.name);
            out.sectors.push_back(std::move(s));
        }
    }

    std::unordered_set<Symbol> symbols;
    for (std::size_t i = 0; i < input.stocks.size(); ++i) {
        auto& s = input.stocks[i];
        if (!Symbol::well_formed(s.symbol.value)) {
            reject(RecordKind::Stock, i, "malformed symbol");
        } else if (symbols.contains(s.symbol)) {
            reject(RecordKind::Stock, i, "duplicate symbol");
        } else if (!sector_ids.contains(s.sector)) {
            reject(RecordKind::Stock, i, "unknown sector");
        } else {
            symbols.insert(s.symbol);
            out.stocks.push_back(std::move(s));
        }
    }
    if (out.stocks.empty()) {
        throw Error("empty universe");
    }

    std::unordered_set<DocId> doc_ids;
    for (std::size_t i = 0; i < input.news.size(); ++i) {
        auto& n = input.news[i];
        std::sort(n.mentions.begin(), n.mentions.end());
        n.mentions.erase(std::unique(n.mentions.begin(), n.mentions.end()), n.mentions.end());
        if (doc_ids.contains(n.id)) {
            reject(RecordKind::News, i, "duplicate doc id");
        } else if (std::any_of(n.mentions.begin(), n.mentions.end(), [&](const Symbol& m) { return !symbols.contains(m); })) {
            reject(RecordKind::News, i, "unknown symbol");
        } else {
            doc_ids.insert(n.id);
            out.news.push_back(std::move(n));
        }
    }

    std::unordered_map<Symbol, std::unordered_set<std::int64_t>> bar_keys;
    for (std::size_t i = 0; i < input.bars.size(); ++i) {
        auto& b = input.bars[i];
        if (!symbols.contains(b.symbol)) {
            reject(RecordKind::Bar, i, "unknown symbol");
            continue;
        }
        if (auto why = detail::bar_defect(b); !why.empty()) {
            reject(RecordKind::Bar, i, std::move(why));
            continue;
        }
        if (!bar_keys[b.symbol].insert(b.timestamp.micros).second) {
            reject(RecordKind::Bar, i, "duplicate (symbol,timestamp)");
            continue;
        }
        out.bars.push_back(std::move(b));
    }

    report.sectors_accepted = out.sectors.size();
    report.stocks_accepted = out.stocks.size();
    report.news_accepted = out.news.size();
    report.bars_accepted = out.bars.size();
    return ValidationResult{ValidatedDataset{std::move(out)}, std::move(report)};
}

}  // namespace esgbench
