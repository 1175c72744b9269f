#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/ingest/csv.hpp"
#include "esgbench/ingest/loaders.hpp"
#include "esgbench/ingest/mentions.hpp"

// Dataset directory layout:
//   stocks.csv          symbol,name,sector
//   news.jsonl          {"content":..,"date":..,"media":..} per line
//   ohlc/<SYMBOL>.csv   symbol,timestamp,open,high,low,close,volume

namespace esgbench::ingest {

namespace detail {

inline std::ofstream create_or_throw(const std::filesystem::path& p)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + p.string() + "'");
    }
    return out;
}

}  // namespace detail

inline void write_dataset(const std::filesystem::path& dir, const Dataset& ds)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir / "ohlc");

    std::map<std::uint32_t, std::string> sector_name;
    for (const auto& s : ds.sectors) {
        sector_name[s.id.value] = s.name;
    }
    {
        auto out = detail::create_or_throw(dir / "stocks.csv");
        out << kSectorMapHeader << '\n';
        for (const auto& s : ds.stocks) {
            auto it = sector_name.find(s.sector.value);
            if (it == sector_name.end()) {
                throw Error("stock " + s.symbol.value + " has no sector");
            }
            out << csv_field(s.symbol.value) << ',' << csv_field(s.name) << ',' << csv_field(it->second) << '\n';
        }
    }
    {
        auto out = detail::create_or_throw(dir / "news.jsonl");
        for (const auto& d : ds.news) {
            nlohmann::json rec{{"media", d.media}, {"date", d.timestamp.to_string()}, {"content", d.content}};
            out << rec.dump() << '\n';
        }
    }
    std::map<std::string, std::vector<const OhlcBar*>> per_symbol;
    for (const auto& b : ds.bars) {
        per_symbol[b.symbol.value].push_back(&b);
    }
    for (const auto& [sym, bars] : per_symbol) {
        auto out = detail::create_or_throw(dir / "ohlc" / (sym + ".csv"));
        out << kOhlcHeader << '\n';
        for (const auto* b : bars) {
            out << csv_field(b->symbol.value) << ',' << b->timestamp.to_string() << ',' << b->open.to_string() << ','
                << b->high.to_string() << ',' << b->low.to_string() << ',' << b->close.to_string() << ',' << b->volume << '\n';
        }
    }
}

struct DatasetLoad {
    Dataset data;
    std::vector<IngestIssue> issues;
};

/// Loads a directory written by write_dataset (or laid out the same way).
/// OHLC files are read in file-name order. News ids are line indices, so a
/// directory written from an id-dense dataset round-trips exactly.
inline DatasetLoad load_dataset(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw IoError("not a dataset directory: '" + dir.string() + "'");
    }
    DatasetLoad out;
    auto map = load_sector_map(dir / "stocks.csv");
    out.data.sectors = std::move(map.sectors);
    out.data.stocks = std::move(map.stocks);
    out.issues = std::move(map.issues);

    const MentionMatcher matcher(out.data.stocks);
    auto news = load_news(dir / "news.jsonl", matcher);
    out.data.news = std::move(news.docs);
    out.issues.insert(out.issues.end(), news.issues.begin(), news.issues.end());

    std::vector<fs::path> files;
    if (fs::is_directory(dir / "ohlc")) {
        for (const auto& e : fs::directory_iterator(dir / "ohlc")) {
            if (e.is_regular_file() && e.path().extension() == ".csv") {
                files.push_back(e.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    auto bars = load_ohlc_csvs(files);
    out.data.bars = std::move(bars.bars);
    out.issues.insert(out.issues.end(), bars.issues.begin(), bars.issues.end());
    return out;
}

}  // namespace esgbench::ingest
