#pragma once

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/utsname.h>
#include <unistd.h>

#include "esgbench/bench/harness.hpp"
#include "esgbench/bench/sampler.hpp"
#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/ingest/csv.hpp"

namespace esgbench::bench {

using HostInfo = std::vector<std::pair<std::string, std::string>>;

struct BenchReport {
    HostInfo host;
    std::map<EngineKind, double> load_ms;
    std::map<CellKey, CellStats> cells;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

inline constexpr std::string_view kReportCsvHeader = "engine,query,metric,value";

inline const char* const kCellMetrics[] = {"median_ms", "p95_ms", "cpu_max_pct", "cpu_avg_pct", "peak_mem_mb", "samples"};

inline HostInfo host_metadata()
{
    HostInfo h;
    char name[256] = {};
    if (gethostname(name, sizeof name - 1) == 0) {
        h.emplace_back("hostname", name);
    }
    utsname u{};
    if (uname(&u) == 0) {
        h.emplace_back("os", std::string(u.sysname) + " " + u.release + " " + u.machine);
    }
    if (std::ifstream cpu("/proc/cpuinfo"); cpu) {
        std::string line;
        while (std::getline(cpu, line)) {
            if (line.rfind("model name", 0) == 0) {
                auto pos = line.find(':');
                h.emplace_back("cpu", pos == std::string::npos ? line : line.substr(line.find_first_not_of(' ', pos + 1)));
                break;
            }
        }
    }
    h.emplace_back("cores", std::to_string(core_count()));
    if (std::ifstream mem("/proc/meminfo"); mem) {
        std::string key;
        long kb = 0;
        if (mem >> key >> kb && key == "MemTotal:") {
            h.emplace_back("memory_mb", std::to_string(kb / 1024));
        }
    }
#if defined(__VERSION__)
    h.emplace_back("compiler", __VERSION__);
#endif
#ifdef NDEBUG
    h.emplace_back("build", "release");
#else
    h.emplace_back("build", "debug");
#endif
    const std::time_t now = std::time(nullptr);
    char ts[32];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    h.emplace_back("generated_at", ts);
    return h;
}

/// Fails when any requested (engine, query) cell is absent.
inline void check_complete(const BenchReport& r, std::span<const EngineKind> engines, std::span<const QueryId> queries)
{
    for (auto e : engines) {
        for (auto q : queries) {
            if (!r.cells.contains({e, q})) {
                throw Error("report is missing cell " + std::string(to_string(e)) + "/" + std::string(to_string(q)));
            }
        }
    }
}

inline BenchReport make_report(const MatrixRun& run, std::map<EngineKind, double> load_ms, HostInfo host)
{
    BenchReport r;
    r.host = std::move(host);
    r.load_ms = std::move(load_ms);
    for (const auto& [key, samples] : run.samples) {
        r.cells[key] = summarize(samples);
    }
    return r;
}

namespace detail {

inline std::string fmt_exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline double parse_double(const std::string& s, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ParseError("report csv line " + std::to_string(line) + ": bad value '" + s + "'");
}

inline double cell_metric(const CellStats& c, std::string_view m)
{
    if (m == "median_ms") return c.median_ms;
    if (m == "p95_ms") return c.p95_ms;
    if (m == "cpu_max_pct") return c.cpu_max_pct;
    if (m == "cpu_avg_pct") return c.cpu_avg_pct;
    if (m == "peak_mem_mb") return c.peak_mem_mb;
    if (m == "samples") return static_cast<double>(c.samples);
    throw Error("unknown metric '" + std::string(m) + "'");
}

inline bool set_cell_metric(CellStats& c, std::string_view m, double v)
{
    if (m == "median_ms") c.median_ms = v;
    else if (m == "p95_ms") c.p95_ms = v;
    else if (m == "cpu_max_pct") c.cpu_max_pct = v;
    else if (m == "cpu_avg_pct") c.cpu_avg_pct = v;
    else if (m == "peak_mem_mb") c.peak_mem_mb = v;
    else if (m == "samples") c.samples = static_cast<std::size_t>(v);
    else return false;
    return true;
}

}  // namespace detail

/// Rows: host metadata as `host,-,<key>,<value>`, load phase as
/// `<engine>,load,load_ms,<ms>`, then six metrics per (engine, query) cell.
inline std::string to_csv(const BenchReport& r)
{
    using ingest::csv_field;
    std::ostringstream o;
    o << kReportCsvHeader << '\n';
    for (const auto& [k, v] : r.host) {
        o << "host,-," << csv_field(k) << ',' << csv_field(v) << '\n';
    }
    for (const auto& [e, ms] : r.load_ms) {
        o << to_string(e) << ",load,load_ms," << detail::fmt_exact(ms) << '\n';
    }
    for (const auto& [key, c] : r.cells) {
        for (const char* m : kCellMetrics) {
            o << to_string(key.first) << ',' << to_string(key.second) << ',' << m << ',' << detail::fmt_exact(detail::cell_metric(c, m)) << '\n';
        }
    }
    return o.str();
}

inline BenchReport parse_report_csv(std::string_view text)
{
    BenchReport r;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || ingest::split_csv_line(line) != std::vector<std::string>{"engine", "query", "metric", "value"}) {
        throw ParseError("report csv: expected header '" + std::string(kReportCsvHeader) + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = ingest::split_csv_line(line);
        if (f.size() != 4) {
            throw ParseError("report csv line " + std::to_string(lineno) + ": expected 4 fields");
        }
        if (f[0] == "host") {
            r.host.emplace_back(f[2], f[3]);
            continue;
        }
        EngineKind e;
        try {
            e = parse_engine_kind(f[0]);
        } catch (const Error&) {
            throw ParseError("report csv line " + std::to_string(lineno) + ": unknown engine '" + f[0] + "'");
        }
        const double v = detail::parse_double(f[3], lineno);
        if (f[1] == "load") {
            r.load_ms[e] = v;
            continue;
        }
        QueryId q;
        try {
            q = parse_query_id(f[1]);
        } catch (const Error&) {
            throw ParseError("report csv line " + std::to_string(lineno) + ": unknown query '" + f[1] + "'");
        }
        if (!detail::set_cell_metric(r.cells[{e, q}], f[2], v)) {
            throw ParseError("report csv line " + std::to_string(lineno) + ": unknown metric '" + f[2] + "'");
        }
    }
    return r;
}

/// Human-readable report. `echo` adds, per engine, the first few Q1 hits.
inline std::string to_markdown(const BenchReport& r, const std::map<EngineKind, std::vector<SearchHit>>& echo = {},
                               std::size_t echo_rows = 10)
{
    std::ostringstream o;
    o << "# Benchmark report\n\n## Host\n\n| Key | Value |\n|---|---|\n";
    for (const auto& [k, v] : r.host) {
        o << "| " << k << " | " << v << " |\n";
    }
    if (!r.load_ms.empty()) {
        o << "\n## Load phase\n\n| Engine | Load ms |\n|---|---:|\n";
        for (const auto& [e, ms] : r.load_ms) {
            o << "| " << to_string(e) << " | " << detail::fmt_fixed(ms, 2) << " |\n";
        }
    }
    o << "\n## Query response\n\n| Engine | Query | Median ms | p95 ms | CPU max % | CPU avg % | Peak MB | Samples |\n"
         "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& [key, c] : r.cells) {
        o << "| " << to_string(key.first) << " | " << to_string(key.second) << " | " << detail::fmt_fixed(c.median_ms, 3) << " | "
          << detail::fmt_fixed(c.p95_ms, 3) << " | " << detail::fmt_fixed(c.cpu_max_pct, 1) << " | " << detail::fmt_fixed(c.cpu_avg_pct, 1)
          << " | " << detail::fmt_fixed(c.peak_mem_mb, 1) << " | " << c.samples << " |\n";
    }
    for (const auto& [e, hits] : echo) {
        o << "\n## Q1 results: " << to_string(e) << " (" << hits.size() << " rows)\n\n| Stock | Date | Media | Score |\n|---|---|---|---:|\n";
        for (std::size_t i = 0; i < hits.size() && i < echo_rows; ++i) {
            const auto& h = hits[i];
            o << "| " << h.symbol.value << " | " << h.timestamp.to_string() << " | " << h.media << " | " << detail::fmt_fixed(h.score, 6) << " |\n";
        }
    }
    return o.str();
}

/// Tab-separated series for one metric: a row per query, a column per engine.
inline std::string to_tsv(const BenchReport& r, std::string_view metric)
{
    std::vector<EngineKind> engines;
    std::vector<QueryId> queries;
    for (const auto& [key, c] : r.cells) {
        if (std::find(engines.begin(), engines.end(), key.first) == engines.end()) {
            engines.push_back(key.first);
        }
        if (std::find(queries.begin(), queries.end(), key.second) == queries.end()) {
            queries.push_back(key.second);
        }
    }
    std::sort(queries.begin(), queries.end());
    std::ostringstream o;
    o << "query";
    for (auto e : engines) {
        o << '\t' << to_string(e);
    }
    o << '\n';
    for (auto q : queries) {
        o << to_string(q);
        for (auto e : engines) {
            auto it = r.cells.find({e, q});
            o << '\t' << (it == r.cells.end() ? std::string("NA") : detail::fmt_exact(detail::cell_metric(it->second, metric)));
        }
        o << '\n';
    }
    return o.str();
}

struct ReportFiles {
    std::filesystem::path csv;
    std::filesystem::path markdown;
    std::vector<std::filesystem::path> series;
};

/// Writes report.csv, report.md and series/<metric>.tsv under `dir`.
inline ReportFiles emit_report(const BenchReport& r, const std::filesystem::path& dir,
                               const std::map<EngineKind, std::vector<SearchHit>>& echo = {})
{
    namespace fs = std::filesystem;
    if (r.cells.empty()) {
        throw Error("refusing to write an empty report");
    }
    std::error_code ec;
    fs::create_directories(dir / "series", ec);
    if (ec) {
        throw IoError("cannot create report directory '" + dir.string() + "': " + ec.message());
    }
    auto write = [](const fs::path& p, const std::string& body) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out || !(out << body) || !out.flush()) {
            throw IoError("cannot write '" + p.string() + "'");
        }
    };
    ReportFiles files{dir / "report.csv", dir / "report.md", {}};
    write(files.csv, to_csv(r));
    write(files.markdown, to_markdown(r, echo));
    for (const char* m : kCellMetrics) {
        if (std::string_view(m) == "samples") {
            continue;
        }
        auto p = dir / "series" / (std::string(m) + ".tsv");
        write(p, to_tsv(r, m));
        files.series.push_back(std::move(p));
    }
    return files;
}

}  // namespace esgbench::bench
