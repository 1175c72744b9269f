#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "esgbench/bench/sampler.hpp"
#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/workload/workload.hpp"

namespace esgbench::bench {

struct BenchConfig {
    int warmups = 3;
    int repetitions = 30;
    int sample_interval_ms = 50;
};

inline void check_config(const BenchConfig& c)
{
    if (c.repetitions < 1) {
        throw Error("repetitions must be at least 1");
    }
    if (c.warmups < 0) {
        throw Error("warmups must not be negative");
    }
    if (c.sample_interval_ms < 1) {
        throw Error("sample_interval_ms must be at least 1");
    }
}

/// Keeps a result alive so the optimizer cannot drop the measured call.
template <typename T>
inline void keep(const T& v)
{
    asm volatile("" : : "g"(&v) : "memory");
}

/// Times `run` once per repetition after `warmups` unmeasured calls. Wall
/// time covers only the call; the sampler window brackets it.
template <typename Fn>
std::vector<BenchSample> time_callable(EngineKind engine, QueryId query, const BenchConfig& cfg, Fn&& run)
{
    check_config(cfg);
    for (int i = 0; i < cfg.warmups; ++i) {
        run();
    }
    std::vector<BenchSample> out;
    out.reserve(static_cast<std::size_t>(cfg.repetitions));
    ResourceSampler sampler(std::chrono::milliseconds(cfg.sample_interval_ms));
    for (int i = 0; i < cfg.repetitions; ++i) {
        sampler.start();
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const auto t1 = std::chrono::steady_clock::now();
        const auto use = sampler.stop();
        BenchSample s;
        s.engine = engine;
        s.query = query;
        s.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        s.cpu_max_pct = use.cpu_max_pct;
        s.cpu_avg_pct = use.cpu_avg_pct;
        s.peak_mem_mb = use.peak_mem_mb;
        out.push_back(s);
    }
    return out;
}

/// One query against one loaded engine. Q2..Q5 consume `q1_hits`, computed
/// by the caller outside the measured region.
template <QueryEngine E>
std::vector<BenchSample> time_query(const E& engine, QueryId q, const QuerySpec& spec, std::span<const SearchHit> q1_hits,
                                    const BenchConfig& cfg)
{
    return time_callable(engine.engine_kind(), q, cfg, [&] {
        auto rs = run_query(engine, q, spec, q1_hits);
        keep(rs);
    });
}

/// Linear-interpolated quantile of an unsorted sample, p in [0, 1].
inline double quantile(std::vector<double> v, double p)
{
    if (v.empty()) {
        throw Error("quantile of an empty sample");
    }
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

/// Summary of one (engine, query) cell.
struct CellStats {
    double median_ms = 0.0;
    double p95_ms = 0.0;
    double cpu_max_pct = 0.0;  // max over samples
    double cpu_avg_pct = 0.0;  // mean over samples
    double peak_mem_mb = 0.0;  // max over samples
    std::size_t samples = 0;

    friend bool operator==(const CellStats&, const CellStats&) = default;
};

inline CellStats summarize(std::span<const BenchSample> samples)
{
    if (samples.empty()) {
        throw Error("no samples to summarize");
    }
    std::vector<double> wall;
    CellStats c;
    double cpu_sum = 0.0;
    for (const auto& s : samples) {
        wall.push_back(s.wall_ms);
        c.cpu_max_pct = std::max(c.cpu_max_pct, s.cpu_max_pct);
        cpu_sum += s.cpu_avg_pct;
        c.peak_mem_mb = std::max(c.peak_mem_mb, s.peak_mem_mb);
    }
    c.median_ms = median(wall);
    c.p95_ms = quantile(std::move(wall), 0.95);
    c.cpu_avg_pct = cpu_sum / static_cast<double>(samples.size());
    c.samples = samples.size();
    return c;
}

using CellKey = std::pair<EngineKind, QueryId>;

struct MatrixRun {
    std::map<CellKey, std::vector<BenchSample>> samples;
    std::map<EngineKind, std::vector<SearchHit>> q1_hits;
};

/// Every query on every engine. Q1 runs once untimed per engine to seed
/// Q2..Q5 with that engine's own hits.
inline MatrixRun run_matrix(const std::map<EngineKind, AnyEngine>& engines, const QuerySpec& spec, const BenchConfig& cfg,
                            std::span<const QueryId> queries = kAllQueries)
{
    check_config(cfg);
    MatrixRun out;
    for (const auto& [kind, engine] : engines) {
        auto hits = run_query(engine, QueryId::Q1, spec, {}).hits;
        for (auto q : queries) {
            out.samples[{kind, q}] = time_query(engine, q, spec, hits, cfg);
        }
        out.q1_hits[kind] = std::move(hits);
    }
    return out;
}

}  // namespace esgbench::bench
