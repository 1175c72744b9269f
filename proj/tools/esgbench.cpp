// esgbench: generate, load, cross-check and benchmark the three engines.
//
// Exit codes: 0 ok, 1 engines diverge, 2 usage error, 3 runtime failure
// (unreadable input, invalid dataset, ...).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esgbench/esgbench.hpp"

namespace fs = std::filesystem;
using namespace esgbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiverge = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

struct DataOptions {
    std::string data_dir;
    ingest::GeneratorConfig gen;
    std::string spec_path;
    std::optional<std::size_t> k;
    std::optional<std::int32_t> horizon;
    std::size_t shards = 1;
    std::string engines = "relational,document,graph";
};

void add_generator_flags(CLI::App* cmd, ingest::GeneratorConfig& g)
{
    cmd->add_option("--seed", g.seed, "Generator seed")->capture_default_str();
    cmd->add_option("--stocks", g.n_stocks, "Number of stocks")->capture_default_str();
    cmd->add_option("--sectors", g.n_sectors, "Number of sectors")->capture_default_str();
    cmd->add_option("--news", g.n_news, "Number of news articles")->capture_default_str();
    cmd->add_option("--days", g.days, "Calendar days covered")->capture_default_str();
    cmd->add_option("--bars-per-day", g.bars_per_day, "OHLC bars per trading session")->capture_default_str();
    cmd->add_option("--esg-fraction", g.esg_fraction, "Share of articles carrying an ESG term")->capture_default_str();
}

void add_data_flags(CLI::App* cmd, DataOptions& o, bool with_engines)
{
    cmd->add_option("--data", o.data_dir, "Dataset directory (default: generate in memory)");
    add_generator_flags(cmd, o.gen);
    cmd->add_option("--spec", o.spec_path, "Query spec file (key = value lines)");
    cmd->add_option("-k,--k", o.k, "Articles kept by Q1 (0 = all)");
    cmd->add_option("--horizon", o.horizon, "Q4 horizon in days");
    cmd->add_option("--shards", o.shards, "Document engine shard count")->capture_default_str()->check(CLI::PositiveNumber);
    if (with_engines) {
        cmd->add_option("--engines", o.engines, "Comma-separated engines")->capture_default_str();
    }
}

std::vector<EngineKind> parse_engines(const std::string& list)
{
    std::vector<EngineKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto e = parse_engine_kind(item);
        if (std::find(out.begin(), out.end(), e) == out.end()) {
            out.push_back(e);
        }
    }
    if (out.empty()) {
        throw Error("no engines selected");
    }
    return out;
}

QuerySpec make_spec(const DataOptions& o)
{
    QuerySpec spec = o.spec_path.empty() ? QuerySpec{} : load_query_spec(o.spec_path);
    if (o.k) {
        spec.k = *o.k;
    }
    if (o.horizon) {
        spec.horizon_days = *o.horizon;
    }
    return spec;
}

ValidationResult obtain_dataset(const DataOptions& o)
{
    Dataset raw;
    if (!o.data_dir.empty()) {
        auto loaded = ingest::load_dataset(o.data_dir);
        for (const auto& i : loaded.issues) {
            std::cerr << "ingest: " << i.file << ":" << i.line << ": " << i.reason << "\n";
        }
        raw = std::move(loaded.data);
    } else {
        raw = ingest::generate(o.gen);
    }
    auto v = validate_dataset(std::move(raw));
    for (const auto& r : v.report.rejections) {
        std::cerr << "rejected " << to_string(r.kind) << " #" << r.index << ": " << r.reason << "\n";
    }
    return v;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::map<EngineKind, AnyEngine> load_engines(const ValidatedDataset& data, const std::vector<EngineKind>& kinds, std::size_t shards,
                                             std::map<EngineKind, double>* load_ms = nullptr)
{
    std::map<EngineKind, AnyEngine> out;
    for (auto k : kinds) {
        const auto t0 = std::chrono::steady_clock::now();
        out.emplace(k, load_engine(k, data, shards));
        if (load_ms) {
            (*load_ms)[k] = elapsed_ms(t0);
        }
    }
    return out;
}

/// Runs the workload on every engine and compares each pair. Returns true
/// when all agree.
bool verify_engines(const std::map<EngineKind, AnyEngine>& engines, const QuerySpec& spec, std::ostream& out)
{
    std::map<EngineKind, WorkloadResults> results;
    for (const auto& [k, e] : engines) {
        results[k] = run_workload(e, spec);
        out << to_string(k) << ":";
        for (auto q : kAllQueries) {
            out << " " << to_string(q) << "=" << results[k][q].size();
        }
        out << "\n";
    }
    bool ok = true;
    for (auto a = results.begin(); a != results.end(); ++a) {
        for (auto b = std::next(a); b != results.end(); ++b) {
            const auto rep = assert_equivalent(a->second, a->first, b->second, b->first);
            out << to_string(a->first) << " vs " << to_string(b->first) << " (Q1 " << (rep.q1_ordered ? "ordered" : "as set")
                << "): " << (rep.equivalent() ? "equivalent\n" : "DIVERGENT\n");
            if (!rep.equivalent()) {
                out << rep.summary();
                ok = false;
            }
        }
    }
    return ok;
}

int cmd_gen(const fs::path& out, const ingest::GeneratorConfig& g)
{
    const auto ds = ingest::generate(g);
    ingest::write_dataset(out, ds);
    std::cout << "wrote " << out.string() << ": " << ds.stocks.size() << " stocks, " << ds.sectors.size() << " sectors, " << ds.news.size()
              << " news, " << ds.bars.size() << " bars\n";
    return kExitOk;
}

int cmd_ingest(const std::string& dir, const std::string& index_out)
{
    auto loaded = ingest::load_dataset(dir);
    for (const auto& i : loaded.issues) {
        std::cout << "ingest issue " << i.file << ":" << i.line << ": " << i.reason << "\n";
    }
    auto v = validate_dataset(std::move(loaded.data));
    for (const auto& r : v.report.rejections) {
        std::cout << "rejected " << to_string(r.kind) << " #" << r.index << ": " << r.reason << "\n";
    }
    const auto& rep = v.report;
    std::cout << "accepted: " << rep.sectors_accepted << " sectors, " << rep.stocks_accepted << " stocks, " << rep.news_accepted << " news, "
              << rep.bars_accepted << " bars; " << loaded.issues.size() << " ingest issues, " << rep.rejections.size() << " rejections\n";
    if (!index_out.empty()) {
        std::vector<std::pair<DocId, std::string_view>> docs;
        for (const auto& d : v.data.news()) {
            docs.emplace_back(d.id, d.content);
        }
        const auto index = text::build_index(std::move(docs));
        text::save_index(index, index_out);
        std::cout << "index: " << index.doc_count() << " docs, " << index.term_count() << " terms -> " << index_out << "\n";
    }
    return kExitOk;
}

int cmd_verify(const DataOptions& o)
{
    auto v = obtain_dataset(o);
    const auto engines = load_engines(v.data, parse_engines(o.engines), o.shards);
    return verify_engines(engines, make_spec(o), std::cout) ? kExitOk : kExitDiverge;
}

int cmd_bench(const DataOptions& o, const bench::BenchConfig& cfg, const fs::path& out, bool force)
{
    bench::check_config(cfg);
    auto v = obtain_dataset(o);
    const auto kinds = parse_engines(o.engines);
    const auto spec = make_spec(o);
    std::map<EngineKind, double> load_ms;
    const auto engines = load_engines(v.data, kinds, o.shards, &load_ms);
    std::ostringstream verify_log;
    if (!verify_engines(engines, spec, verify_log)) {
        std::cerr << verify_log.str();
        if (!force) {
            std::cerr << "bench: engines disagree; refusing to benchmark (use --force to override)\n";
            return kExitDiverge;
        }
        std::cerr << "bench: engines disagree; continuing because of --force\n";
    }
    const auto run = bench::run_matrix(engines, spec, cfg);
    auto report = bench::make_report(run, load_ms, bench::host_metadata());
    bench::check_complete(report, kinds, kAllQueries);
    const auto files = bench::emit_report(report, out, run.q1_hits);
    std::size_t n = 0;
    for (const auto& [key, s] : run.samples) {
        n += s.size();
    }
    std::cout << bench::to_markdown(report) << "\n" << n << " samples; report written to " << files.csv.parent_path().string() << "\n";
    return kExitOk;
}

int cmd_query(const DataOptions& o, const std::string& engine, const std::string& query, std::size_t limit)
{
    const auto kind = parse_engine_kind(engine);
    const auto q = parse_query_id(query);
    auto v = obtain_dataset(o);
    const auto e = load_engine(kind, v.data, o.shards);
    const auto spec = make_spec(o);
    const auto hits = run_query(e, QueryId::Q1, spec, {}).hits;
    QueryStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = q == QueryId::Q1 ? run_query(e, q, spec, {}, stats) : run_query(e, q, spec, hits, stats);
    const double ms = elapsed_ms(t0);
    std::cout << to_string(kind) << " " << to_string(q) << ": " << rs.size() << " rows in " << ms << " ms (sub_queries=" << stats.sub_queries
              << ", visited_nodes=" << stats.visited_nodes << ")\n";
    const std::size_t shown = limit == 0 ? rs.size() : std::min(limit, rs.size());
    if (q == QueryId::Q1) {
        std::printf("%-12s %-28s %-22s %s\n", "Stock", "Date", "Media", "Score");
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& h = rs.hits[i];
            std::printf("%-12s %-28s %-22s %.6f\n", h.symbol.value.c_str(), h.timestamp.to_string().c_str(), h.media.c_str(), h.score);
        }
    } else {
        for (std::size_t i = 0; i < shown; ++i) {
            std::cout << format_bar_row(rs.bars[i]) << "\n";
        }
    }
    if (shown < rs.size()) {
        std::cout << "... " << (rs.size() - shown) << " more\n";
    }
    return kExitOk;
}

int cmd_report(const std::string& in, const fs::path& out)
{
    std::ifstream f(in, std::ios::binary);
    if (!f) {
        throw IoError("cannot read '" + in + "'");
    }
    std::stringstream buf;
    buf << f.rdbuf();
    const auto report = bench::parse_report_csv(buf.str());
    const auto files = bench::emit_report(report, out);
    std::cout << bench::to_markdown(report) << "\nre-rendered into " << files.markdown.parent_path().string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ESG news / stock price workload across relational, document and graph engines"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Write a synthetic dataset directory");
    ingest::GeneratorConfig gen_cfg;
    std::string gen_out;
    add_generator_flags(gen, gen_cfg);
    gen->add_option("--out", gen_out, "Output directory")->required();

    auto* ing = app.add_subcommand("ingest", "Load and validate a dataset directory");
    std::string ing_dir, ing_index;
    ing->add_option("--data", ing_dir, "Dataset directory")->required();
    ing->add_option("--index-out", ing_index, "Also build the full-text index and save it here");

    auto* ver = app.add_subcommand("verify", "Check that all engines return the same results");
    DataOptions ver_opts;
    add_data_flags(ver, ver_opts, true);

    auto* ben = app.add_subcommand("bench", "Benchmark every query on every engine");
    DataOptions ben_opts;
    bench::BenchConfig ben_cfg;
    std::string ben_out = "bench-out";
    bool ben_force = false;
    add_data_flags(ben, ben_opts, true);
    ben->add_option("--reps", ben_cfg.repetitions, "Measured repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    ben->add_option("--warmups", ben_cfg.warmups, "Unmeasured warm-up runs")->capture_default_str()->check(CLI::NonNegativeNumber);
    ben->add_option("--interval", ben_cfg.sample_interval_ms, "CPU/memory sampling interval (ms)")->capture_default_str()->check(CLI::PositiveNumber);
    ben->add_option("--out", ben_out, "Report directory")->capture_default_str();
    ben->add_flag("--force", ben_force, "Benchmark even when verify fails");

    auto* qry = app.add_subcommand("query", "Run one query on one engine and print the result");
    DataOptions qry_opts;
    std::string qry_engine = "graph", qry_query = "Q1";
    std::size_t qry_limit = 20;
    add_data_flags(qry, qry_opts, false);
    qry->add_option("--engine", qry_engine, "relational, document or graph")->capture_default_str();
    qry->add_option("--query", qry_query, "Q1..Q5")->capture_default_str();
    qry->add_option("--limit", qry_limit, "Rows to print (0 = all)")->capture_default_str();

    auto* rep = app.add_subcommand("report", "Re-render a report from its CSV");
    std::string rep_in, rep_out;
    rep->add_option("--in", rep_in, "report.csv")->required();
    rep->add_option("--out", rep_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*gen) return cmd_gen(gen_out, gen_cfg);
        if (*ing) return cmd_ingest(ing_dir, ing_index);
        if (*ver) return cmd_verify(ver_opts);
        if (*ben) return cmd_bench(ben_opts, ben_cfg, ben_out, ben_force);
        if (*qry) return cmd_query(qry_opts, qry_engine, qry_query, qry_limit);
        if (*rep) return cmd_report(rep_in, rep_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    std::cerr << app.help();
    return kExitUsage;
}
