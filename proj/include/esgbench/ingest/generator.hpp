#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/core/hash.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/text/analyzer.hpp"

namespace esgbench::ingest {

struct GeneratorConfig {
    std::uint64_t seed = 42;
    std::size_t n_stocks = 50;
    std::size_t n_sectors = 5;
    std::size_t n_news = 10'000;
    std::int32_t days = 42;
    std::int32_t bars_per_day = 8;
    double esg_fraction = 0.01;
    Date start = Date::from_civil(2023, 7, 1);
};

/// What the generator planted, for tests that need exact expectations.
struct GenerationLog {
    std::vector<DocId> esg_docs;    // ascending
    std::size_t esg_mentions = 0;   // sum of mention counts over esg_docs
};

namespace detail {

struct ListedStock {
    const char* symbol;
    const char* name;
};

// Ordered so that round-robin over kSectorNames puts each in its real sector.
inline constexpr ListedStock kListed[] = {
    {"TATASTEEL", "Tata Steel"},          {"SBIN", "State Bank of India"},         {"INFY", "Infosys"},
    {"HINDUNILVR", "Hindustan Unilever"}, {"MARUTI", "Maruti Suzuki"},             {"JSWSTEEL", "JSW Steel"},
    {"HDFCBANK", "HDFC Bank"},            {"TCS", "Tata Consultancy Services"},    {"ITC", "ITC"},
    {"TATAMOTORS", "Tata Motors"},        {"HINDALCO", "Hindalco Industries"},     {"ICICIBANK", "ICICI Bank"},
    {"WIPRO", "Wipro"},                   {"NESTLEIND", "Nestle India"},           {"EICHERMOT", "Eicher Motors"},
    {"COALINDIA", "Coal India"},          {"KOTAKBANK", "Kotak Mahindra Bank"},    {"HCLTECH", "HCL Technologies"},
    {"BRITANNIA", "Britannia Industries"}, {"HEROMOTOCO", "Hero MotoCorp"},        {"VEDL", "Vedanta"},
    {"AXISBANK", "Axis Bank"},            {"TECHM", "Tech Mahindra"},              {"TATACONSUM", "Tata Consumer Products"},
    {"ASHOKLEY", "Ashok Leyland"},        {"NMDC", "NMDC"},                        {"BAJFINANCE", "Bajaj Finance"},
    {"LTIM", "LTIMindtree"},              {"DABUR", "Dabur India"},                {"TVSMOTOR", "TVS Motor"},
    {"SAIL", "Steel Authority of India"}, {"INDUSINDBK", "IndusInd Bank"},         {"MPHASIS", "Mphasis"},
    {"MARICO", "Marico"},                 {"BOSCHLTD", "Bosch"},                   {"NATIONALUM", "National Aluminium"},
    {"PNB", "Punjab National Bank"},      {"PERSISTENT", "Persistent Systems"},    {"COLPAL", "Colgate Palmolive"},
    {"MRF", "MRF"},                       {"JINDALSTEL", "Jindal Steel and Power"}, {"BANKBARODA", "Bank of Baroda"},
    {"COFORGE", "Coforge"},               {"GODREJCP", "Godrej Consumer Products"}, {"BALKRISIND", "Balkrishna Industries"},
    {"HINDZINC", "Hindustan Zinc"},       {"CANBK", "Canara Bank"},                {"OFSS", "Oracle Financial Services"},
    {"EMAMILTD", "Emami"},                {"APOLLOTYRE", "Apollo Tyres"},
};

inline constexpr const char* kSectorNames[] = {
    "Metals and Mining", "Financial Services", "Information Technology", "Consumer Goods",
    "Automobile",        "Energy",             "Healthcare",             "Telecom",
    "Construction",      "Chemicals",          "Media",                  "Realty",
};

inline constexpr const char* kMedia[] = {
    "Economic Times",     "Business Standard", "Mint",    "Moneycontrol",      "Equitypandit",
    "Biodiesel Magazine", "Reuters",           "Tata Steel", "Financial Express", "Infosys",
};

inline constexpr const char* kFiller[] = {
    "market",     "shares",     "investors",   "quarter",    "revenue",    "growth",     "board",       "announced",
    "plans",      "analysts",   "expect",      "demand",     "prices",     "report",     "company",     "said",
    "outlook",    "margin",     "profit",      "dividend",   "capacity",   "expansion",  "domestic",    "exports",
    "guidance",   "fiscal",     "results",     "strong",     "weak",       "rally",      "decline",     "trading",
    "session",    "index",      "benchmark",   "futures",    "brokerage",  "target",     "rating",      "upgrade",
    "downgrade",  "orders",     "contract",    "plant",      "production", "volumes",    "segment",     "management",
    "commentary", "inflation",  "rates",       "policy",     "rupee",      "currency",   "foreign",     "inflows",
    "outflows",   "earnings",   "estimates",   "consensus",  "buyback",    "stake",      "acquisition", "merger",
    "subsidiary", "debt",       "funding",     "valuation",  "premium",    "discount",   "cycle",       "recovery",
    "momentum",   "volatility", "hedge",       "portfolio",  "allocation", "peers",      "competition", "pricing",
    "costs",      "input",      "raw",         "material",   "logistics",  "supply",     "chain",       "digital",
    "platform",   "customers",  "retail",      "urban",      "rural",      "consumption", "monsoon",    "season",
    "festive",    "quarterly",  "annual",      "meeting",    "shareholders", "approval", "regulator",   "filing",
    "update",     "forecast",   "steady",      "gains",      "losses",     "closed",     "opened",      "higher",
    "lower",      "week",       "month",       "year",       "early",      "late",       "deal",        "launch",
    "the",        "a",          "on",          "in",         "after",      "with",       "its",         "for",
};

/// Bounded draws on top of mt19937_64, whose output sequence is fixed by the
/// standard. std::uniform_int_distribution is not, across library vendors.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t between(std::int64_t lo, std::int64_t hi)  // inclusive
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return below(2) == 1; }

  private:
    std::mt19937_64 eng_;
};

inline void check_config(const GeneratorConfig& c)
{
    if (c.n_stocks == 0) {
        throw Error("generator: n_stocks must be positive");
    }
    if (c.n_sectors == 0) {
        throw Error("generator: n_sectors must be positive");
    }
    if (c.n_sectors > c.n_stocks) {
        throw Error("generator: n_sectors (" + std::to_string(c.n_sectors) + ") exceeds n_stocks (" + std::to_string(c.n_stocks) + ")");
    }
    if (c.days <= 0) {
        throw Error("generator: days must be positive");
    }
    if (c.bars_per_day <= 0 || c.bars_per_day > 22'500) {
        throw Error("generator: bars_per_day must be in 1..22500");
    }
    if (!(c.esg_fraction >= 0.0 && c.esg_fraction <= 1.0)) {
        throw Error("generator: esg_fraction must be in [0, 1]");
    }
}

inline std::string pad3(std::size_t i)
{
    std::string s = std::to_string(i);
    return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline std::vector<std::string> filler_words(const std::vector<Stock>& stocks, const EsgLexicon& lexicon)
{
    std::unordered_set<std::string> banned(lexicon.terms().begin(), lexicon.terms().end());
    for (const auto& s : stocks) {
        for (auto& t : text::tokenize(s.symbol.value).terms()) {
            banned.insert(std::move(t));
        }
        for (auto& t : text::tokenize(s.name).terms()) {
            banned.insert(std::move(t));
        }
    }
    std::vector<std::string> out;
    for (const char* w : kFiller) {
        if (!banned.contains(w)) {
            out.emplace_back(w);
        }
    }
    if (out.size() < 8) {
        throw Error("generator: filler vocabulary collides with stock names or lexicon");
    }
    return out;
}

inline std::string spell_term(const std::string& term, Rng& rng)
{
    std::string s = term;
    switch (rng.below(3)) {
        case 0:
            break;
        case 1:
            s[0] = ascii_upper(s[0]);
            break;
        default:
            for (auto& c : s) {
                c = ascii_upper(c);
            }
    }
    return s;
}

}  // namespace detail

/// Builds a synthetic universe. Stocks come from a fixed list of large
/// Indian listings (then synthetic names), assigned round-robin to sectors.
/// Bars exist on weekdays only, bars_per_day per session from 09:15, and
/// are emitted sorted by (symbol, timestamp). Each article mentions 1..3
/// stocks by ticker or by name; exactly round(esg_fraction * n_news)
/// articles carry one lexicon term, and no other article contains any.
inline Dataset generate(const GeneratorConfig& cfg, const EsgLexicon& lexicon, GenerationLog* log = nullptr)
{
    detail::check_config(cfg);
    Dataset ds;

    for (std::size_t i = 0; i < cfg.n_sectors; ++i) {
        std::string name = i < std::size(detail::kSectorNames) ? detail::kSectorNames[i] : "Sector " + std::to_string(i + 1);
        ds.sectors.push_back(Sector{SectorId{static_cast<std::uint32_t>(i)}, std::move(name)});
    }
    for (std::size_t i = 0; i < cfg.n_stocks; ++i) {
        Stock s;
        if (i < std::size(detail::kListed)) {
            s.symbol = Symbol(detail::kListed[i].symbol);
            s.name = detail::kListed[i].name;
        } else {
            s.symbol = Symbol("SYN" + detail::pad3(i + 1));
            s.name = "Syn Holdings " + detail::pad3(i + 1);
        }
        s.sector = SectorId{static_cast<std::uint32_t>(i % cfg.n_sectors)};
        ds.stocks.push_back(std::move(s));
    }

    // Separate streams, so changing n_news leaves the bars alone.
    detail::Rng bar_rng(mix64(cfg.seed ^ 0xba25ULL));
    detail::Rng news_rng(mix64(cfg.seed ^ 0x4e3f5ULL));

    std::vector<Date> sessions;
    for (std::int32_t d = 0; d < cfg.days; ++d) {
        const Date day = cfg.start.plus(d);
        if (day.iso_weekday_index() < 5) {
            sessions.push_back(day);
        }
    }
    const std::int64_t open_secs = 9 * 3600 + 15 * 60;
    const std::int64_t step_secs = 22'500 / cfg.bars_per_day;
    std::vector<std::size_t> by_symbol(ds.stocks.size());
    for (std::size_t i = 0; i < by_symbol.size(); ++i) {
        by_symbol[i] = i;
    }
    std::sort(by_symbol.begin(), by_symbol.end(), [&](std::size_t a, std::size_t b) { return ds.stocks[a].symbol < ds.stocks[b].symbol; });
    ds.bars.reserve(ds.stocks.size() * sessions.size() * static_cast<std::size_t>(cfg.bars_per_day));
    for (std::size_t si : by_symbol) {
        std::int64_t last = bar_rng.between(100, 3000) * Price::kScale;
        for (const Date day : sessions) {
            for (std::int32_t j = 0; j < cfg.bars_per_day; ++j) {
                OhlcBar b;
                b.symbol = ds.stocks[si].symbol;
                b.timestamp = Timestamp::at(day, (open_secs + j * step_secs) * Timestamp::kMicrosPerSecond);
                const std::int64_t open = last;
                const std::int64_t close = std::max<std::int64_t>(open + open * bar_rng.between(-500, 500) / 100'000, Price::kScale);
                const std::int64_t eps = open / 500 + 1;
                b.open = Price{open};
                b.close = Price{close};
                b.high = Price{std::max(open, close) + bar_rng.between(0, eps)};
                b.low = Price{std::max<std::int64_t>(std::min(open, close) - bar_rng.between(0, eps), 1)};
                b.volume = bar_rng.between(1'000, 100'000);
                ds.bars.push_back(std::move(b));
                last = close;
            }
        }
    }

    const auto filler = detail::filler_words(ds.stocks, lexicon);
    const auto n_esg = static_cast<std::size_t>(std::llround(cfg.esg_fraction * static_cast<double>(cfg.n_news)));
    std::vector<bool> is_esg(cfg.n_news, false);
    {
        // Partial Fisher-Yates: the first n_esg slots are the ESG articles.
        std::vector<std::size_t> idx(cfg.n_news);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        for (std::size_t i = 0; i < n_esg; ++i) {
            std::swap(idx[i], idx[i + news_rng.below(idx.size() - i)]);
            is_esg[idx[i]] = true;
        }
    }

    ds.news.reserve(cfg.n_news);
    for (std::size_t i = 0; i < cfg.n_news; ++i) {
        NewsDoc doc;
        doc.id = DocId{i};
        doc.media = detail::kMedia[news_rng.below(std::size(detail::kMedia))];
        const Date day = cfg.start.plus(static_cast<std::int32_t>(news_rng.below(static_cast<std::uint64_t>(cfg.days))));
        doc.timestamp = Timestamp::at(day, static_cast<std::int64_t>(news_rng.below(Timestamp::kMicrosPerDay)));

        std::vector<std::vector<std::string>> sentences(3 + news_rng.below(4));
        for (auto& s : sentences) {
            const auto n = 6 + news_rng.below(9);
            for (std::uint64_t w = 0; w < n; ++w) {
                s.push_back(filler[news_rng.below(filler.size())]);
            }
        }
        auto plant = [&](std::string phrase) {
            auto& s = sentences[news_rng.below(sentences.size())];
            s.insert(s.begin() + static_cast<std::ptrdiff_t>(news_rng.below(s.size() + 1)), std::move(phrase));
        };

        const auto n_mentions = std::min<std::size_t>(1 + news_rng.below(3), ds.stocks.size());
        std::set<std::size_t> picked;
        while (picked.size() < n_mentions) {
            picked.insert(news_rng.below(ds.stocks.size()));
        }
        for (std::size_t si : picked) {
            const auto& st = ds.stocks[si];
            plant(news_rng.coin() ? st.symbol.value : st.name);
            doc.mentions.push_back(st.symbol);
        }
        std::sort(doc.mentions.begin(), doc.mentions.end());

        if (is_esg[i]) {
            const auto& terms = lexicon.terms();
            plant(detail::spell_term(terms[news_rng.below(terms.size())], news_rng));
            if (log) {
                log->esg_docs.push_back(doc.id);
                log->esg_mentions += doc.mentions.size();
            }
        }

        for (std::size_t s = 0; s < sentences.size(); ++s) {
            if (s) {
                doc.content += ' ';
            }
            std::string sentence;
            for (std::size_t w = 0; w < sentences[s].size(); ++w) {
                if (w) {
                    sentence += ' ';
                }
                sentence += sentences[s][w];
            }
            sentence[0] = ascii_upper(sentence[0]);
            doc.content += sentence;
            doc.content += '.';
        }
        ds.news.push_back(std::move(doc));
    }
    return ds;
}

inline Dataset generate(const GeneratorConfig& cfg) { return generate(cfg, EsgLexicon::defaults()); }

}  // namespace esgbench::ingest
