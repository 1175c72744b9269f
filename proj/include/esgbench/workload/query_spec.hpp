#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"

namespace esgbench {

/// Parameters shared by the five queries.
struct QuerySpec {
    EsgLexicon lexicon = EsgLexicon::defaults();
    std::size_t k = 0;              // articles kept by Q1; 0 = every match
    std::int32_t horizon_days = 5;  // Q4 looks at article day + 1 .. + horizon_days

    friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename Int>
Int parse_int(std::string_view v, std::string_view key)
{
    Int out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ParseError("config key '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    }
    return out;
}

}  // namespace detail

/// Reads the `key = value` config format. Keys: `lexicon` (comma-separated
/// terms), `k`, `horizon_days`. `#` starts a comment; missing keys keep
/// their defaults.
inline QuerySpec parse_query_spec(std::string_view text)
{
    QuerySpec spec;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key == "lexicon") {
            std::vector<std::string> terms;
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto term = detail::trim(rest.substr(0, comma));
                if (!term.empty()) {
                    terms.emplace_back(term);
                }
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
            spec.lexicon = EsgLexicon(std::move(terms));
        } else if (key == "k") {
            spec.k = detail::parse_int<std::size_t>(value, key);
        } else if (key == "horizon_days") {
            spec.horizon_days = detail::parse_int<std::int32_t>(value, key);
            if (spec.horizon_days < 1) {
                throw ParseError("horizon_days must be >= 1");
            }
        } else {
            throw ParseError("unknown config key '" + std::string(key) + "'");
        }
    }
    return spec;
}

inline std::string format_query_spec(const QuerySpec& spec)
{
    std::ostringstream out;
    out << "lexicon = ";
    for (std::size_t i = 0; i < spec.lexicon.terms().size(); ++i) {
        out << (i ? "," : "") << spec.lexicon.terms()[i];
    }
    out << "\nk = " << spec.k << "\nhorizon_days = " << spec.horizon_days << "\n";
    return out.str();
}

inline QuerySpec load_query_spec(const std::string& path)
{
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read query config '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_query_spec(ss.str());
}

}  // namespace esgbench
