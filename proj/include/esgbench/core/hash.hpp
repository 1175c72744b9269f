#pragma once

#include <cstdint>
#include <functional>

#include "esgbench/core/model.hpp"

namespace esgbench {

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// splitmix64 finalizer; used for shard placement, where std::hash on
/// integers (often the identity) would stripe sequential ids.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// (stock, day) key used by every bar join.
struct SymbolDay {
    Symbol symbol;
    Date day;

    friend bool operator==(const SymbolDay&, const SymbolDay&) = default;
};

/// (stock, timestamp): the natural key of a bar.
struct SymbolTime {
    Symbol symbol;
    Timestamp timestamp;

    friend bool operator==(const SymbolTime&, const SymbolTime&) = default;
};

}  // namespace esgbench

template <>
struct std::hash<esgbench::SymbolTime> {
    std::size_t operator()(const esgbench::SymbolTime& k) const noexcept
    {
        return esgbench::hash_combine(std::hash<esgbench::Symbol>{}(k.symbol), std::hash<std::int64_t>{}(k.timestamp.micros));
    }
};

template <>
struct std::hash<esgbench::SymbolDay> {
    std::size_t operator()(const esgbench::SymbolDay& k) const noexcept
    {
        return esgbench::hash_combine(std::hash<esgbench::Symbol>{}(k.symbol), std::hash<esgbench::Date>{}(k.day));
    }
};
