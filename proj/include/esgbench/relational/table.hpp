#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "esgbench/core/error.hpp"

namespace esgbench::relational {

/// Heap table: rows in append order, addressed by row number.
template <typename Row>
class Table {
  public:
    explicit Table(std::string name) : name_(std::move(name)) {}

    std::size_t append(Row row)
    {
        rows_.push_back(std::move(row));
        return rows_.size() - 1;
    }

    const std::string& name() const { return name_; }
    std::size_t size() const { return rows_.size(); }
    const Row& operator[](std::size_t i) const { return rows_[i]; }
    const std::vector<Row>& rows() const { return rows_; }

    auto begin() const { return rows_.begin(); }
    auto end() const { return rows_.end(); }

    void reserve(std::size_t n) { rows_.reserve(n); }

  private:
    std::string name_;
    std::vector<Row> rows_;
};

/// Hash index over one key column of a table. A unique index refuses a
/// second row with the same key, which is how primary keys are enforced.
template <typename Key>
class HashIndex {
  public:
    explicit HashIndex(bool unique) : unique_(unique) {}

    template <typename Row, typename KeyFn>
    static HashIndex build(const Table<Row>& table, KeyFn&& key_of, bool unique)
    {
        HashIndex idx(unique);
        idx.map_.reserve(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            idx.insert(key_of(table[i]), i, table.name());
        }
        return idx;
    }

    void insert(const Key& key, std::size_t row, const std::string& table_name)
    {
        auto& slot = map_[key];
        if (unique_ && !slot.empty()) {
            throw Error("duplicate primary key in table '" + table_name + "'");
        }
        slot.push_back(row);
    }

    /// Row numbers with `key`, in insertion order.
    const std::vector<std::size_t>& lookup(const Key& key) const
    {
        static const std::vector<std::size_t> none;
        auto it = map_.find(key);
        return it == map_.end() ? none : it->second;
    }

    bool unique() const { return unique_; }
    std::size_t key_count() const { return map_.size(); }

  private:
    bool unique_;
    std::unordered_map<Key, std::vector<std::size_t>> map_;
};

}  // namespace esgbench::relational
