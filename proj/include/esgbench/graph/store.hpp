#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "esgbench/core/error.hpp"

namespace esgbench::graph {

enum class Label : std::uint8_t { Stock, News, Sector, Bar };
enum class RelType : std::uint8_t { Mentions, InSector, HasBar };
enum class Direction : std::uint8_t { Out, In };

inline constexpr std::size_t kRelTypeCount = 3;

inline std::string_view to_string(Label l)
{
    switch (l) {
        case Label::Stock: return "Stock";
        case Label::News: return "News";
        case Label::Sector: return "Sector";
        case Label::Bar: return "Bar";
    }
    return "?";
}

inline std::string_view to_string(RelType t)
{
    switch (t) {
        case RelType::Mentions: return "MENTIONS";
        case RelType::InSector: return "IN_SECTOR";
        case RelType::HasBar: return "HAS_BAR";
    }
    return "?";
}

/// Endpoint labels each relationship type allows: (source, target).
constexpr std::pair<Label, Label> endpoints(RelType t)
{
    switch (t) {
        case RelType::Mentions: return {Label::News, Label::Stock};
        case RelType::InSector: return {Label::Stock, Label::Sector};
        case RelType::HasBar: return {Label::Stock, Label::Bar};
    }
    return {Label::Stock, Label::Stock};
}

using NodeId = std::uint32_t;
using RelId = std::uint32_t;
using PropertyKey = std::uint16_t;
using PropertyValue = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Small flat property map; nodes carry a handful of properties so a linear
/// scan beats hashing.
class PropertyMap {
  public:
    void set(PropertyKey key, PropertyValue v)
    {
        for (auto& [k, val] : entries_) {
            if (k == key) {
                val = std::move(v);
                return;
            }
        }
        entries_.emplace_back(key, std::move(v));
    }

    const PropertyValue* get(PropertyKey key) const
    {
        for (const auto& [k, val] : entries_) {
            if (k == key) {
                return &val;
            }
        }
        return nullptr;
    }

    std::size_t size() const { return entries_.size(); }

  private:
    std::vector<std::pair<PropertyKey, PropertyValue>> entries_;
};

struct Node {
    Label label;
    PropertyMap props;
    // Relationship ids grouped by (type, direction): index = type * 2 + direction.
    std::array<std::vector<RelId>, kRelTypeCount * 2> adjacency;

    std::span<const RelId> rels(RelType t, Direction d) const
    {
        return adjacency[static_cast<std::size_t>(t) * 2 + static_cast<std::size_t>(d)];
    }
};

struct Relationship {
    RelType type;
    NodeId source;
    NodeId target;
};

/// Property graph with index-free adjacency: every node holds the ids of its
/// incident relationships, so expanding a node costs O(degree) regardless of
/// graph size. Build once, then read concurrently.
class GraphStore {
  public:
    PropertyKey key(std::string_view name)
    {
        auto it = key_ids_.find(std::string(name));
        if (it != key_ids_.end()) {
            return it->second;
        }
        const auto id = static_cast<PropertyKey>(key_names_.size());
        key_names_.emplace_back(name);
        key_ids_.emplace(std::string(name), id);
        return id;
    }

    std::optional<PropertyKey> find_key(std::string_view name) const
    {
        auto it = key_ids_.find(std::string(name));
        if (it == key_ids_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    NodeId create_node(Label label, PropertyMap props = {})
    {
        const auto id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(Node{label, std::move(props), {}});
        by_label_[static_cast<std::size_t>(label)].push_back(id);
        return id;
    }

    RelId create_relationship(RelType type, NodeId source, NodeId target)
    {
        if (source >= nodes_.size() || target >= nodes_.size()) {
            throw Error("dangling relationship endpoint for " + std::string(to_string(type)));
        }
        const auto [src_label, dst_label] = endpoints(type);
        if (nodes_[source].label != src_label || nodes_[target].label != dst_label) {
            throw Error(std::string(to_string(type)) + " must connect " + std::string(to_string(src_label)) + " to " +
                        std::string(to_string(dst_label)));
        }
        const auto id = static_cast<RelId>(rels_.size());
        rels_.push_back(Relationship{type, source, target});
        const auto slot = static_cast<std::size_t>(type) * 2;
        nodes_[source].adjacency[slot + static_cast<std::size_t>(Direction::Out)].push_back(id);
        nodes_[target].adjacency[slot + static_cast<std::size_t>(Direction::In)].push_back(id);
        return id;
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t relationship_count() const { return rels_.size(); }

    const Node& node(NodeId id) const
    {
        if (id >= nodes_.size()) {
            throw Error("unknown node " + std::to_string(id));
        }
        return nodes_[id];
    }

    const Relationship& relationship(RelId id) const { return rels_.at(id); }

    /// The node on the other end of `rel` as seen from `from`.
    NodeId other(RelId rel, Direction from) const
    {
        const auto& r = rels_[rel];
        return from == Direction::Out ? r.target : r.source;
    }

    /// Adjacent nodes over `type` relationships in `dir`, in insertion order.
    std::vector<NodeId> neighbors(NodeId id, RelType type, Direction dir) const
    {
        const auto& n = node(id);
        std::vector<NodeId> out;
        const auto rels = n.rels(type, dir);
        out.reserve(rels.size());
        for (auto r : rels) {
            out.push_back(other(r, dir));
        }
        return out;
    }

    std::span<const NodeId> nodes_with_label(Label l) const { return by_label_[static_cast<std::size_t>(l)]; }

    const PropertyValue* property(NodeId id, PropertyKey key) const { return nodes_[id].props.get(key); }

    const std::string& string_property(NodeId id, PropertyKey key) const
    {
        const auto* v = property(id, key);
        if (!v || !std::holds_alternative<std::string>(*v)) {
            throw Error("node " + std::to_string(id) + " lacks string property '" + key_names_.at(key) + "'");
        }
        return std::get<std::string>(*v);
    }

    std::int64_t int_property(NodeId id, PropertyKey key) const
    {
        const auto* v = property(id, key);
        if (!v || !std::holds_alternative<std::int64_t>(*v)) {
            throw Error("node " + std::to_string(id) + " lacks integer property '" + key_names_.at(key) + "'");
        }
        return std::get<std::int64_t>(*v);
    }

    const std::vector<Relationship>& relationships() const { return rels_; }

  private:
    std::vector<Node> nodes_;
    std::vector<Relationship> rels_;
    std::array<std::vector<NodeId>, 4> by_label_;
    std::vector<std::string> key_names_;
    std::unordered_map<std::string, PropertyKey> key_ids_;
};

}  // namespace esgbench::graph
