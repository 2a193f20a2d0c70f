#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adjset/error.hpp"
#include "adjset/node_set.hpp"

namespace adjset {

enum class Mark : std::uint8_t { Tail, Arrow, Circle };

enum class GraphClass { Dag, Cpdag, Mag, Pag };

const char* to_string(Mark m);
const char* to_string(GraphClass c);

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    Mark mark_a = Mark::Tail;
    Mark mark_b = Mark::Arrow;

    static Edge directed(NodeId from, NodeId to) { return {from, to, Mark::Tail, Mark::Arrow}; }
    static Edge bidirected(NodeId u, NodeId v) { return {u, v, Mark::Arrow, Mark::Arrow}; }
    static Edge nondirected(NodeId u, NodeId v) { return {u, v, Mark::Circle, Mark::Circle}; }
    static Edge partial(NodeId from, NodeId to) { return {from, to, Mark::Circle, Mark::Arrow}; }

    // Same edge with a < b.
    Edge canonical() const;
    Mark mark_at(NodeId v) const { return v == a ? mark_a : mark_b; }
    NodeId other(NodeId v) const { return v == a ? b : a; }
    bool is_directed() const;

    bool operator==(const Edge&) const = default;
};

// One entry of a node's adjacency list.
struct Incidence {
    NodeId neighbor;
    Mark here;
    Mark there;
};

class MixedGraph {
public:
    MixedGraph() = default;

    std::size_t size() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    GraphClass graph_class() const noexcept { return class_; }

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(NodeId v) const { return names_.at(v); }
    std::optional<NodeId> find(std::string_view name) const;
    NodeId id(std::string_view name) const; // throws InvalidArgument

    // Canonical edges (a < b), sorted by (a, b).
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    // Incidences of v, sorted by neighbor id.
    std::span<const Incidence> incident(NodeId v) const { return adj_.at(v); }
    std::optional<Incidence> between(NodeId u, NodeId v) const;
    bool adjacent(NodeId u, NodeId v) const { return between(u, v).has_value(); }
    // True iff u -> v is an edge (tail at u, arrow at v).
    bool has_directed(NodeId u, NodeId v) const;
    bool has_circles() const noexcept;

    NodeSet empty_set() const { return NodeSet(size()); }
    NodeSet all_nodes() const { return NodeSet::full(size()); }
    NodeSet set_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const NodeSet& s) const;

    bool operator==(const MixedGraph& o) const;

    friend MixedGraph build_graph(std::vector<std::string>, std::vector<Edge>, GraphClass);
    // Checks simplicity only; class invariants are trusted. Used for derived graphs.
    friend MixedGraph assemble_graph(std::vector<std::string>, std::vector<Edge>, GraphClass);

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adj_;
    GraphClass class_ = GraphClass::Dag;
};

MixedGraph build_graph(std::vector<std::string> names, std::vector<Edge> edges, GraphClass cls);
MixedGraph assemble_graph(std::vector<std::string> names, std::vector<Edge> edges, GraphClass cls);

// Throws ClassViolation if g breaks the invariants of cls.
void validate_class(const MixedGraph& g, GraphClass cls);

NodeSet parents(const MixedGraph& g, const NodeSet& s);
NodeSet children(const MixedGraph& g, const NodeSet& s);
NodeSet ancestors(const MixedGraph& g, const NodeSet& s);
NodeSet descendants(const MixedGraph& g, const NodeSet& s);
NodeSet poss_an(const MixedGraph& g, const NodeSet& s);
NodeSet poss_de(const MixedGraph& g, const NodeSet& s);

// Nodes renumbered in ascending order of their old ids.
MixedGraph induced_subgraph(const MixedGraph& g, const NodeSet& s);
// Same node set, edges listed in `drop` removed.
MixedGraph remove_edges(const MixedGraph& g, const std::vector<Edge>& drop);
MixedGraph moral_graph(const MixedGraph& dag);

// Kahn order over the directed edges; throws ClassViolation on a cycle.
std::vector<NodeId> topological_order(const MixedGraph& g);

} // namespace adjset
