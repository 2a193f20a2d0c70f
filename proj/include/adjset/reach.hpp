#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adjset/graph.hpp"

namespace adjset {

enum class NodeStatus { Endpoint, Collider, DefiniteNonCollider, NotDefinite };

struct Path {
    std::vector<NodeId> nodes;

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    NodeId front() const { return nodes.front(); }
    NodeId back() const { return nodes.back(); }
    bool operator==(const Path&) const = default;
};

// Status of p.nodes[i] in g. Throws InvalidArgument if p is not a path of g.
NodeStatus status_at(const MixedGraph& g, const Path& p, std::size_t i);
std::vector<NodeStatus> statuses(const MixedGraph& g, const Path& p);
bool is_definite_status(const MixedGraph& g, const Path& p);
// No edge on p has an arrowhead pointing back toward p.front().
bool is_possibly_directed(const MixedGraph& g, const Path& p);
std::string format_path(const MixedGraph& g, const Path& p);

struct ReachStats {
    std::size_t states = 0;
    std::size_t edge_scans = 0;
};

// Bayes-Ball reachability. g must be a Dag or Mag.
bool m_connected(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z,
                 ReachStats* stats = nullptr);

// Testing oracle: separation in the moralized ancestral subgraph.
bool d_sep_moral_oracle(const MixedGraph& dag, const NodeSet& x, const NodeSet& y, const NodeSet& z);

struct PathLimits {
    std::size_t max_nodes = 16;
    std::size_t max_paths = 1'000'000;
};

// Depth-first enumeration of simple paths that start in x and end in y.
// Interior nodes may lie in y. With proper set, no interior node lies in x.
// With definite_only set, paths with a non-definite interior node are pruned.
// visit returns false to stop early.
void for_each_path(const MixedGraph& g, const NodeSet& x, const NodeSet& y, bool proper,
                   bool definite_only, const std::function<bool(const Path&)>& visit,
                   PathLimits limits = {});

std::vector<Path> enumerate_definite_status_paths(const MixedGraph& g, const NodeSet& x,
                                                  const NodeSet& y, bool proper,
                                                  PathLimits limits = {});

// True iff p is blocked by z. Throws NotDefiniteStatus.
bool is_blocked(const Path& p, const NodeSet& z, const MixedGraph& g);

// Nodes from which some node of y is reachable along a possibly directed
// path whose nodes all lie outside `avoid`.
NodeSet reaches_by_pd_path(const MixedGraph& g, const NodeSet& y, const NodeSet& avoid);

NodeSet proper_pdp_nodes(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

// Shortest possibly directed path from `from` to some node of `to` whose
// nodes avoid `avoid` (from itself may lie in avoid).
std::optional<Path> shortest_pd_path(const MixedGraph& g, NodeId from, const NodeSet& to,
                                     const NodeSet& avoid);

} // namespace adjset
