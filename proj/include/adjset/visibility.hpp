#pragma once

#include <vector>

#include "adjset/graph.hpp"

namespace adjset {

// Visibility of the directed edge from -> to. Always true in a Dag or Cpdag.
// Throws NotDirectedEdge when from -> to is not an edge of g.
bool is_visible(const MixedGraph& g, NodeId from, NodeId to);

// Visible directed edges whose tail lies in x, as canonical edges.
std::vector<Edge> visible_out_edges(const MixedGraph& g, const NodeSet& x);

} // namespace adjset
