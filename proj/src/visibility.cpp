#include "adjset/visibility.hpp"

#include <deque>

namespace adjset {

bool is_visible(const MixedGraph& g, NodeId x, NodeId y) {
    if (!g.has_directed(x, y))
        throw Error(ErrorKind::NotDirectedEdge,
                    "'" + g.name(x) + " -> " + g.name(y) + "' is not a directed edge");
    if (g.graph_class() == GraphClass::Dag || g.graph_class() == GraphClass::Cpdag) return true;

    auto far_from_y = [&](NodeId v) { return v != y && !g.adjacent(v, y); };

    // Walk back from x along collider paths whose interior nodes are parents of y.
    std::vector<bool> seen(g.size(), false);
    std::deque<NodeId> queue{x};
    seen[x] = true;
    while (!queue.empty()) {
        NodeId w = queue.front();
        queue.pop_front();
        for (const auto& inc : g.incident(w)) {
            if (inc.here != Mark::Arrow) continue;
            const NodeId v = inc.neighbor;
            if (far_from_y(v)) return true;
            if (seen[v] || inc.there != Mark::Arrow || !g.has_directed(v, y)) continue;
            seen[v] = true;
            queue.push_back(v);
        }
    }
    return false;
}

std::vector<Edge> visible_out_edges(const MixedGraph& g, const NodeSet& x) {
    std::vector<Edge> out;
    for (NodeId v : x)
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Tail && inc.there == Mark::Arrow && is_visible(g, v, inc.neighbor))
                out.push_back(Edge::directed(v, inc.neighbor));
    return out;
}

} // namespace adjset
