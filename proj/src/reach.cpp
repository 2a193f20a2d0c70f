#include "adjset/reach.hpp"

#include <algorithm>
#include <deque>

namespace adjset {

namespace {

Incidence edge_of(const MixedGraph& g, NodeId u, NodeId v) {
    auto inc = g.between(u, v);
    if (!inc)
        throw Error(ErrorKind::InvalidArgument,
                    "'" + g.name(u) + "' and '" + g.name(v) + "' are not adjacent");
    return *inc;
}

void require_disjoint(const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    if (x.intersects(y) || x.intersects(z) || y.intersects(z))
        throw Error(ErrorKind::InvalidArgument, "node sets must be pairwise disjoint");
}

NodeStatus triple_status(const MixedGraph& g, NodeId prev, NodeId v, NodeId next) {
    Mark m1 = edge_of(g, v, prev).here;
    Mark m2 = edge_of(g, v, next).here;
    if (m1 == Mark::Arrow && m2 == Mark::Arrow) return NodeStatus::Collider;
    if (m1 == Mark::Tail || m2 == Mark::Tail) return NodeStatus::DefiniteNonCollider;
    if (m1 == Mark::Circle && m2 == Mark::Circle && !g.adjacent(prev, next))
        return NodeStatus::DefiniteNonCollider;
    return NodeStatus::NotDefinite;
}

} // namespace

NodeStatus status_at(const MixedGraph& g, const Path& p, std::size_t i) {
    if (i == 0 || i + 1 >= p.nodes.size()) {
        if (p.nodes.size() >= 2) edge_of(g, p.nodes[0], p.nodes[1]);
        return NodeStatus::Endpoint;
    }
    return triple_status(g, p.nodes[i - 1], p.nodes[i], p.nodes[i + 1]);
}

std::vector<NodeStatus> statuses(const MixedGraph& g, const Path& p) {
    std::vector<NodeStatus> out;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) out.push_back(status_at(g, p, i));
    return out;
}

bool is_definite_status(const MixedGraph& g, const Path& p) {
    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i)
        if (status_at(g, p, i) == NodeStatus::NotDefinite) return false;
    return true;
}

bool is_possibly_directed(const MixedGraph& g, const Path& p) {
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        if (edge_of(g, p.nodes[i], p.nodes[i + 1]).here == Mark::Arrow) return false;
    return true;
}

std::string format_path(const MixedGraph& g, const Path& p) {
    std::string out;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        if (i > 0) {
            Incidence e = edge_of(g, p.nodes[i - 1], p.nodes[i]);
            std::string link = "-";
            if (e.here == Mark::Arrow) link = "<" + link;
            if (e.here == Mark::Circle) link = "o" + link;
            if (e.there == Mark::Arrow) link += '>';
            if (e.there == Mark::Circle) link += 'o';
            if (link == "-") link = "--";
            out += ' ' + link + ' ';
        }
        out += g.name(p.nodes[i]);
    }
    return out;
}

bool m_connected(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z,
                 ReachStats* stats) {
    if (g.graph_class() == GraphClass::Cpdag || g.graph_class() == GraphClass::Pag)
        throw Error(ErrorKind::ClassUnsupported, "m_connected needs a dag or mag");
    require_disjoint(x, y, z);

    const std::size_t n = g.size();
    const NodeSet an_z = ancestors(g, z);
    // visited[2v] : arrived at v by a tail mark; visited[2v+1] : by an arrowhead.
    std::vector<bool> visited(2 * n, false);
    std::deque<std::pair<NodeId, int>> queue; // arrival kind -1 marks a start node
    for (NodeId v : x) queue.push_back({v, -1});

    while (!queue.empty()) {
        auto [v, arrived] = queue.front();
        queue.pop_front();
        if (stats) ++stats->states;
        for (const auto& inc : g.incident(v)) {
            if (stats) ++stats->edge_scans;
            if (arrived >= 0) {
                bool collider = arrived == 1 && inc.here == Mark::Arrow;
                bool pass = collider ? an_z.contains(v) : !z.contains(v);
                if (!pass) continue;
            }
            const NodeId w = inc.neighbor;
            const int kind = inc.there == Mark::Arrow ? 1 : 0;
            if (y.contains(w)) return true;
            if (x.contains(w) || visited[2 * w + kind]) continue;
            visited[2 * w + kind] = true;
            queue.push_back({w, kind});
        }
    }
    return false;
}

bool d_sep_moral_oracle(const MixedGraph& dag, const NodeSet& x, const NodeSet& y,
                        const NodeSet& z) {
    if (dag.graph_class() != GraphClass::Dag)
        throw Error(ErrorKind::NotADag, "d_sep_moral_oracle needs a dag");
    require_disjoint(x, y, z);
    const NodeSet keep = ancestors(dag, x | y | z);
    const MixedGraph sub = induced_subgraph(dag, keep);
    const MixedGraph moral = moral_graph(sub);

    // Map old ids to the subgraph's ids.
    std::vector<NodeId> remap(dag.size(), 0);
    NodeId next = 0;
    for (NodeId v : keep) remap[v] = next++;
    NodeSet sx(sub.size()), sy(sub.size()), sz(sub.size());
    for (NodeId v : x) sx.insert(remap[v]);
    for (NodeId v : y) sy.insert(remap[v]);
    for (NodeId v : z) sz.insert(remap[v]);

    NodeSet seen = sx;
    std::vector<NodeId> stack = sx.to_vector();
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (sy.contains(v)) return false;
        for (const auto& inc : moral.incident(v)) {
            NodeId w = inc.neighbor;
            if (seen.contains(w) || sz.contains(w)) continue;
            seen.insert(w);
            stack.push_back(w);
        }
    }
    return true;
}

void for_each_path(const MixedGraph& g, const NodeSet& x, const NodeSet& y, bool proper,
                   bool definite_only, const std::function<bool(const Path&)>& visit,
                   PathLimits limits) {
    if (g.size() > limits.max_nodes)
        throw Error(ErrorKind::GraphTooLarge, "path enumeration is limited to " +
                                                  std::to_string(limits.max_nodes) + " nodes");
    std::size_t emitted = 0;
    std::vector<bool> on_path(g.size(), false);
    Path p;
    bool stop = false;

    std::function<void()> extend = [&]() {
        const NodeId v = p.nodes.back();
        for (const auto& inc : g.incident(v)) {
            if (stop) return;
            const NodeId w = inc.neighbor;
            if (on_path[w] || (proper && x.contains(w))) continue;
            if (definite_only && p.nodes.size() >= 2 &&
                triple_status(g, p.nodes[p.nodes.size() - 2], v, w) == NodeStatus::NotDefinite)
                continue;
            p.nodes.push_back(w);
            on_path[w] = true;
            if (y.contains(w)) {
                if (++emitted > limits.max_paths)
                    throw Error(ErrorKind::GraphTooLarge, "more than " +
                                                              std::to_string(limits.max_paths) +
                                                              " paths");
                if (!visit(p)) stop = true;
            }
            if (!stop) extend();
            on_path[w] = false;
            p.nodes.pop_back();
        }
    };

    for (NodeId s : x) {
        if (stop) return;
        p.nodes = {s};
        on_path[s] = true;
        extend();
        on_path[s] = false;
    }
}

std::vector<Path> enumerate_definite_status_paths(const MixedGraph& g, const NodeSet& x,
                                                  const NodeSet& y, bool proper,
                                                  PathLimits limits) {
    std::vector<Path> out;
    for_each_path(g, x, y, proper, true, [&](const Path& p) {
        out.push_back(p);
        return true;
    }, limits);
    return out;
}

bool is_blocked(const Path& p, const NodeSet& z, const MixedGraph& g) {
    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
        const NodeId v = p.nodes[i];
        switch (status_at(g, p, i)) {
        case NodeStatus::NotDefinite:
            throw Error(ErrorKind::NotDefiniteStatus,
                        "'" + g.name(v) + "' is not of definite status on " + format_path(g, p));
        case NodeStatus::DefiniteNonCollider:
            if (z.contains(v)) return true;
            break;
        case NodeStatus::Collider:
            if (!descendants(g, NodeSet(g.size(), {v})).intersects(z)) return true;
            break;
        case NodeStatus::Endpoint: break;
        }
    }
    return false;
}

NodeSet reaches_by_pd_path(const MixedGraph& g, const NodeSet& y, const NodeSet& avoid) {
    NodeSet seen = y - avoid;
    std::vector<NodeId> stack = seen.to_vector();
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (const auto& inc : g.incident(v)) {
            // Step u -> v backwards: the mark at u must not be an arrowhead.
            const NodeId u = inc.neighbor;
            if (inc.there == Mark::Arrow || avoid.contains(u) || seen.contains(u)) continue;
            seen.insert(u);
            stack.push_back(u);
        }
    }
    return seen;
}

NodeSet proper_pdp_nodes(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    // Forward sweep from x that never re-enters x.
    NodeSet from_x(g.size());
    std::vector<NodeId> stack = x.to_vector();
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (const auto& inc : g.incident(v)) {
            const NodeId w = inc.neighbor;
            if (inc.here == Mark::Arrow || x.contains(w) || from_x.contains(w)) continue;
            from_x.insert(w);
            stack.push_back(w);
        }
    }
    return from_x & reaches_by_pd_path(g, y, x);
}

std::optional<Path> shortest_pd_path(const MixedGraph& g, NodeId from, const NodeSet& to,
                                     const NodeSet& avoid) {
    const std::size_t n = g.size();
    std::vector<NodeId> parent(n, static_cast<NodeId>(n));
    std::vector<bool> seen(n, false);
    std::deque<NodeId> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        if (v != from && to.contains(v)) {
            Path p;
            for (NodeId u = v; u != from; u = parent[u]) p.nodes.push_back(u);
            p.nodes.push_back(from);
            std::reverse(p.nodes.begin(), p.nodes.end());
            return p;
        }
        for (const auto& inc : g.incident(v)) {
            const NodeId w = inc.neighbor;
            if (inc.here == Mark::Arrow || seen[w] || avoid.contains(w)) continue;
            seen[w] = true;
            parent[w] = v;
            queue.push_back(w);
        }
    }
    if (to.contains(from)) return Path{{from}};
    return std::nullopt;
}

} // namespace adjset
