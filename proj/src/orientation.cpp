#include "adjset/orientation.hpp"

#include <algorithm>
#include <array>

namespace adjset {

namespace {

constexpr std::size_t kMaxCircleEdges = 20;

GraphClass oriented_class(const MixedGraph& g) {
    switch (g.graph_class()) {
    case GraphClass::Cpdag: return GraphClass::Dag;
    case GraphClass::Pag: return GraphClass::Mag;
    default: return g.graph_class();
    }
}

bool is_circle_circle(const Edge& e) { return e.mark_a == Mark::Circle && e.mark_b == Mark::Circle; }

// Drops the circle of every o-> edge; o-o edges are returned separately.
std::vector<Edge> invariant_edges(const MixedGraph& g, std::vector<Edge>& circles) {
    std::vector<Edge> out;
    for (Edge e : g.edges()) {
        if (is_circle_circle(e)) {
            circles.push_back(e);
            continue;
        }
        if (e.mark_a == Mark::Circle) e.mark_a = Mark::Tail;
        if (e.mark_b == Mark::Circle) e.mark_b = Mark::Tail;
        out.push_back(e);
    }
    return out;
}

MixedGraph orient_impl(const MixedGraph& g, std::optional<NodeId> first) {
    if (!g.has_circles()) {
        if (g.graph_class() == GraphClass::Dag || g.graph_class() == GraphClass::Mag) return g;
        return build_graph(g.names(), g.edges(), oriented_class(g));
    }
    const std::size_t n = g.size();
    std::vector<Edge> circles;
    std::vector<Edge> edges = invariant_edges(g, circles);

    std::vector<std::vector<NodeId>> nbr(n);
    for (const auto& e : circles) {
        nbr[e.a].push_back(e.b);
        nbr[e.b].push_back(e.a);
    }
    auto linked = [&](NodeId u, NodeId v) {
        return std::find(nbr[u].begin(), nbr[u].end(), v) != nbr[u].end();
    };

    // Maximum cardinality search over the circle subgraph, one component at a time.
    std::vector<std::size_t> pos(n, n);
    std::vector<std::size_t> weight(n, 0);
    std::size_t visited = 0;
    std::vector<NodeId> order;
    for (NodeId root = 0; root < n; ++root) {
        if (nbr[root].empty() || pos[root] != n) continue;
        // Component members, to restrict the search.
        std::vector<NodeId> comp{root};
        std::vector<bool> in(n, false);
        in[root] = true;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (NodeId w : nbr[comp[i]])
                if (!in[w]) {
                    in[w] = true;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end());
        NodeId start = (first && in[*first]) ? *first : comp.front();
        for (std::size_t step = 0; step < comp.size(); ++step) {
            NodeId pick = start;
            if (step > 0) {
                bool found = false;
                for (NodeId v : comp) {
                    if (pos[v] != n) continue;
                    if (!found || weight[v] > weight[pick]) {
                        pick = v;
                        found = true;
                    }
                }
            }
            pos[pick] = visited++;
            order.push_back(pick);
            for (NodeId w : nbr[pick])
                if (pos[w] == n) ++weight[w];
        }
    }

    // The search order is a perfect elimination order read backwards iff chordal.
    for (NodeId v : order) {
        std::vector<NodeId> earlier;
        for (NodeId w : nbr[v])
            if (pos[w] < pos[v]) earlier.push_back(w);
        if (earlier.size() < 2) continue;
        NodeId last = *std::max_element(earlier.begin(), earlier.end(),
                                        [&](NodeId a, NodeId b) { return pos[a] < pos[b]; });
        for (NodeId w : earlier)
            if (w != last && !linked(w, last))
                throw Error(ErrorKind::NonChordalCircleComponent,
                            "circle component containing '" + g.name(v) + "' is not chordal",
                            {v, w, last});
    }

    for (const auto& e : circles)
        edges.push_back(pos[e.a] < pos[e.b] ? Edge::directed(e.a, e.b) : Edge::directed(e.b, e.a));
    return build_graph(g.names(), std::move(edges), oriented_class(g));
}

std::vector<std::array<NodeId, 3>> unshielded_colliders(const MixedGraph& g) {
    std::vector<std::array<NodeId, 3>> out;
    for (NodeId c = 0; c < g.size(); ++c) {
        auto inc = g.incident(c);
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j)
                if (inc[i].here == Mark::Arrow && inc[j].here == Mark::Arrow &&
                    !g.adjacent(inc[i].neighbor, inc[j].neighbor))
                    out.push_back({inc[i].neighbor, c, inc[j].neighbor});
    }
    return out;
}

// Visits each orientation of the o-o edges of g that passes build_graph.
void for_each_orientation(const MixedGraph& g,
                          const std::function<bool(const MixedGraph&)>& visit) {
    std::vector<Edge> circles;
    const std::vector<Edge> fixed = invariant_edges(g, circles);
    if (circles.size() > kMaxCircleEdges)
        throw Error(ErrorKind::TooManyExtensions,
                    std::to_string(circles.size()) + " circle edges is too many to orient");
    const std::uint64_t total = std::uint64_t{1} << circles.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::vector<Edge> edges = fixed;
        for (std::size_t i = 0; i < circles.size(); ++i) {
            const Edge& e = circles[i];
            edges.push_back((mask >> i) & 1 ? Edge::directed(e.b, e.a) : Edge::directed(e.a, e.b));
        }
        MixedGraph h;
        try {
            h = build_graph(g.names(), std::move(edges), oriented_class(g));
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::ClassViolation) continue;
            throw;
        }
        if (!visit(h)) return;
    }
}

} // namespace

MixedGraph orient_to_representative(const MixedGraph& g) { return orient_impl(g, std::nullopt); }

MixedGraph orient_avoiding_into(const MixedGraph& g, NodeId x) {
    if (x >= g.size()) throw Error(ErrorKind::InvalidArgument, "node id out of range");
    return orient_impl(g, x);
}

std::vector<MixedGraph> list_dag_extensions(const MixedGraph& cpdag, std::size_t limit) {
    if (cpdag.graph_class() != GraphClass::Cpdag && cpdag.graph_class() != GraphClass::Dag)
        throw Error(ErrorKind::ClassUnsupported, "list_dag_extensions needs a cpdag");
    auto wanted = unshielded_colliders(cpdag);
    std::sort(wanted.begin(), wanted.end());
    std::vector<MixedGraph> out;
    for_each_orientation(cpdag, [&](const MixedGraph& h) {
        auto got = unshielded_colliders(h);
        std::sort(got.begin(), got.end());
        if (got != wanted) return true;
        if (limit != 0 && out.size() == limit)
            throw Error(ErrorKind::TooManyExtensions,
                        "more than " + std::to_string(limit) + " extensions");
        out.push_back(h);
        return true;
    });
    return out;
}

void for_each_representative(const MixedGraph& g,
                             const std::function<bool(const MixedGraph&)>& visit) {
    for_each_orientation(g, [&](const MixedGraph& h) {
        for (const auto& t : unshielded_colliders(h)) {
            auto a = g.between(t[1], t[0]);
            auto b = g.between(t[1], t[2]);
            if (a->here != Mark::Arrow || b->here != Mark::Arrow) return true;
        }
        return visit(h);
    });
}

} // namespace adjset
