#include "adjset/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace adjset {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::ClassViolation: return "ClassViolation";
    case ErrorKind::NotADag: return "NotADag";
    case ErrorKind::ClassUnsupported: return "ClassUnsupported";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::NotDefiniteStatus: return "NotDefiniteStatus";
    case ErrorKind::NotDirectedEdge: return "NotDirectedEdge";
    case ErrorKind::NonChordalCircleComponent: return "NonChordalCircleComponent";
    case ErrorKind::TooManyExtensions: return "TooManyExtensions";
    case ErrorKind::NotDescendral: return "NotDescendral";
    case ErrorKind::NotSuperSetOfForb: return "NotSuperSetOfForb";
    case ErrorKind::NotStandardized: return "NotStandardized";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularRegression: return "SingularRegression";
    case ErrorKind::NoWitnessFound: return "NoWitnessFound";
    case ErrorKind::Parse: return "ParseError";
    }
    return "?";
}

const char* to_string(Mark m) {
    switch (m) {
    case Mark::Tail: return "tail";
    case Mark::Arrow: return "arrow";
    case Mark::Circle: return "circle";
    }
    return "?";
}

const char* to_string(GraphClass c) {
    switch (c) {
    case GraphClass::Dag: return "dag";
    case GraphClass::Cpdag: return "cpdag";
    case GraphClass::Mag: return "mag";
    case GraphClass::Pag: return "pag";
    }
    return "?";
}

Edge Edge::canonical() const {
    if (a < b) return *this;
    return {b, a, mark_b, mark_a};
}

bool Edge::is_directed() const {
    return (mark_a == Mark::Tail && mark_b == Mark::Arrow) ||
           (mark_a == Mark::Arrow && mark_b == Mark::Tail);
}

std::optional<NodeId> MixedGraph::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<NodeId>(i);
    return std::nullopt;
}

NodeId MixedGraph::id(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw Error(ErrorKind::InvalidArgument, "unknown node '" + std::string(name) + "'");
}

std::optional<Incidence> MixedGraph::between(NodeId u, NodeId v) const {
    const auto& list = adj_.at(u);
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Incidence& inc, NodeId x) { return inc.neighbor < x; });
    if (it != list.end() && it->neighbor == v) return *it;
    return std::nullopt;
}

bool MixedGraph::has_directed(NodeId u, NodeId v) const {
    auto inc = between(u, v);
    return inc && inc->here == Mark::Tail && inc->there == Mark::Arrow;
}

bool MixedGraph::has_circles() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) {
        return e.mark_a == Mark::Circle || e.mark_b == Mark::Circle;
    });
}

NodeSet MixedGraph::set_of(const std::vector<std::string>& names) const {
    NodeSet s(size());
    for (const auto& n : names) s.insert(id(n));
    return s;
}

std::vector<std::string> MixedGraph::names_of(const NodeSet& s) const {
    std::vector<std::string> out;
    for (NodeId v : s) out.push_back(names_[v]);
    return out;
}

bool MixedGraph::operator==(const MixedGraph& o) const {
    return class_ == o.class_ && names_ == o.names_ && edges_ == o.edges_;
}

MixedGraph assemble_graph(std::vector<std::string> names, std::vector<Edge> edges, GraphClass cls) {
    const std::size_t n = names.size();
    {
        std::unordered_map<std::string, std::size_t> seen;
        for (std::size_t i = 0; i < n; ++i)
            if (!seen.emplace(names[i], i).second)
                throw Error(ErrorKind::DuplicateName, "duplicate node name '" + names[i] + "'");
    }
    for (auto& e : edges) {
        if (e.a >= n || e.b >= n)
            throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
        if (e.a == e.b)
            throw Error(ErrorKind::SelfLoop, "self-loop at '" + names[e.a] + "'", {e.a});
        e = e.canonical();
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].a == edges[i - 1].a && edges[i].b == edges[i - 1].b) {
            const Edge& e = edges[i];
            const Edge& f = edges[i - 1];
            if (e.is_directed() && f.is_directed() && e.mark_a != f.mark_a)
                throw Error(ErrorKind::ClassViolation,
                            "directed cycle " + names[e.a] + " -> " + names[e.b] + " -> " + names[e.a],
                            {e.a, e.b, e.a});
            throw Error(ErrorKind::DuplicateEdge,
                        "more than one edge between '" + names[edges[i].a] + "' and '" +
                            names[edges[i].b] + "'",
                        {edges[i].a, edges[i].b});
        }

    MixedGraph g;
    g.names_ = std::move(names);
    g.class_ = cls;
    g.adj_.assign(n, {});
    for (const auto& e : edges) {
        g.adj_[e.a].push_back({e.b, e.mark_a, e.mark_b});
        g.adj_[e.b].push_back({e.a, e.mark_b, e.mark_a});
    }
    for (auto& list : g.adj_)
        std::sort(list.begin(), list.end(),
                  [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
    g.edges_ = std::move(edges);
    return g;
}

MixedGraph build_graph(std::vector<std::string> names, std::vector<Edge> edges, GraphClass cls) {
    MixedGraph g = assemble_graph(std::move(names), std::move(edges), cls);
    validate_class(g, cls);
    return g;
}

namespace {

std::string edge_text(const MixedGraph& g, const Edge& e) {
    auto end = [](Mark m, bool left) -> std::string {
        switch (m) {
        case Mark::Tail: return "-";
        case Mark::Arrow: return left ? "<" : ">";
        case Mark::Circle: return "o";
        }
        return "?";
    };
    return g.name(e.a) + " " + end(e.mark_a, true) + "-" + end(e.mark_b, false) + " " + g.name(e.b);
}

// Returns a directed cycle as a node list (first node repeated at the end), or empty.
std::vector<NodeId> find_directed_cycle(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> color(n, 0);
    std::vector<NodeId> parent(n, 0);
    for (NodeId root = 0; root < n; ++root) {
        if (color[root]) continue;
        std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            auto inc = g.incident(v);
            if (idx == inc.size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            const Incidence e = inc[idx++];
            if (e.here != Mark::Tail || e.there != Mark::Arrow) continue;
            const NodeId w = e.neighbor;
            if (color[w] == 1) {
                std::vector<NodeId> cyc{w};
                for (NodeId u = v; u != w; u = parent[u]) cyc.push_back(u);
                cyc.push_back(w);
                std::reverse(cyc.begin(), cyc.end());
                return cyc;
            }
            if (color[w] == 0) {
                color[w] = 1;
                parent[w] = v;
                stack.push_back({w, 0});
            }
        }
    }
    return {};
}

bool marks_allowed(GraphClass cls, Mark x, Mark y) {
    auto is = [&](Mark p, Mark q) { return (x == p && y == q) || (x == q && y == p); };
    switch (cls) {
    case GraphClass::Dag: return is(Mark::Tail, Mark::Arrow);
    case GraphClass::Cpdag: return is(Mark::Tail, Mark::Arrow) || is(Mark::Circle, Mark::Circle);
    case GraphClass::Mag: return is(Mark::Tail, Mark::Arrow) || is(Mark::Arrow, Mark::Arrow);
    case GraphClass::Pag: return !is(Mark::Tail, Mark::Tail) && !is(Mark::Tail, Mark::Circle);
    }
    return false;
}

} // namespace

void validate_class(const MixedGraph& g, GraphClass cls) {
    for (const auto& e : g.edges())
        if (!marks_allowed(cls, e.mark_a, e.mark_b))
            throw Error(ErrorKind::ClassViolation,
                        std::string("edge ") + edge_text(g, e) + " not allowed in a " +
                            to_string(cls),
                        {e.a, e.b});

    auto cyc = find_directed_cycle(g);
    if (!cyc.empty()) {
        std::string text;
        for (NodeId v : cyc) text += (text.empty() ? "" : " -> ") + g.name(v);
        throw Error(ErrorKind::ClassViolation, "directed cycle " + text,
                    std::vector<std::size_t>(cyc.begin(), cyc.end()));
    }

    if (cls == GraphClass::Mag || cls == GraphClass::Pag) {
        for (const auto& e : g.edges()) {
            if (e.mark_a != Mark::Arrow || e.mark_b != Mark::Arrow) continue;
            NodeSet an_a = ancestors(g, NodeSet(g.size(), {e.a}));
            NodeSet an_b = ancestors(g, NodeSet(g.size(), {e.b}));
            if (an_a.contains(e.b) || an_b.contains(e.a))
                throw Error(ErrorKind::ClassViolation,
                            "almost directed cycle through " + edge_text(g, e), {e.a, e.b});
        }
    }
}

namespace {

// Generic closure: from v, step to neighbor w when step(inc at v) holds.
template <class Step>
NodeSet closure(const MixedGraph& g, const NodeSet& s, Step step) {
    NodeSet seen = s;
    std::vector<NodeId> stack = s.to_vector();
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (const auto& inc : g.incident(v)) {
            if (!step(inc) || seen.contains(inc.neighbor)) continue;
            seen.insert(inc.neighbor);
            stack.push_back(inc.neighbor);
        }
    }
    return seen;
}

} // namespace

NodeSet parents(const MixedGraph& g, const NodeSet& s) {
    NodeSet out(g.size());
    for (NodeId v : s)
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Arrow && inc.there == Mark::Tail) out.insert(inc.neighbor);
    return out;
}

NodeSet children(const MixedGraph& g, const NodeSet& s) {
    NodeSet out(g.size());
    for (NodeId v : s)
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Tail && inc.there == Mark::Arrow) out.insert(inc.neighbor);
    return out;
}

NodeSet ancestors(const MixedGraph& g, const NodeSet& s) {
    return closure(g, s, [](const Incidence& i) {
        return i.here == Mark::Arrow && i.there == Mark::Tail;
    });
}

NodeSet descendants(const MixedGraph& g, const NodeSet& s) {
    return closure(g, s, [](const Incidence& i) {
        return i.here == Mark::Tail && i.there == Mark::Arrow;
    });
}

NodeSet poss_de(const MixedGraph& g, const NodeSet& s) {
    return closure(g, s, [](const Incidence& i) { return i.here != Mark::Arrow; });
}

NodeSet poss_an(const MixedGraph& g, const NodeSet& s) {
    return closure(g, s, [](const Incidence& i) { return i.there != Mark::Arrow; });
}

MixedGraph induced_subgraph(const MixedGraph& g, const NodeSet& s) {
    std::vector<NodeId> remap(g.size(), 0);
    std::vector<std::string> names;
    for (NodeId v : s) {
        remap[v] = static_cast<NodeId>(names.size());
        names.push_back(g.name(v));
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (s.contains(e.a) && s.contains(e.b))
            edges.push_back({remap[e.a], remap[e.b], e.mark_a, e.mark_b});
    return assemble_graph(std::move(names), std::move(edges), g.graph_class());
}

MixedGraph remove_edges(const MixedGraph& g, const std::vector<Edge>& drop) {
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        bool gone = std::any_of(drop.begin(), drop.end(), [&](const Edge& d) {
            Edge c = d.canonical();
            return c.a == e.a && c.b == e.b;
        });
        if (!gone) edges.push_back(e);
    }
    return assemble_graph(g.names(), std::move(edges), g.graph_class());
}

MixedGraph moral_graph(const MixedGraph& dag) {
    if (dag.graph_class() != GraphClass::Dag)
        throw Error(ErrorKind::NotADag, "moral_graph needs a dag");
    const std::size_t n = dag.size();
    std::vector<std::vector<bool>> link(n, std::vector<bool>(n, false));
    for (const auto& e : dag.edges()) link[e.a][e.b] = link[e.b][e.a] = true;
    for (NodeId c = 0; c < n; ++c) {
        auto pa = parents(dag, NodeSet(n, {c})).to_vector();
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j) link[pa[i]][pa[j]] = link[pa[j]][pa[i]] = true;
    }
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (link[u][v]) edges.push_back(Edge::nondirected(u, v));
    return assemble_graph(dag.names(), std::move(edges), GraphClass::Cpdag);
}

std::vector<NodeId> topological_order(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& e : g.edges()) {
        if (e.mark_a == Mark::Tail && e.mark_b == Mark::Arrow) ++indeg[e.b];
        if (e.mark_a == Mark::Arrow && e.mark_b == Mark::Tail) ++indeg[e.a];
    }
    // Min-id first among ready nodes, for a deterministic order.
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < n; ++v)
        if (!indeg[v]) ready.push_back(v);
    std::vector<NodeId> order;
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        NodeId v = *it;
        ready.erase(it);
        order.push_back(v);
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Tail && inc.there == Mark::Arrow && --indeg[inc.neighbor] == 0)
                ready.push_back(inc.neighbor);
    }
    if (order.size() != n) throw Error(ErrorKind::ClassViolation, "directed cycle");
    return order;
}

} // namespace adjset
