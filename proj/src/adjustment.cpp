#include "adjset/adjustment.hpp"

#include <algorithm>
#include <deque>

#include "adjset/orientation.hpp"
#include "adjset/visibility.hpp"

namespace adjset {

namespace {

constexpr std::size_t kPathNodeLimit = 16;

void require_query(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet* z) {
    const std::size_t n = g.size();
    if (x.universe() != n || y.universe() != n || (z && z->universe() != n))
        throw Error(ErrorKind::InvalidArgument, "node sets do not match the graph");
    if (x.empty() || y.empty())
        throw Error(ErrorKind::InvalidArgument, "exposures and outcomes must be non-empty");
    if (x.intersects(y) || (z && (z->intersects(x) || z->intersects(y))))
        throw Error(ErrorKind::InvalidArgument, "node sets must be pairwise disjoint");
}

bool is_visible_out(const MixedGraph& g, NodeId from, const Incidence& inc) {
    return inc.here == Mark::Tail && inc.there == Mark::Arrow && is_visible(g, from, inc.neighbor);
}

} // namespace

const char* to_string(Condition c) {
    switch (c) {
    case Condition::Amenability: return "amenability";
    case Condition::ForbiddenSet: return "forbidden-set";
    case Condition::Blocking: return "blocking";
    }
    return "?";
}

const char* to_string(Criterion c) {
    switch (c) {
    case Criterion::Gac: return "gac";
    case Criterion::Gbc: return "gbc";
    case Criterion::Bc: return "bc";
    }
    return "?";
}

const char* to_string(Pattern p) {
    switch (p) {
    case Pattern::P1: return "P1";
    case Pattern::P2: return "P2";
    case Pattern::P3: return "P3";
    case Pattern::P4: return "P4";
    }
    return "?";
}

const char* to_string(Hint h) {
    switch (h) {
    case Hint::NotAmenable: return "not-amenable";
    case Hint::ExposureForbidden: return "exposure-in-forbidden-set";
    case Hint::OutcomesBelowExposures: return "outcomes-within-possible-descendants";
    case Hint::GacIffBc: return "gac-iff-bc";
    case Hint::GacIffGbc: return "gac-iff-gbc";
    }
    return "?";
}

AmenabilityResult amenable(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    require_query(g, x, y, nullptr);
    const NodeSet reach = reaches_by_pd_path(g, y, x);
    AmenabilityResult res;
    for (NodeId s : x)
        for (const auto& inc : g.incident(s)) {
            const NodeId v = inc.neighbor;
            if (inc.here == Mark::Arrow || x.contains(v) || !reach.contains(v)) continue;
            if (is_visible_out(g, s, inc)) continue;
            auto rest = shortest_pd_path(g, v, y, x);
            if (!rest) rest = Path{{v}};
            Path p{{s}};
            p.nodes.insert(p.nodes.end(), rest->nodes.begin(), rest->nodes.end());
            if (res.ok || p.nodes.size() < res.witness->nodes.size()) {
                res.ok = false;
                res.witness = p;
            }
        }
    return res;
}

NodeSet forbidden_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    return poss_de(g, proper_pdp_nodes(g, x, y));
}

std::vector<Edge> backdoor_removed_edges(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    const NodeSet reach = reaches_by_pd_path(g, y, x);
    std::vector<Edge> out;
    for (NodeId s : x)
        for (const auto& inc : g.incident(s))
            if (!x.contains(inc.neighbor) && reach.contains(inc.neighbor) && is_visible_out(g, s, inc))
                out.push_back(Edge::directed(s, inc.neighbor));
    return out;
}

MixedGraph proper_backdoor_graph(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    return remove_edges(g, backdoor_removed_edges(g, x, y));
}

MixedGraph separation_graph(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    const auto removed = backdoor_removed_edges(g, x, y);
    if (g.graph_class() == GraphClass::Dag || g.graph_class() == GraphClass::Mag)
        return remove_edges(g, removed);
    return remove_edges(orient_to_representative(g), removed);
}

std::optional<Path> unblocked_noncausal_path(const MixedGraph& g, const NodeSet& x,
                                             const NodeSet& y, const NodeSet& z) {
    std::optional<Path> found;
    for_each_path(g, x, y, true, true, [&](const Path& p) {
        if (is_possibly_directed(g, p) || is_blocked(p, z, g)) return true;
        found = p;
        return false;
    }, {kPathNodeLimit});
    return found;
}

namespace {

// Amenability and forbidden-set conditions shared by both verification routes.
std::optional<Verdict> check_first_two(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                       const NodeSet& z) {
    require_query(g, x, y, &z);
    if (auto am = amenable(g, x, y); !am.ok) {
        Verdict v{false, Condition::Amenability, {}};
        if (am.witness) v.witness = *am.witness;
        return v;
    }
    const NodeSet bad = z & forbidden_set(g, x, y);
    if (!bad.empty()) return Verdict{false, Condition::ForbiddenSet, bad};
    return std::nullopt;
}

} // namespace

Verdict gac_verify(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    if (auto v = check_first_two(g, x, y, z)) return *v;
    const MixedGraph h = separation_graph(g, x, y);
    if (!m_connected(h, x, y, z)) return {};
    Verdict v{false, Condition::Blocking, {}};
    if (g.size() <= kPathNodeLimit)
        if (auto p = unblocked_noncausal_path(g, x, y, z)) v.witness = *p;
    return v;
}

Verdict gac_verify_by_paths(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                            const NodeSet& z) {
    if (auto v = check_first_two(g, x, y, z)) return *v;
    if (auto p = unblocked_noncausal_path(g, x, y, z)) return {false, Condition::Blocking, *p};
    return {};
}

NodeSet adjust_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    require_query(g, x, y, nullptr);
    return poss_an(g, x | y) - (x | y | forbidden_set(g, x, y));
}

std::optional<NodeSet> constructive(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                    const NodeSet& avoid) {
    require_query(g, x, y, nullptr);
    if (!forbidden_set(g, x, y).is_subset_of(avoid))
        throw Error(ErrorKind::NotSuperSetOfForb, "the excluded set must contain the forbidden set");
    if (poss_de(g, avoid) != avoid)
        throw Error(ErrorKind::NotDescendral, "the excluded set must equal its possible descendants");
    NodeSet z = adjust_set(g, x, y) - avoid;
    if (gac_verify(g, x, y, z).ok) return z;
    return std::nullopt;
}

NodeSet preprocess_exposures(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    require_query(g, x, y, nullptr);
    const NodeSet reach = reaches_by_pd_path(g, y, x);
    NodeSet out(g.size());
    for (NodeId s : x)
        for (const auto& inc : g.incident(s))
            if (inc.here != Mark::Arrow && !x.contains(inc.neighbor) && reach.contains(inc.neighbor))
                out.insert(s);
    return out;
}

bool backdoor_verify(const MixedGraph& dag, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    if (dag.graph_class() != GraphClass::Dag)
        throw Error(ErrorKind::NotADag, "the back-door criterion needs a dag");
    require_query(dag, x, y, &z);
    for (NodeId s : x) {
        const NodeSet one(dag.size(), {s});
        if (descendants(dag, one).intersects(z)) return false;
        std::vector<Edge> out;
        for (NodeId c : children(dag, one)) out.push_back(Edge::directed(s, c));
        if (m_connected(remove_edges(dag, out), one, y, z)) return false;
    }
    return true;
}

bool gbc_verify(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    require_query(g, x, y, &z);
    if (poss_de(g, x).intersects(z)) return false;
    if (g.size() > kPathNodeLimit) return gbc_verify_by_reach(g, x, y, z);
    for (NodeId s : x) {
        const NodeSet w = z | (x - NodeSet(g.size(), {s}));
        bool open = false;
        for_each_path(g, NodeSet(g.size(), {s}), y, false, true, [&](const Path& p) {
            auto first = g.between(s, p.nodes[1]);
            if (is_visible_out(g, s, *first)) return true;
            if (is_blocked(p, w, g)) return true;
            open = true;
            return false;
        }, {kPathNodeLimit});
        if (open) return false;
    }
    return true;
}

bool gbc_verify_by_reach(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                         const NodeSet& z) {
    require_query(g, x, y, &z);
    if (poss_de(g, x).intersects(z)) return false;
    const bool partial = g.graph_class() == GraphClass::Cpdag || g.graph_class() == GraphClass::Pag;
    const MixedGraph h = partial ? orient_to_representative(g) : g;
    const std::size_t n = g.size();
    for (NodeId s : x) {
        const NodeSet w = z | (x - NodeSet(n, {s}));
        const NodeSet an_w = ancestors(h, w);
        // Ball passing from s; the first edge must not be a visible edge out of s.
        std::vector<bool> visited(2 * n, false);
        std::deque<std::pair<NodeId, int>> queue;
        auto push = [&](NodeId v, int kind) {
            if (v == s || visited[2 * v + kind]) return;
            visited[2 * v + kind] = true;
            queue.push_back({v, kind});
        };
        for (const auto& inc : h.incident(s)) {
            auto orig = g.between(s, inc.neighbor);
            if (is_visible_out(g, s, *orig)) continue;
            if (y.contains(inc.neighbor)) return false;
            push(inc.neighbor, inc.there == Mark::Arrow ? 1 : 0);
        }
        while (!queue.empty()) {
            auto [v, arrived] = queue.front();
            queue.pop_front();
            for (const auto& inc : h.incident(v)) {
                bool collider = arrived == 1 && inc.here == Mark::Arrow;
                if (collider ? !an_w.contains(v) : w.contains(v)) continue;
                if (y.contains(inc.neighbor)) return false;
                push(inc.neighbor, inc.there == Mark::Arrow ? 1 : 0);
            }
        }
    }
    return true;
}

std::optional<NodeSet> constructive_backdoor(const MixedGraph& dag, const NodeSet& x,
                                             const NodeSet& y) {
    if (dag.graph_class() != GraphClass::Dag)
        throw Error(ErrorKind::NotADag, "the back-door criterion needs a dag");
    NodeSet z = adjust_set(dag, x, y) - descendants(dag, x);
    if (backdoor_verify(dag, x, y, z)) return z;
    return std::nullopt;
}

std::optional<NodeSet> constructive_gbc(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    NodeSet z = adjust_set(g, x, y) - poss_de(g, x);
    if (gbc_verify(g, x, y, z)) return z;
    return std::nullopt;
}

namespace {

// A possibly directed path of at least two edges between two exposures
// whose interior avoids the exposures.
bool exposure_to_exposure_path(const MixedGraph& g, const NodeSet& x) {
    for (NodeId s : x) {
        NodeSet seen(g.size());
        std::vector<NodeId> stack;
        for (const auto& inc : g.incident(s))
            if (inc.here != Mark::Arrow && !x.contains(inc.neighbor) && !seen.contains(inc.neighbor)) {
                seen.insert(inc.neighbor);
                stack.push_back(inc.neighbor);
            }
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (const auto& inc : g.incident(v)) {
                if (inc.here == Mark::Arrow) continue;
                const NodeId w = inc.neighbor;
                if (x.contains(w)) {
                    if (w != s) return true;
                    continue;
                }
                if (!seen.contains(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
            }
        }
    }
    return false;
}

} // namespace

DiagnosisReport diagnose(const MixedGraph& g, const NodeSet& x, const NodeSet& y) {
    require_query(g, x, y, nullptr);
    const bool is_dag = g.graph_class() == GraphClass::Dag;
    DiagnosisReport r;
    r.amenable = amenable(g, x, y).ok;
    const NodeSet forb = forbidden_set(g, x, y);
    r.gac_set = constructive(g, x, y, forb);
    r.gbc_set = constructive_gbc(g, x, y);
    if (is_dag) r.bc_set = constructive_backdoor(g, x, y);

    std::vector<Pattern> seen;
    if (!r.amenable) seen.push_back(Pattern::P1);
    if (r.amenable && !r.gac_set) seen.push_back(Pattern::P2);
    if (r.gac_set && !r.gbc_set) seen.push_back(Pattern::P3);
    if (is_dag && r.gbc_set && !r.bc_set) seen.push_back(Pattern::P4);

    auto upto = [&](Criterion c, Pattern last, bool exists) {
        Diagnosis d{c, exists, {}};
        for (Pattern p : seen)
            if (p <= last) d.triggered.push_back(p);
        r.criteria.push_back(d);
    };
    upto(Criterion::Gac, Pattern::P2, r.gac_set.has_value());
    upto(Criterion::Gbc, Pattern::P3, r.gbc_set.has_value());
    if (is_dag) upto(Criterion::Bc, Pattern::P4, r.bc_set.has_value());

    if (!r.amenable) r.hints.push_back(Hint::NotAmenable);
    if (r.amenable && x.intersects(forb)) r.hints.push_back(Hint::ExposureForbidden);
    const bool dag_or_cpdag = is_dag || g.graph_class() == GraphClass::Cpdag;
    const bool y_below = y.is_subset_of(poss_de(g, x));
    if (dag_or_cpdag && y_below) r.hints.push_back(Hint::OutcomesBelowExposures);
    if (is_dag) {
        bool chain = false;
        for (NodeId s : x)
            if (descendants(g, NodeSet(g.size(), {s})).intersects(x - NodeSet(g.size(), {s})))
                chain = true;
        if (!chain) r.hints.push_back(Hint::GacIffBc);
    }
    if (!exposure_to_exposure_path(g, x) || (dag_or_cpdag && y_below))
        r.hints.push_back(Hint::GacIffGbc);
    return r;
}

} // namespace adjset
