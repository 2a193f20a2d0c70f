#include "adjset/enumerate.hpp"

#include <cassert>

#include "adjset/adjustment.hpp"
#include "adjset/reach.hpp"

namespace adjset {

const char* to_string(EnumStatus s) {
    switch (s) {
    case EnumStatus::Complete: return "complete";
    case EnumStatus::Truncated: return "truncated";
    case EnumStatus::NotAmenable: return "not-amenable";
    }
    return "?";
}

bool exists_with_constraints(const MixedGraph& h, const NodeSet& x, const NodeSet& y,
                             const NodeSet& i, const NodeSet& r) {
    if (!i.is_subset_of(r)) return false;
    const NodeSet candidate = ancestors(h, x | y | i) & r;
    return !m_connected(h, x, y, candidate);
}

namespace {

struct Search {
    const MixedGraph& h;
    const NodeSet& x;
    const NodeSet& y;
    const std::function<bool(const NodeSet&)>& visit;
    EnumStats* stats;
    std::size_t limit;
    std::size_t yielded = 0;
    std::size_t since_yield = 0;
    bool stopped = false;
    bool truncated = false;

    bool feasible(const NodeSet& in, const NodeSet& r) {
        ++since_yield;
        if (stats) {
            ++stats->separation_tests;
            stats->max_tests_between_yields = std::max(stats->max_tests_between_yields, since_yield);
        }
        return exists_with_constraints(h, x, y, in, r);
    }

    void emit(const NodeSet& z) {
        if (limit != 0 && yielded == limit) {
            truncated = stopped = true;
            return;
        }
        ++yielded;
        since_yield = 0;
        if (!visit(z)) stopped = true;
    }

    // Sets Z with in ⊆ Z ⊆ r; branches on the highest free node, leaving it out first.
    void run(const NodeSet& in, const NodeSet& r) {
        if (stopped) return;
        const NodeSet free = r - in;
        if (free.empty()) {
            emit(in);
            return;
        }
        NodeId v = 0;
        for (NodeId u : free) v = u;
        NodeSet without = r;
        without.erase(v);
        if (feasible(in, without)) run(in, without);
        if (stopped) return;
        NodeSet with = in;
        with.insert(v);
        if (feasible(with, r)) run(with, r);
    }
};

bool separates(const MixedGraph& h, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    return !m_connected(h, x, y, z);
}

} // namespace

EnumStatus for_each_adjustment_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                   const EnumConstraints& c,
                                   const std::function<bool(const NodeSet&)>& visit,
                                   EnumStats* stats) {
    if (!amenable(g, x, y).ok) return EnumStatus::NotAmenable;
    const std::size_t n = g.size();
    const NodeSet forb = forbidden_set(g, x, y);
    const NodeSet barred = x | y | forb;
    const NodeSet i = c.must_include.value_or(NodeSet(n));
    NodeSet r = c.allowed.value_or(NodeSet::full(n)) - barred;
    if (i.universe() != n || r.universe() != n)
        throw Error(ErrorKind::InvalidArgument, "constraint sets do not match the graph");
    if (!i.is_subset_of(r)) return EnumStatus::Complete;

    const MixedGraph h = separation_graph(g, x, y);

    if (!c.minimal_only) {
        auto checked = [&](const NodeSet& z) {
            assert(gac_verify(g, x, y, z).ok);
            return visit(z);
        };
        Search s{h, x, y, checked, stats, c.limit};
        if (s.feasible(i, r)) s.run(i, r);
        return s.truncated ? EnumStatus::Truncated : EnumStatus::Complete;
    }

    // Minimal sets lie within the ancestors of x, y and i.
    const NodeSet r_min = r & ancestors(h, x | y | i);
    std::size_t found = 0;
    bool truncated = false;
    auto counting = [&](const NodeSet& z) {
        for (NodeId v : z - i) {
            NodeSet smaller = z;
            smaller.erase(v);
            if (stats) ++stats->separation_tests;
            if (separates(h, x, y, smaller)) return true;
        }
        if (c.limit != 0 && found == c.limit) {
            truncated = true;
            return false;
        }
        ++found;
        return visit(z);
    };
    Search s{h, x, y, counting, stats, 0};
    if (s.feasible(i, r_min)) s.run(i, r_min);
    return truncated ? EnumStatus::Truncated : EnumStatus::Complete;
}

EnumResult list_adjustment_sets(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                const EnumConstraints& c, EnumStats* stats) {
    EnumResult res;
    res.status = for_each_adjustment_set(g, x, y, c, [&](const NodeSet& z) {
        res.sets.push_back(z);
        return true;
    }, stats);
    return res;
}

} // namespace adjset
