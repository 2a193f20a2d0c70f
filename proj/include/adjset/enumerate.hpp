#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "adjset/graph.hpp"

namespace adjset {

struct EnumConstraints {
    std::optional<NodeSet> must_include; // I; empty when absent
    std::optional<NodeSet> allowed;      // R; every admissible node when absent
    bool minimal_only = false;
    std::size_t limit = 0;               // 0 means unbounded
};

enum class EnumStatus { Complete, Truncated, NotAmenable };
const char* to_string(EnumStatus s);

struct EnumStats {
    std::size_t separation_tests = 0;
    // Largest number of separation tests between two consecutive yields.
    std::size_t max_tests_between_yields = 0;
};

// True iff some Z with i ⊆ Z ⊆ r m-separates x and y in h.
bool exists_with_constraints(const MixedGraph& h, const NodeSet& x, const NodeSet& y,
                             const NodeSet& i, const NodeSet& r);

// Streams every valid adjustment set. Sets come in ascending colex order
// (by highest differing node id). visit returns false to stop.
EnumStatus for_each_adjustment_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                   const EnumConstraints& c,
                                   const std::function<bool(const NodeSet&)>& visit,
                                   EnumStats* stats = nullptr);

struct EnumResult {
    EnumStatus status = EnumStatus::Complete;
    std::vector<NodeSet> sets;
};

EnumResult list_adjustment_sets(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                const EnumConstraints& c = {}, EnumStats* stats = nullptr);

} // namespace adjset
