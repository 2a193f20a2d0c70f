#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adjset/graph.hpp"
#include "adjset/reach.hpp"

namespace adjset {

enum class Condition { Amenability, ForbiddenSet, Blocking };
const char* to_string(Condition c);

struct Verdict {
    bool ok = true;
    std::optional<Condition> failed;
    std::variant<std::monostate, Path, NodeSet> witness;
};

struct AmenabilityResult {
    bool ok = true;
    std::optional<Path> witness; // a proper possibly directed path with a bad first edge
};

AmenabilityResult amenable(const MixedGraph& g, const NodeSet& x, const NodeSet& y);
NodeSet forbidden_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

// Visible edges out of x that start a proper possibly directed path to y.
std::vector<Edge> backdoor_removed_edges(const MixedGraph& g, const NodeSet& x, const NodeSet& y);
MixedGraph proper_backdoor_graph(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

// Dag/Mag graph in which the blocking condition becomes m-separation.
// Partial graphs are oriented first; the removed edges come from g itself.
MixedGraph separation_graph(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

Verdict gac_verify(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

// The blocking condition checked path by path (small graphs only).
// Returns an unblocked proper definite status non-causal path if there is one.
std::optional<Path> unblocked_noncausal_path(const MixedGraph& g, const NodeSet& x,
                                             const NodeSet& y, const NodeSet& z);
// gac_verify with blocking decided by path enumeration.
Verdict gac_verify_by_paths(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                            const NodeSet& z);

NodeSet adjust_set(const MixedGraph& g, const NodeSet& x, const NodeSet& y);
std::optional<NodeSet> constructive(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                    const NodeSet& avoid);
NodeSet preprocess_exposures(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

bool backdoor_verify(const MixedGraph& dag, const NodeSet& x, const NodeSet& y, const NodeSet& z);
bool gbc_verify(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);
// Path-free variant of gbc_verify used above the enumeration limit.
bool gbc_verify_by_reach(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                         const NodeSet& z);
std::optional<NodeSet> constructive_backdoor(const MixedGraph& dag, const NodeSet& x,
                                             const NodeSet& y);
std::optional<NodeSet> constructive_gbc(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

enum class Criterion { Gac, Gbc, Bc };
enum class Pattern { P1, P2, P3, P4 };
const char* to_string(Criterion c);
const char* to_string(Pattern p);

struct Diagnosis {
    Criterion criterion;
    bool exists = false;
    std::vector<Pattern> triggered;
};

enum class Hint {
    NotAmenable,          // no adjustment set of any kind
    ExposureForbidden,    // amenable and x meets Forb: no adjustment set
    OutcomesBelowExposures, // Y within PossDe(X) in a Dag/Cpdag: Forb test decides
    GacIffBc,             // no directed path between exposures in a Dag
    GacIffGbc,            // no exposure-to-exposure pattern that separates the two
};
const char* to_string(Hint h);

struct DiagnosisReport {
    bool amenable = true;
    std::vector<Diagnosis> criteria; // Gac, Gbc and, for a Dag, Bc
    std::vector<Hint> hints;
    std::optional<NodeSet> gac_set;
    std::optional<NodeSet> gbc_set;
    std::optional<NodeSet> bc_set;
};

DiagnosisReport diagnose(const MixedGraph& g, const NodeSet& x, const NodeSet& y);

} // namespace adjset
