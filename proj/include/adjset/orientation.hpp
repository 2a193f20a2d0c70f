#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "adjset/graph.hpp"

namespace adjset {

// One Dag (from a Cpdag) or Mag (from a Pag) represented by g. Dag and Mag
// inputs come back unchanged.
MixedGraph orient_to_representative(const MixedGraph& g);

// As above, but no circle edge at x is oriented into x.
MixedGraph orient_avoiding_into(const MixedGraph& g, NodeId x);

// Every Dag in the class of a Cpdag: all orientations of its o-o edges that
// are acyclic and keep exactly its v-structures. limit 0 means unbounded.
std::vector<MixedGraph> list_dag_extensions(const MixedGraph& cpdag, std::size_t limit = 0);

// Every orientation of the circle marks of a Cpdag or Pag that yields a
// valid Dag/Mag with no new unshielded collider. Small inputs only.
void for_each_representative(const MixedGraph& g,
                             const std::function<bool(const MixedGraph&)>& visit);

} // namespace adjset
