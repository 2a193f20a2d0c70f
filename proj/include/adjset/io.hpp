#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adjset/graph.hpp"

namespace adjset {

// Text format:
//   type: dag|cpdag|mag|pag
//   nodes: A B C        (optional; fixes node order, declares isolated nodes)
//   A -> B              (also <-, <->, o-o, o->, <-o)
// '#' starts a comment. Nodes are numbered by first appearance.
MixedGraph parse_graph(std::string_view text);
std::string serialize_graph(const MixedGraph& g);
MixedGraph load_graph_file(const std::string& path);

// Runs the command line tool; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace adjset
