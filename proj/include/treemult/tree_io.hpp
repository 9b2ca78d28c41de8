#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "treemult/tree.hpp"

namespace treemult {

// Tree file format: per tree, the node count n followed by n preorder
// degrees, whitespace separated. '#' starts a line comment. Writers put one
// tree per line.

void write_tree(std::ostream& out, const RootedTree& t);
void write_trees(std::ostream& out, const std::vector<RootedTree>& trees);

// Reads every tree in the stream; validates each sequence.
// Throws IoError on malformed input.
std::vector<RootedTree> read_trees(std::istream& in);
std::vector<RootedTree> read_trees_file(const std::string& path);

}  // namespace treemult
