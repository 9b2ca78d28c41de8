#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "treemult/tree.hpp"

namespace treemult {

using BigInt = boost::multiprecision::cpp_int;

enum class Relation { Identical, RootedCongruent, FreeCongruent };

// Per-node equivalence classes for one of the three relations. Class ids are
// dense from 0 and deterministic for a given tree.
struct NodeClassification {
    Relation relation = Relation::Identical;
    std::vector<std::uint32_t> class_of;    // node -> class id
    std::vector<std::uint32_t> class_size;  // class id -> member count

    std::uint32_t size_of(std::size_t v) const { return class_size[class_of[v]]; }
    std::uint32_t max_class_size() const;
    // Smallest node index belonging to a class of maximal size.
    std::uint32_t max_witness() const;
};

// Ordered canonical code per node: equal codes iff the subtrees are
// identical as rooted ordered trees.
std::vector<std::uint32_t> ordered_codes(const RootedTree& t);

// Unordered (AHU) canonical code per node: equal codes iff the subtrees are
// isomorphic as rooted unordered trees.
std::vector<std::uint32_t> unordered_codes(const RootedTree& t);

// The relation "identical": equal root-path lengths with identical ordered
// subtree shapes along the whole path. sigma(v) = size_of(v).
NodeClassification identical_classes(const RootedTree& t);

// S(T): the maximum of sigma over all nodes.
std::uint32_t leaf_multiplicity(const RootedTree& t);

// Orbits under root-fixing automorphisms. mu(root, v) = size_of(v).
NodeClassification rooted_orbit_classes(const RootedTree& t);

// M(T): the maximum rooted-orbit size.
std::uint32_t automorphic_multiplicity(const RootedTree& t);

// One or two node indices left after iterated leaf stripping.
std::vector<std::uint32_t> center(const FreeTree& f);

// Orbits under all automorphisms of the free tree. mu_F(v) = size_of(v).
NodeClassification free_orbit_classes(const FreeTree& f);

// M_F(T): the maximum free-orbit size.
std::uint32_t free_multiplicity(const FreeTree& f);

// L(T): the maximum, over nodes, of the number of leaf children.
std::uint32_t max_leaf_degree(const RootedTree& t);

// |Aut(F)| as an exact big integer: the tree is rooted at its center (with a
// virtual root over the central edge in the bicentral case) and the orders
// of the child-permutation groups are multiplied out.
BigInt aut_order(const FreeTree& f);

struct MultiplicityReport {
    std::uint32_t S = 0, M = 0, MF = 0, L = 0;
    std::uint32_t witness_S = 0, witness_M = 0, witness_MF = 0, witness_L = 0;
};

// S, M, M_F and L of one tree with witness nodes (preorder indices).
MultiplicityReport analyze_tree(const RootedTree& t);

}  // namespace treemult
