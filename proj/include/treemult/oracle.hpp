#pragma once

#include <cstdint>
#include <vector>

#include "treemult/multiplicity.hpp"
#include "treemult/offspring.hpp"
#include "treemult/tree.hpp"

// Exhaustive, deliberately naive reference implementations backing the
// property tests and the sampler's statistical validation. Direct recursion,
// no interning, hard size caps. Never on the hot path.
namespace treemult::oracle {

struct TreeEnumeration {
    std::size_t size = 0;
    std::vector<RootedTree> items;  // all rooted ordered trees, lex order
};

// All valid preorder degree sequences of length n in lexicographic order.
// Count equals Catalan(n-1). Enforced budget: 1 <= n <= 12.
TreeEnumeration enumerate_ordered_trees(std::size_t n);

// Pairwise comparison of full root-path subtree-shape sequences. n <= 200.
NodeClassification identical_classes_bruteforce(const RootedTree& t);

// Every root-fixing adjacency-preserving bijection, enumerated recursively
// by matching children across unordered-isomorphic subtrees. n <= 10.
std::vector<std::vector<std::uint32_t>> rooted_automorphisms(const RootedTree& t);
NodeClassification rooted_orbits_bruteforce(const RootedTree& t);

// Every vertex bijection tested for adjacency preservation. n <= 8.
std::vector<std::vector<std::uint32_t>> free_automorphisms(const FreeTree& f);
NodeClassification free_orbits_bruteforce(const FreeTree& f);

// Independent route for somewhat larger trees: v and w are free-congruent
// iff rooting the tree at v and at w gives unordered-isomorphic rooted
// trees, tested pairwise by direct backtracking. n <= 16.
NodeClassification free_orbits_pairwise(const FreeTree& f);

// Unnormalized Bienayme-Galton-Watson weight: product of p_{xi_i}.
double conditioned_probability(const OffspringDistribution& d, const RootedTree& t);

// Exact conditioned law over an enumeration (weights normalized over the
// positive-weight trees). Throws Error if every tree has weight zero.
std::vector<double> conditioned_law(const OffspringDistribution& d, const TreeEnumeration& e);

}  // namespace treemult::oracle
