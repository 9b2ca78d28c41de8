#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treemult/errors.hpp"

namespace treemult {

inline constexpr std::uint32_t kNoParent = 0xFFFFFFFFu;

// A rooted ordered tree stored as its preorder degree sequence, with parent
// and children arrays derived at construction. Immutable afterwards.
class RootedTree {
public:
    // Validates the ballot conditions: sum(xi) = n-1 and every proper partial
    // sum exceeds t-1. Throws SumMismatch / PrematureClose.
    static RootedTree from_degree_sequence(std::vector<std::uint32_t> degrees);

    // Deterministic builders.
    static RootedTree path(std::size_t n);
    static RootedTree star(std::size_t n);
    // Complete k-ary tree of height L: k^L leaves, (k^L - 1)/(k - 1)
    // internal nodes, all of degree k.
    static RootedTree complete_kary(unsigned k, unsigned height);

    std::size_t n() const { return degrees_.size(); }
    const std::vector<std::uint32_t>& degrees() const { return degrees_; }
    std::uint32_t degree(std::size_t v) const { return degrees_[v]; }
    std::uint32_t parent(std::size_t v) const { return parent_[v]; }  // kNoParent for root
    std::span<const std::uint32_t> children(std::size_t v) const {
        return {child_list_.data() + child_off_[v], degrees_[v]};
    }

private:
    RootedTree() = default;
    void build_links();  // assumes degrees_ already validated

    std::vector<std::uint32_t> degrees_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> child_off_;
    std::vector<std::uint32_t> child_list_;
};

// Undirected view of a tree: symmetric adjacency in CSR form.
class FreeTree {
public:
    // From raw neighbor lists; validates symmetry, edge count and
    // connectivity.
    explicit FreeTree(const std::vector<std::vector<std::uint32_t>>& adjacency);

    std::size_t n() const { return offsets_.size() - 1; }
    std::span<const std::uint32_t> neighbors(std::size_t v) const {
        return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

private:
    friend FreeTree to_free(const RootedTree&);
    FreeTree() = default;

    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> adj_;
};

// Drops the parent-child orientation; node indices are preserved.
FreeTree to_free(const RootedTree& t);

// Dwass rotation: for a sequence summing to n-1, returns the unique cyclic
// shift r such that seq[r..] + seq[..r] satisfies the ballot conditions,
// together with the resulting tree. Throws SumMismatch.
std::pair<std::size_t, RootedTree> cycle_rotate(std::span<const std::uint32_t> seq);

}  // namespace treemult
