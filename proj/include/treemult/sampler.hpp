#pragma once

#include <cstdint>
#include <vector>

#include "treemult/offspring.hpp"
#include "treemult/random_source.hpp"
#include "treemult/tree.hpp"

namespace treemult {

struct SamplerOptions {
    // Cap on elementary offspring draws across all rejection attempts.
    std::uint64_t attempt_budget = 1'000'000'000ull;
};

// Smallest feasible size >= n for the distribution's span: (n'-1) mod span = 0.
std::size_t next_feasible_size(const OffspringDistribution& d, std::size_t n);

// Conditioned Bienayme-Galton-Watson tree of exactly n nodes: i.i.d. degree
// draws rejected until they sum to n-1 (aborting an attempt as soon as the
// running sum exceeds n-1), then the Dwass rotation. Throws InfeasibleSize
// when (n-1) mod span != 0 and AttemptBudgetExceeded past the draw budget.
RootedTree sample_conditioned(const OffspringDistribution& d, std::size_t n, RandomSource& rng,
                              const SamplerOptions& opts = {});

// Unconditioned tree by depth-first generation; throws BudgetExceeded if it
// would grow past node_budget nodes.
RootedTree sample_unconditioned(const OffspringDistribution& d, RandomSource& rng,
                                std::size_t node_budget);

// Truncated Kesten tree: tree plus the spine of expanded marked nodes
// (preorder indices, root first; length == depth).
struct KestenTree {
    RootedTree tree;
    std::vector<std::uint32_t> spine;
};

// Depth-k truncation of Kesten's infinite tree: marked nodes draw their
// degree from the size-biased law P{zeta=i} = i p_i, mark a uniform child,
// and root independent unconditioned trees at the others; everything is cut
// at distance depth from the root.
KestenTree sample_kesten_truncated(const OffspringDistribution& d, std::size_t depth,
                                   RandomSource& rng);

}  // namespace treemult
