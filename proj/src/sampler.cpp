#include "treemult/sampler.hpp"

#include <algorithm>

namespace treemult {

namespace {

// Inverse-CDF draw from a (values, cum) table. Tables are short and
// front-loaded, so a linear scan wins over binary search.
std::uint32_t draw_table(const std::vector<std::uint32_t>& values, const std::vector<double>& cum,
                         RandomSource& rng) {
    double u = rng.next_double();
    std::size_t m = cum.size();
    if (m > 16) {
        std::size_t idx = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
        return values[idx < m ? idx : m - 1];
    }
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (u < cum[i]) return values[i];
    return values[m - 1];
}

}  // namespace

std::size_t next_feasible_size(const OffspringDistribution& d, std::size_t n) {
    if (n == 0) n = 1;
    std::size_t r = (n - 1) % d.span();
    return r == 0 ? n : n + (d.span() - r);
}

RootedTree sample_conditioned(const OffspringDistribution& d, std::size_t n, RandomSource& rng,
                              const SamplerOptions& opts) {
    if (n == 0) throw InfeasibleSize(0, d.span(), d.name());
    if ((n - 1) % d.span() != 0) throw InfeasibleSize(n, d.span(), d.name());

    const auto& values = d.table_values();
    const auto& cum = d.table_cum();
    const std::uint64_t target = n - 1;
    std::vector<std::uint32_t> degrees(n);
    std::uint64_t draws = 0;
    for (;;) {
        std::uint64_t sum = 0;
        std::size_t i = 0;
        for (; i < n; ++i) {
            std::uint32_t x = draw_table(values, cum, rng);
            if (++draws > opts.attempt_budget) throw AttemptBudgetExceeded(opts.attempt_budget);
            sum += x;
            if (sum > target) break;  // early abort, restart the attempt
            degrees[i] = x;
        }
        if (i == n && sum == target) break;
    }
    return cycle_rotate(degrees).second;
}

namespace {

constexpr std::size_t kNoDepthCap = static_cast<std::size_t>(-1);

// Emits an unconditioned subtree in preorder onto out. Nodes at
// depth_left == 0 are truncated to leaves without drawing. Iterative so
// budget-capped generation cannot exhaust the call stack.
void generate_subtree(const OffspringDistribution& d, RandomSource& rng,
                      std::vector<std::uint32_t>& out, std::size_t depth_left,
                      std::size_t node_budget) {
    const auto& values = d.table_values();
    const auto& cum = d.table_cum();
    // (children still to emit, depth budget for those children)
    std::vector<std::pair<std::uint32_t, std::size_t>> open;
    std::size_t depth = depth_left;
    for (;;) {
        if (out.size() >= node_budget) throw BudgetExceeded(node_budget);
        std::uint32_t deg = depth == 0 ? 0 : draw_table(values, cum, rng);
        out.push_back(deg);
        if (deg > 0) {
            open.emplace_back(deg, depth == kNoDepthCap ? kNoDepthCap : depth - 1);
        } else {
            while (!open.empty() && --open.back().first == 0) open.pop_back();
            if (open.empty()) return;
        }
        if (!open.empty()) depth = open.back().second;
    }
}

}  // namespace

RootedTree sample_unconditioned(const OffspringDistribution& d, RandomSource& rng,
                                std::size_t node_budget) {
    if (node_budget == 0) throw BudgetExceeded(0);
    std::vector<std::uint32_t> degrees;
    generate_subtree(d, rng, degrees, kNoDepthCap, node_budget);
    return RootedTree::from_degree_sequence(std::move(degrees));
}

KestenTree sample_kesten_truncated(const OffspringDistribution& d, std::size_t depth,
                                   RandomSource& rng) {
    const auto& sb_values = d.sizebiased_values();
    const auto& sb_cum = d.sizebiased_cum();
    std::vector<std::uint32_t> degrees;
    std::vector<std::uint32_t> spine;
    // Marked nodes at distance < depth expand; the marked node at distance
    // depth (and any unconditioned node there) is cut to a leaf.
    auto emit_marked = [&](auto&& self, std::size_t level) -> void {
        if (level == depth) {
            degrees.push_back(0);
            return;
        }
        spine.push_back(static_cast<std::uint32_t>(degrees.size()));
        std::uint32_t zeta = draw_table(sb_values, sb_cum, rng);
        std::uint64_t marked_child = rng.next_below(zeta);
        degrees.push_back(zeta);
        for (std::uint64_t c = 0; c < zeta; ++c) {
            if (c == marked_child)
                self(self, level + 1);
            else
                generate_subtree(d, rng, degrees, depth - level - 1,
                                 static_cast<std::size_t>(-1));
        }
    };
    emit_marked(emit_marked, 0);
    return {RootedTree::from_degree_sequence(std::move(degrees)), std::move(spine)};
}

}  // namespace treemult
