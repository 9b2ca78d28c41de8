#include "treemult/tree.hpp"

#include <algorithm>
#include <numeric>

namespace treemult {

namespace {

// Checks sum and ballot conditions; throws on violation.
void validate_degrees(std::span<const std::uint32_t> degrees) {
    const std::size_t n = degrees.size();
    if (n == 0) throw SumMismatch(0, 0);
    long long sum = 0;
    for (std::uint32_t d : degrees) sum += d;
    if (sum != static_cast<long long>(n) - 1) throw SumMismatch(n, sum);
    long long partial = 0;
    for (std::size_t t = 1; t < n; ++t) {
        partial += degrees[t - 1];
        if (partial <= static_cast<long long>(t) - 1) throw PrematureClose(t);
    }
}

}  // namespace

void RootedTree::build_links() {
    const std::size_t n = degrees_.size();
    parent_.assign(n, kNoParent);
    child_off_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) child_off_[v + 1] = child_off_[v] + degrees_[v];
    child_list_.assign(n == 0 ? 0 : n - 1, 0);
    std::vector<std::uint32_t> next_slot(child_off_.begin(), child_off_.end() - 1);
    // Preorder scan with an explicit ancestor stack of open nodes.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> open;  // (node, children left)
    for (std::size_t v = 0; v < n; ++v) {
        if (v > 0) {
            auto& [p, left] = open.back();
            parent_[v] = p;
            child_list_[next_slot[p]++] = static_cast<std::uint32_t>(v);
            if (--left == 0) open.pop_back();
        }
        if (degrees_[v] > 0) open.emplace_back(static_cast<std::uint32_t>(v), degrees_[v]);
    }
}

RootedTree RootedTree::from_degree_sequence(std::vector<std::uint32_t> degrees) {
    validate_degrees(degrees);
    RootedTree t;
    t.degrees_ = std::move(degrees);
    t.build_links();
    return t;
}

RootedTree RootedTree::path(std::size_t n) {
    if (n == 0) throw Error("path(n) requires n >= 1");
    std::vector<std::uint32_t> d(n, 1);
    d[n - 1] = 0;
    return from_degree_sequence(std::move(d));
}

RootedTree RootedTree::star(std::size_t n) {
    if (n == 0) throw Error("star(n) requires n >= 1");
    std::vector<std::uint32_t> d(n, 0);
    d[0] = static_cast<std::uint32_t>(n - 1);
    return from_degree_sequence(std::move(d));
}

RootedTree RootedTree::complete_kary(unsigned k, unsigned height) {
    if (k < 2) throw Error("complete_kary requires k >= 2");
    std::vector<std::uint32_t> d;
    // Recursive preorder emit: nodes above the last level get degree k.
    auto emit = [&](auto&& self, unsigned depth) -> void {
        if (depth == height) {
            d.push_back(0);
            return;
        }
        d.push_back(k);
        for (unsigned c = 0; c < k; ++c) self(self, depth + 1);
    };
    emit(emit, 0);
    return from_degree_sequence(std::move(d));
}

FreeTree to_free(const RootedTree& t) {
    const std::size_t n = t.n();
    FreeTree f;
    f.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t deg = t.degree(v) + (v > 0 ? 1 : 0);
        f.offsets_[v + 1] = f.offsets_[v] + static_cast<std::uint32_t>(deg);
    }
    f.adj_.assign(n == 0 ? 0 : 2 * (n - 1), 0);
    std::vector<std::uint32_t> slot(f.offsets_.begin(), f.offsets_.end() - 1);
    // Parent first, then children: lists come out sorted since parent < v
    // and children are increasing in preorder.
    for (std::size_t v = 1; v < n; ++v) f.adj_[slot[v]++] = t.parent(v);
    for (std::size_t v = 0; v < n; ++v)
        for (std::uint32_t c : t.children(v)) f.adj_[slot[v]++] = c;
    return f;
}

FreeTree::FreeTree(const std::vector<std::vector<std::uint32_t>>& adjacency) {
    const std::size_t n = adjacency.size();
    if (n == 0) throw Error("free tree must have at least one node");
    offsets_.assign(n + 1, 0);
    std::size_t total = 0;
    for (std::size_t v = 0; v < n; ++v) {
        total += adjacency[v].size();
        offsets_[v + 1] = static_cast<std::uint32_t>(total);
    }
    if (total != 2 * (n - 1)) throw Error("free tree must have exactly n-1 edges");
    adj_.reserve(total);
    for (const auto& nbrs : adjacency)
        adj_.insert(adj_.end(), nbrs.begin(), nbrs.end());
    for (std::size_t v = 0; v < n; ++v)
        for (std::uint32_t w : neighbors(v)) {
            if (w >= n) throw Error("free tree adjacency references a missing node");
            auto back = neighbors(w);
            if (std::count(back.begin(), back.end(), static_cast<std::uint32_t>(v)) != 1)
                throw Error("free tree adjacency is not symmetric");
        }
    // n-1 edges + connectivity check via one traversal.
    std::vector<char> visited(n, 0);
    std::vector<std::uint32_t> stack{0};
    visited[0] = 1;
    std::size_t seen = 1;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t w : neighbors(v))
            if (!visited[w]) {
                visited[w] = 1;
                ++seen;
                stack.push_back(w);
            }
    }
    if (seen != n) throw Error("free tree adjacency is not connected");
}

std::pair<std::size_t, RootedTree> cycle_rotate(std::span<const std::uint32_t> seq) {
    const std::size_t n = seq.size();
    if (n == 0) throw SumMismatch(0, 0);
    long long sum = 0;
    for (std::uint32_t d : seq) sum += d;
    if (sum != static_cast<long long>(n) - 1) throw SumMismatch(n, sum);
    // Prefix walk of (xi - 1): the valid rotation starts right after the
    // first position attaining the minimum prefix sum.
    long long prefix = 0, best = 0;
    std::size_t argmin = 0;  // 0 means "no rotation"; positions are 1-based
    for (std::size_t t = 1; t <= n; ++t) {
        prefix += static_cast<long long>(seq[t - 1]) - 1;
        if (prefix < best) {
            best = prefix;
            argmin = t;
        }
    }
    std::size_t r = argmin % n;
    std::vector<std::uint32_t> rotated(n);
    for (std::size_t i = 0; i < n; ++i) rotated[i] = seq[(r + i) % n];
    return {r, RootedTree::from_degree_sequence(std::move(rotated))};
}

}  // namespace treemult
