#include "treemult/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace treemult::oracle {

namespace {

NodeClassification classes_from_ids(std::vector<std::uint32_t> raw, Relation rel) {
    NodeClassification cls;
    cls.relation = rel;
    std::vector<std::uint32_t> remap(raw.size(), kNoParent);
    std::uint32_t next = 0;
    cls.class_of.resize(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) {
        std::uint32_t& m = remap[raw[v]];
        if (m == kNoParent) m = next++;
        cls.class_of[v] = m;
    }
    cls.class_size.assign(next, 0);
    for (std::uint32_t c : cls.class_of) ++cls.class_size[c];
    return cls;
}

// Plain disjoint-set for orbit accumulation.
struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
    std::vector<std::uint32_t> parent;
};

NodeClassification orbits_from_perms(std::size_t n,
                                     const std::vector<std::vector<std::uint32_t>>& perms,
                                     Relation rel) {
    UnionFind uf(n);
    for (const auto& p : perms)
        for (std::size_t v = 0; v < n; ++v) uf.unite(static_cast<std::uint32_t>(v), p[v]);
    std::vector<std::uint32_t> raw(n);
    for (std::size_t v = 0; v < n; ++v) raw[v] = uf.find(static_cast<std::uint32_t>(v));
    return classes_from_ids(std::move(raw), rel);
}

bool ordered_iso(const RootedTree& a, std::uint32_t va, const RootedTree& b, std::uint32_t vb) {
    if (&a == &b && va == vb) return true;
    if (a.degree(va) != b.degree(vb)) return false;
    auto ca = a.children(va);
    auto cb = b.children(vb);
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (!ordered_iso(a, ca[i], b, cb[i])) return false;
    return true;
}

// Unordered isomorphism by backtracking over child matchings.
bool unordered_iso(const RootedTree& a, std::uint32_t va, const RootedTree& b, std::uint32_t vb);

bool match_children(const RootedTree& a, const RootedTree& b, std::span<const std::uint32_t> ca,
                    std::span<const std::uint32_t> cb, std::vector<char>& used, std::size_t i) {
    if (i == ca.size()) return true;
    for (std::size_t j = 0; j < cb.size(); ++j) {
        if (used[j] || !unordered_iso(a, ca[i], b, cb[j])) continue;
        used[j] = 1;
        if (match_children(a, b, ca, cb, used, i + 1)) {
            used[j] = 0;
            return true;
        }
        used[j] = 0;
    }
    return false;
}

bool unordered_iso(const RootedTree& a, std::uint32_t va, const RootedTree& b, std::uint32_t vb) {
    if (&a == &b && va == vb) return true;
    if (a.degree(va) != b.degree(vb)) return false;
    auto ca = a.children(va);
    auto cb = b.children(vb);
    std::vector<char> used(cb.size(), 0);
    return match_children(a, b, ca, cb, used, 0);
}

// Rooted rendering of a free tree at an arbitrary node, by direct DFS.
RootedTree root_at(const FreeTree& f, std::uint32_t root) {
    std::vector<std::uint32_t> degrees;
    degrees.reserve(f.n());
    auto rec = [&](auto&& self, std::uint32_t v, std::uint32_t p) -> void {
        auto nbrs = f.neighbors(v);
        std::uint32_t deg = 0;
        for (std::uint32_t w : nbrs) deg += (w != p);
        degrees.push_back(deg);
        for (std::uint32_t w : nbrs)
            if (w != p) self(self, w, v);
    };
    rec(rec, root, kNoParent);
    return RootedTree::from_degree_sequence(std::move(degrees));
}

}  // namespace

TreeEnumeration enumerate_ordered_trees(std::size_t n) {
    if (n < 1 || n > 12)
        throw Error("enumerate_ordered_trees supports 1 <= n <= 12, got n = " + std::to_string(n));
    TreeEnumeration e;
    e.size = n;
    std::vector<std::uint32_t> seq(n);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t sum) -> void {
        if (pos == n) {
            e.items.push_back(RootedTree::from_degree_sequence(seq));
            return;
        }
        // Ballot: after placing position pos (1-based t=pos+1), partial sums
        // must exceed t-1 for t < n and hit n-1 exactly at t = n.
        for (std::size_t d = 0; sum + d <= n - 1; ++d) {
            std::size_t t = pos + 1;
            std::size_t s = sum + d;
            if (t < n ? (s >= t) : (s == n - 1)) {
                seq[pos] = static_cast<std::uint32_t>(d);
                self(self, pos + 1, s);
            }
        }
    };
    rec(rec, 0, 0);
    return e;
}

NodeClassification identical_classes_bruteforce(const RootedTree& t) {
    const std::size_t n = t.n();
    if (n > 200)
        throw Error("identical_classes_bruteforce supports n <= 200, got n = " + std::to_string(n));
    // Root paths, deepest node first.
    std::vector<std::vector<std::uint32_t>> path(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t w = static_cast<std::uint32_t>(v);
        while (w != kNoParent) {
            path[v].push_back(w);
            w = t.parent(w);
        }
    }
    auto equivalent = [&](std::size_t v, std::size_t w) {
        if (path[v].size() != path[w].size()) return false;
        for (std::size_t j = 0; j < path[v].size(); ++j)
            if (!ordered_iso(t, path[v][j], t, path[w][j])) return false;
        return true;
    };
    std::vector<std::uint32_t> raw(n);
    std::vector<std::uint32_t> reps;
    for (std::size_t v = 0; v < n; ++v) {
        bool found = false;
        for (std::uint32_t r : reps)
            if (equivalent(v, r)) {
                raw[v] = raw[r];
                found = true;
                break;
            }
        if (!found) {
            raw[v] = static_cast<std::uint32_t>(v);
            reps.push_back(static_cast<std::uint32_t>(v));
        }
    }
    return classes_from_ids(std::move(raw), Relation::Identical);
}

std::vector<std::vector<std::uint32_t>> rooted_automorphisms(const RootedTree& t) {
    const std::size_t n = t.n();
    if (n > 10)
        throw Error("rooted_automorphisms supports n <= 10, got n = " + std::to_string(n));
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> perm(n, kNoParent);
    // Agenda of subtree pairs still to map; children matched in all
    // unordered-isomorphic ways.
    auto descend = [&](auto&& self, std::vector<std::pair<std::uint32_t, std::uint32_t>> agenda)
        -> void {
        if (agenda.empty()) {
            out.push_back(perm);
            return;
        }
        auto [a, b] = agenda.back();
        agenda.pop_back();
        perm[a] = b;
        auto ca = t.children(a);
        auto cb = t.children(b);
        std::vector<char> used(cb.size(), 0);
        auto assign = [&](auto&& inner, std::size_t i) -> void {
            if (i == ca.size()) {
                self(self, agenda);
                return;
            }
            for (std::size_t j = 0; j < cb.size(); ++j) {
                if (used[j] || !unordered_iso(t, ca[i], t, cb[j])) continue;
                used[j] = 1;
                agenda.emplace_back(ca[i], cb[j]);
                inner(inner, i + 1);
                agenda.pop_back();
                used[j] = 0;
            }
        };
        assign(assign, 0);
    };
    descend(descend, {{0, 0}});
    return out;
}

NodeClassification rooted_orbits_bruteforce(const RootedTree& t) {
    return orbits_from_perms(t.n(), rooted_automorphisms(t), Relation::RootedCongruent);
}

std::vector<std::vector<std::uint32_t>> free_automorphisms(const FreeTree& f) {
    const std::size_t n = f.n();
    if (n > 8)
        throw Error("free_automorphisms supports n <= 8, got n = " + std::to_string(n));
    std::vector<std::uint32_t> mask(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::uint32_t w : f.neighbors(v)) mask[v] |= 1u << w;
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<std::vector<std::uint32_t>> out;
    do {
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            std::uint32_t mapped = 0;
            for (std::uint32_t m = mask[v]; m != 0; m &= m - 1) {
                unsigned w = static_cast<unsigned>(std::countr_zero(m));
                mapped |= 1u << perm[w];
            }
            ok = mapped == mask[perm[v]];
        }
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

NodeClassification free_orbits_bruteforce(const FreeTree& f) {
    return orbits_from_perms(f.n(), free_automorphisms(f), Relation::FreeCongruent);
}

NodeClassification free_orbits_pairwise(const FreeTree& f) {
    const std::size_t n = f.n();
    if (n > 16)
        throw Error("free_orbits_pairwise supports n <= 16, got n = " + std::to_string(n));
    std::vector<RootedTree> rootings;
    rootings.reserve(n);
    for (std::size_t v = 0; v < n; ++v) rootings.push_back(root_at(f, static_cast<std::uint32_t>(v)));
    std::vector<std::uint32_t> raw(n);
    std::vector<std::uint32_t> reps;
    for (std::size_t v = 0; v < n; ++v) {
        bool found = false;
        for (std::uint32_t r : reps)
            if (unordered_iso(rootings[v], 0, rootings[r], 0)) {
                raw[v] = raw[r];
                found = true;
                break;
            }
        if (!found) {
            raw[v] = static_cast<std::uint32_t>(v);
            reps.push_back(static_cast<std::uint32_t>(v));
        }
    }
    return classes_from_ids(std::move(raw), Relation::FreeCongruent);
}

double conditioned_probability(const OffspringDistribution& d, const RootedTree& t) {
    double w = 1.0;
    for (std::uint32_t deg : t.degrees()) w *= d.pmf(deg);
    return w;
}

std::vector<double> conditioned_law(const OffspringDistribution& d, const TreeEnumeration& e) {
    std::vector<double> law(e.items.size());
    double z = 0.0;
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        law[i] = conditioned_probability(d, e.items[i]);
        z += law[i];
    }
    if (z <= 0.0)
        throw Error("no tree of size " + std::to_string(e.size) + " has positive weight");
    for (double& p : law) p /= z;
    return law;
}

}  // namespace treemult::oracle
