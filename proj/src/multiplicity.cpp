#include "treemult/multiplicity.hpp"

#include <algorithm>

#include "treemult/canonical_table.hpp"

namespace treemult {

std::uint32_t NodeClassification::max_class_size() const {
    std::uint32_t best = 0;
    for (std::uint32_t s : class_size) best = std::max(best, s);
    return best;
}

std::uint32_t NodeClassification::max_witness() const {
    std::uint32_t best = max_class_size();
    for (std::size_t v = 0; v < class_of.size(); ++v)
        if (class_size[class_of[v]] == best) return static_cast<std::uint32_t>(v);
    return 0;
}

namespace {

// Bottom-up interning; reverse preorder visits children before parents.
std::vector<std::uint32_t> subtree_codes(const RootedTree& t, bool sort_children) {
    const std::size_t n = t.n();
    std::vector<std::uint32_t> codes(n);
    CanonicalTable table;
    std::vector<std::uint32_t> key;
    for (std::size_t v = n; v-- > 0;) {
        auto ch = t.children(v);
        key.clear();
        for (std::uint32_t c : ch) key.push_back(codes[c]);
        if (sort_children) std::sort(key.begin(), key.end());
        codes[v] = table.intern(key);
    }
    return codes;
}

// class(v) = intern((code(v), class(parent(v)))); the root pairs with a
// sentinel. Equal ids propagate the whole root-path signature.
NodeClassification classes_from_codes(const RootedTree& t, const std::vector<std::uint32_t>& codes,
                                      Relation rel) {
    const std::size_t n = t.n();
    NodeClassification cls;
    cls.relation = rel;
    cls.class_of.resize(n);
    CanonicalTable table;
    cls.class_of[0] = table.intern_pair(codes[0], kNoParent);
    for (std::size_t v = 1; v < n; ++v)
        cls.class_of[v] = table.intern_pair(codes[v], cls.class_of[t.parent(v)]);
    cls.class_size.assign(table.size(), 0);
    for (std::uint32_t c : cls.class_of) ++cls.class_size[c];
    return cls;
}

}  // namespace

std::vector<std::uint32_t> ordered_codes(const RootedTree& t) { return subtree_codes(t, false); }

std::vector<std::uint32_t> unordered_codes(const RootedTree& t) { return subtree_codes(t, true); }

NodeClassification identical_classes(const RootedTree& t) {
    return classes_from_codes(t, ordered_codes(t), Relation::Identical);
}

std::uint32_t leaf_multiplicity(const RootedTree& t) {
    return identical_classes(t).max_class_size();
}

NodeClassification rooted_orbit_classes(const RootedTree& t) {
    return classes_from_codes(t, unordered_codes(t), Relation::RootedCongruent);
}

std::uint32_t automorphic_multiplicity(const RootedTree& t) {
    return rooted_orbit_classes(t).max_class_size();
}

std::vector<std::uint32_t> center(const FreeTree& f) {
    const std::size_t n = f.n();
    if (n <= 2) {
        std::vector<std::uint32_t> all(n);
        for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<std::uint32_t>(v);
        return all;
    }
    std::vector<std::uint32_t> deg(n);
    std::vector<char> removed(n, 0);
    std::vector<std::uint32_t> layer;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(f.degree(v));
        if (deg[v] <= 1) layer.push_back(static_cast<std::uint32_t>(v));
    }
    std::size_t remaining = n;
    std::vector<std::uint32_t> next;
    while (remaining > 2) {
        next.clear();
        for (std::uint32_t v : layer) {
            removed[v] = 1;
            --remaining;
        }
        for (std::uint32_t v : layer)
            for (std::uint32_t w : f.neighbors(v))
                if (!removed[w] && --deg[w] == 1) next.push_back(w);
        layer.swap(next);
    }
    std::vector<std::uint32_t> c;
    for (std::size_t v = 0; v < n; ++v)
        if (!removed[v]) c.push_back(static_cast<std::uint32_t>(v));
    return c;
}

namespace {

// A rooted ordered rendering of a free tree for orbit computations. In the
// bicentral case node 0 is a virtual root over the central edge and real
// nodes start at preorder index 1.
struct RootedView {
    RootedTree tree;
    std::vector<std::uint32_t> pre_to_orig;  // kNoParent for the virtual root
};

RootedView rooted_view(const FreeTree& f, const std::vector<std::uint32_t>& centers) {
    const std::size_t n = f.n();
    const bool bicentral = centers.size() == 2;
    std::vector<std::uint32_t> degrees;
    std::vector<std::uint32_t> pre_to_orig;
    degrees.reserve(n + bicentral);
    pre_to_orig.reserve(n + bicentral);
    if (bicentral) {
        degrees.push_back(2);
        pre_to_orig.push_back(kNoParent);
    }
    // Iterative preorder DFS; neighbors visited in adjacency order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;  // (node, parent)
    auto visit = [&](std::uint32_t root, std::uint32_t blocked) {
        stack.emplace_back(root, blocked);
        while (!stack.empty()) {
            auto [v, p] = stack.back();
            stack.pop_back();
            auto nbrs = f.neighbors(v);
            std::uint32_t deg = 0;
            for (std::uint32_t w : nbrs) deg += (w != p);
            degrees.push_back(deg);
            pre_to_orig.push_back(v);
            for (std::size_t i = nbrs.size(); i-- > 0;)
                if (nbrs[i] != p) stack.emplace_back(nbrs[i], v);
        }
    };
    if (bicentral) {
        visit(centers[0], centers[1]);
        visit(centers[1], centers[0]);
    } else {
        visit(centers[0], kNoParent);
    }
    return {RootedTree::from_degree_sequence(std::move(degrees)), std::move(pre_to_orig)};
}

}  // namespace

NodeClassification free_orbit_classes(const FreeTree& f) {
    const std::size_t n = f.n();
    RootedView view = rooted_view(f, center(f));
    NodeClassification vc = rooted_orbit_classes(view.tree);

    // Translate back to the input's node numbering, dropping the virtual
    // root and re-densifying class ids by first occurrence.
    NodeClassification out;
    out.relation = Relation::FreeCongruent;
    out.class_of.assign(n, 0);
    std::vector<std::uint32_t> view_class_of_orig(n);
    for (std::size_t pre = 0; pre < view.pre_to_orig.size(); ++pre) {
        std::uint32_t orig = view.pre_to_orig[pre];
        if (orig != kNoParent) view_class_of_orig[orig] = vc.class_of[pre];
    }
    std::vector<std::uint32_t> remap(vc.class_size.size(), kNoParent);
    std::uint32_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t& m = remap[view_class_of_orig[v]];
        if (m == kNoParent) m = next++;
        out.class_of[v] = m;
    }
    out.class_size.assign(next, 0);
    for (std::uint32_t c : out.class_of) ++out.class_size[c];
    return out;
}

std::uint32_t free_multiplicity(const FreeTree& f) {
    return free_orbit_classes(f).max_class_size();
}

std::uint32_t max_leaf_degree(const RootedTree& t) {
    std::uint32_t best = 0;
    for (std::size_t v = 0; v < t.n(); ++v) {
        std::uint32_t count = 0;
        for (std::uint32_t c : t.children(v)) count += (t.degree(c) == 0);
        best = std::max(best, count);
    }
    return best;
}

BigInt aut_order(const FreeTree& f) {
    RootedView view = rooted_view(f, center(f));
    const RootedTree& t = view.tree;
    std::vector<std::uint32_t> codes = unordered_codes(t);
    BigInt order = 1;
    std::vector<std::uint32_t> key;
    for (std::size_t v = 0; v < t.n(); ++v) {
        auto ch = t.children(v);
        if (ch.size() < 2) continue;
        key.clear();
        for (std::uint32_t c : ch) key.push_back(codes[c]);
        std::sort(key.begin(), key.end());
        std::size_t run = 1;
        for (std::size_t i = 1; i <= key.size(); ++i) {
            if (i < key.size() && key[i] == key[i - 1]) {
                ++run;
                order *= static_cast<unsigned>(run);  // running factorial
            } else {
                run = 1;
            }
        }
    }
    return order;
}

MultiplicityReport analyze_tree(const RootedTree& t) {
    MultiplicityReport r;
    NodeClassification ident = identical_classes(t);
    r.S = ident.max_class_size();
    r.witness_S = ident.max_witness();
    NodeClassification orbits = rooted_orbit_classes(t);
    r.M = orbits.max_class_size();
    r.witness_M = orbits.max_witness();
    NodeClassification free_orbits = free_orbit_classes(to_free(t));
    r.MF = free_orbits.max_class_size();
    r.witness_MF = free_orbits.max_witness();
    for (std::size_t v = 0; v < t.n(); ++v) {
        std::uint32_t count = 0;
        for (std::uint32_t c : t.children(v)) count += (t.degree(c) == 0);
        if (count > r.L) {
            r.L = count;
            r.witness_L = static_cast<std::uint32_t>(v);
        }
    }
    return r;
}

}  // namespace treemult
