#include "treemult/tree_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace treemult {

void write_tree(std::ostream& out, const RootedTree& t) {
    out << t.n();
    for (std::uint32_t d : t.degrees()) out << ' ' << d;
    out << '\n';
}

void write_trees(std::ostream& out, const std::vector<RootedTree>& trees) {
    for (const auto& t : trees) write_tree(out, t);
}

std::vector<RootedTree> read_trees(std::istream& in) {
    // Strip comments, then treat the rest as one token stream.
    std::ostringstream stripped;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        stripped << line << '\n';
    }
    std::istringstream tokens(stripped.str());
    std::vector<RootedTree> trees;
    long long n;
    while (tokens >> n) {
        if (n < 1) throw IoError("tree header n = " + std::to_string(n) + " (must be >= 1)");
        std::vector<std::uint32_t> degrees;
        degrees.reserve(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) {
            long long d;
            if (!(tokens >> d))
                throw IoError("tree truncated: expected " + std::to_string(n) +
                              " degrees, got " + std::to_string(i));
            if (d < 0) throw IoError("negative degree " + std::to_string(d));
            degrees.push_back(static_cast<std::uint32_t>(d));
        }
        try {
            trees.push_back(RootedTree::from_degree_sequence(std::move(degrees)));
        } catch (const Error& e) {
            throw IoError("invalid tree #" + std::to_string(trees.size() + 1) + ": " + e.what());
        }
    }
    if (!tokens.eof()) throw IoError("unparseable token in tree stream");
    return trees;
}

std::vector<RootedTree> read_trees_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tree file: " + path);
    return read_trees(in);
}

}  // namespace treemult
