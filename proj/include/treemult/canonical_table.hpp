#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace treemult {

// Interns structural keys (tuples of child codes, or (code, parent-class)
// pairs) into dense identifiers starting at 0. Exact keys, no probabilistic
// hashing: equal ids iff equal keys. One instance per invocation; not
// thread-safe.
class CanonicalTable {
public:
    std::uint32_t intern(std::span<const std::uint32_t> key) {
        switch (key.size()) {
            case 0:
                if (!has_empty_) {
                    has_empty_ = true;
                    empty_id_ = next_++;
                }
                return empty_id_;
            case 1: return lookup(map1_, key[0]);
            case 2: return lookup(map2_, pack(key[0], key[1]));
            default: {
                key_buf_.assign(key.begin(), key.end());
                auto [pos, inserted] = mapn_.try_emplace(key_buf_, next_);
                if (inserted) ++next_;
                return pos->second;
            }
        }
    }

    std::uint32_t intern_pair(std::uint32_t a, std::uint32_t b) {
        return lookup(map2_, pack(a, b));
    }

    std::uint32_t size() const { return next_; }

private:
    static std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    template <typename Map, typename Key>
    std::uint32_t lookup(Map& m, Key k) {
        auto [pos, inserted] = m.try_emplace(k, next_);
        if (inserted) ++next_;
        return pos->second;
    }

    struct VecHash {
        std::size_t operator()(const std::vector<std::uint32_t>& v) const {
            std::uint64_t h = 0xcbf29ce484222325ull;
            for (std::uint32_t x : v) {
                h ^= x;
                h *= 0x100000001b3ull;
                h ^= h >> 29;
            }
            return static_cast<std::size_t>(h);
        }
    };

    std::uint32_t next_ = 0;
    bool has_empty_ = false;
    std::uint32_t empty_id_ = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> map1_;
    std::unordered_map<std::uint64_t, std::uint32_t> map2_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> mapn_;
    std::vector<std::uint32_t> key_buf_;
};

}  // namespace treemult
