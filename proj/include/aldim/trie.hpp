#pragma once

#include "aldim/bitstring.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace aldim {

/// A set of depth-n binary strings stored as a binary trie: every stored
/// node's parent is stored, and the depth-n layer is exactly the set.
/// Inserting a string shorter than the depth marks its whole cylinder.
class PrefixTrie {
public:
    static constexpr std::int32_t kAbsent = -1;

    struct Node {
        std::int32_t child[2] = {kAbsent, kAbsent};
    };

    explicit PrefixTrie(unsigned depth) : depth_(depth) {}

    unsigned depth() const { return depth_; }
    bool empty() const { return nodes_.empty(); }
    std::size_t node_count() const { return nodes_.size(); }

    std::int32_t root() const { return nodes_.empty() ? kAbsent : 0; }
    const Node& node(std::int32_t idx) const { return nodes_[static_cast<std::size_t>(idx)]; }

    /// Marks the cylinder at w (materialized down to the trie depth).
    void insert(const BitString& w);

    bool contains(const BitString& w) const;

    /// |Γ↾d| for every d in [0, depth].
    std::vector<std::uint64_t> slice_counts() const;

    /// The present nodes at depth d, lexicographically.
    std::vector<BitString> slice(unsigned d) const;

    /// Minimal antichain whose cylinders reproduce the trie exactly
    /// (topmost fully-present subtrees).
    std::vector<BitString> to_antichain() const;

    static PrefixTrie full(unsigned depth);
    static PrefixTrie single_path(const BitString& leaf);
    /// Branches only at depths divisible by k; other positions are forced 0.
    /// This is the projection of the k-dilution of Cantor space.
    static PrefixTrie diluted(unsigned depth, unsigned k);
    static PrefixTrie from_strings(unsigned depth, const std::vector<BitString>& strings);

    /// Prefix-set file: one '0'/'1' string per line, '#' comments, blank
    /// lines ignored. Depth defaults to the longest string.
    static PrefixTrie read_prefix_set(std::istream& in, int depth = -1);
    void write_prefix_set(std::ostream& out) const;

private:
    std::int32_t ensure_child(std::int32_t parent, int bit);
    void fill_subtree(std::int32_t idx, unsigned at_depth);

    std::vector<Node> nodes_;
    unsigned depth_;
};

} // namespace aldim
