#include "aldim/trie.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace aldim {

namespace {
constexpr std::size_t kMaxNodes = std::size_t{1} << 23;
}

std::int32_t PrefixTrie::ensure_child(std::int32_t parent, int bit) {
    if (parent == kAbsent) {
        if (nodes_.empty()) nodes_.emplace_back();
        return 0;
    }
    std::int32_t idx = nodes_[static_cast<std::size_t>(parent)].child[bit & 1];
    if (idx == kAbsent) {
        if (nodes_.size() >= kMaxNodes) throw std::length_error("PrefixTrie: node limit exceeded");
        idx = static_cast<std::int32_t>(nodes_.size());
        nodes_[static_cast<std::size_t>(parent)].child[bit & 1] = idx;
        nodes_.emplace_back();
    }
    return idx;
}

void PrefixTrie::fill_subtree(std::int32_t idx, unsigned at_depth) {
    if (at_depth >= depth_) return;
    for (int b = 0; b < 2; ++b) fill_subtree(ensure_child(idx, b), at_depth + 1);
}

void PrefixTrie::insert(const BitString& w) {
    if (w.size() > depth_) throw std::invalid_argument("PrefixTrie::insert: string longer than depth");
    std::int32_t cur = ensure_child(kAbsent, 0); // root
    for (std::size_t i = 0; i < w.size(); ++i) cur = ensure_child(cur, w.bit(i));
    fill_subtree(cur, static_cast<unsigned>(w.size()));
}

bool PrefixTrie::contains(const BitString& w) const {
    if (empty() || w.size() > depth_) return false;
    std::int32_t cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        cur = nodes_[static_cast<std::size_t>(cur)].child[w.bit(i)];
        if (cur == kAbsent) return false;
    }
    return true;
}

std::vector<std::uint64_t> PrefixTrie::slice_counts() const {
    std::vector<std::uint64_t> counts(depth_ + 1, 0);
    if (empty()) return counts;
    std::vector<std::int32_t> frontier{0};
    counts[0] = 1;
    for (unsigned d = 0; d < depth_; ++d) {
        std::vector<std::int32_t> next;
        next.reserve(frontier.size() * 2);
        for (auto idx : frontier)
            for (int b = 0; b < 2; ++b)
                if (auto c = nodes_[static_cast<std::size_t>(idx)].child[b]; c != kAbsent)
                    next.push_back(c);
        counts[d + 1] = next.size();
        frontier = std::move(next);
    }
    return counts;
}

std::vector<BitString> PrefixTrie::slice(unsigned d) const {
    std::vector<BitString> out;
    if (empty() || d > depth_) return out;
    BitString path;
    auto rec = [&](auto&& self, std::int32_t idx, unsigned at) -> void {
        if (at == d) {
            out.push_back(path);
            return;
        }
        for (int b = 0; b < 2; ++b) {
            auto c = nodes_[static_cast<std::size_t>(idx)].child[b];
            if (c == kAbsent) continue;
            path.push_back(b);
            self(self, c, at + 1);
            path.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

std::vector<BitString> PrefixTrie::to_antichain() const {
    std::vector<BitString> out;
    if (empty()) return out;

    // Pass 1: which subtrees are completely present down to the depth.
    std::vector<char> full(nodes_.size(), 0);
    auto mark = [&](auto&& self, std::int32_t idx, unsigned at) -> bool {
        if (at == depth_) return full[static_cast<std::size_t>(idx)] = 1;
        const auto& nd = nodes_[static_cast<std::size_t>(idx)];
        bool f = nd.child[0] != kAbsent && nd.child[1] != kAbsent;
        for (int b = 0; b < 2; ++b)
            if (nd.child[b] != kAbsent)
                f = self(self, nd.child[b], at + 1) && f;
        return full[static_cast<std::size_t>(idx)] = f ? 1 : 0;
    };
    mark(mark, 0, 0);

    // Pass 2: emit topmost full nodes.
    BitString path;
    auto emit = [&](auto&& self, std::int32_t idx) -> void {
        if (full[static_cast<std::size_t>(idx)]) {
            out.push_back(path);
            return;
        }
        const auto& nd = nodes_[static_cast<std::size_t>(idx)];
        for (int b = 0; b < 2; ++b) {
            if (nd.child[b] == kAbsent) continue;
            path.push_back(b);
            self(self, nd.child[b]);
            path.pop_back();
        }
    };
    emit(emit, 0);
    return out;
}

PrefixTrie PrefixTrie::full(unsigned depth) {
    PrefixTrie t(depth);
    t.insert(BitString());
    return t;
}

PrefixTrie PrefixTrie::single_path(const BitString& leaf) {
    PrefixTrie t(static_cast<unsigned>(leaf.size()));
    t.insert(leaf);
    return t;
}

PrefixTrie PrefixTrie::diluted(unsigned depth, unsigned k) {
    if (k == 0) throw std::invalid_argument("PrefixTrie::diluted: k must be >= 1");
    PrefixTrie t(depth);
    BitString path;
    auto rec = [&](auto&& self, unsigned at) -> void {
        if (at == depth) {
            t.insert(path);
            return;
        }
        if (at % k == 0) {
            for (int b = 0; b < 2; ++b) {
                path.push_back(b);
                self(self, at + 1);
                path.pop_back();
            }
        } else {
            path.push_back(0);
            self(self, at + 1);
            path.pop_back();
        }
    };
    rec(rec, 0);
    return t;
}

PrefixTrie PrefixTrie::from_strings(unsigned depth, const std::vector<BitString>& strings) {
    PrefixTrie t(depth);
    for (const auto& w : strings) t.insert(w);
    return t;
}

PrefixTrie PrefixTrie::read_prefix_set(std::istream& in, int depth) {
    std::vector<BitString> strings;
    std::string line;
    std::size_t max_len = 0, line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        try {
            strings.emplace_back(std::string_view(line).substr(start));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("prefix-set file: bad character on line " +
                                        std::to_string(line_no));
        }
        max_len = std::max(max_len, strings.back().size());
    }
    unsigned d = depth >= 0 ? static_cast<unsigned>(depth) : static_cast<unsigned>(max_len);
    return from_strings(d, strings);
}

void PrefixTrie::write_prefix_set(std::ostream& out) const {
    for (const auto& w : to_antichain()) out << w.str() << '\n';
}

} // namespace aldim
