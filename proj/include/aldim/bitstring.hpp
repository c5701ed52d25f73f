#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aldim {

/// A finite binary string, most-significant-bit first. The empty string is
/// the root of Cantor space; prefixes name cylinders.
class BitString {
public:
    BitString() = default;

    explicit BitString(std::string_view text) {
        bits_.reserve(text.size());
        for (char c : text) {
            if (c == '0')
                bits_.push_back(0);
            else if (c == '1')
                bits_.push_back(1);
            else
                throw std::invalid_argument("BitString: expected '0' or '1', got '" +
                                            std::string(1, c) + "'");
        }
    }

    static BitString zeros(std::size_t n) { return repeated(0, n); }
    static BitString ones(std::size_t n) { return repeated(1, n); }

    static BitString repeated(int bit, std::size_t n) {
        BitString w;
        w.bits_.assign(n, static_cast<std::uint8_t>(bit & 1));
        return w;
    }

    /// The i-th string of length n in lexicographic order (index as big-endian bits).
    static BitString from_index(std::uint64_t index, std::size_t n) {
        if (n < 64 && index >= (std::uint64_t{1} << n))
            throw std::out_of_range("BitString::from_index: index does not fit in n bits");
        BitString w;
        w.bits_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            w.bits_[i] = static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1);
        return w;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int bit(std::size_t i) const { return bits_[i]; }
    int operator[](std::size_t i) const { return bits_[i]; }

    void push_back(int bit) { bits_.push_back(static_cast<std::uint8_t>(bit & 1)); }
    void pop_back() { bits_.pop_back(); }

    BitString extended(int bit) const {
        BitString w = *this;
        w.push_back(bit);
        return w;
    }

    /// First n bits (w restricted to n); n must not exceed the length.
    BitString prefix(std::size_t n) const {
        if (n > size()) throw std::out_of_range("BitString::prefix: n exceeds length");
        BitString w;
        w.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
        return w;
    }

    bool is_prefix_of(const BitString& other) const {
        if (size() > other.size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i] != other.bits_[i]) return false;
        return true;
    }

    bool is_proper_prefix_of(const BitString& other) const {
        return size() < other.size() && is_prefix_of(other);
    }

    std::string str() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    friend bool operator==(const BitString& a, const BitString& b) = default;

    /// Lexicographic ordering; shorter strings precede their extensions.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        std::size_t n = a.size() < b.size() ? a.size() : b.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.bits_[i] != b.bits_[i])
                return a.bits_[i] < b.bits_[i] ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
        }
        return a.size() <=> b.size();
    }

private:
    std::vector<std::uint8_t> bits_;
};

/// The ⊑-minimal elements of a set of strings: a prefix-free set covering
/// the same cylinders. Output is sorted lexicographically.
std::vector<BitString> minimal_prefix_set(std::vector<BitString> strings);

} // namespace aldim
