#pragma once

#include "aldim/bitstring.hpp"
#include "aldim/ratio.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace aldim {

/// A deterministic bit source: random access, reproducible from its
/// provenance string. Finite sources know their length.
class SequenceSource {
public:
    int bit(std::uint64_t i) const;
    std::optional<std::uint64_t> length() const;
    const std::string& provenance() const;

    BitString prefix(std::size_t n) const;

    /// Seeded pseudorandom bits, P(bit = 1) = p. The generator is
    /// xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D); a zero
    /// seed is replaced by 0x9E3779B97F4A7C15. Draw i is compared against p
    /// exactly: bit = 1 iff u_i · den(p) < num(p) · 2^64.
    static SequenceSource bernoulli(const Ratio& p, std::uint64_t seed, std::uint64_t length);

    /// Infinite repetition of a nonempty pattern.
    static SequenceSource periodic(const BitString& pattern);

    /// Insert k-1 zeros after every bit: output[m] = inner[m/k] if k | m,
    /// else 0.
    static SequenceSource dilute(SequenceSource inner, std::uint64_t k);

    /// Finite source over explicit bits.
    static SequenceSource from_bits(BitString bits, std::string provenance);

    struct Impl;
    explicit SequenceSource(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

/// Sequence file I/O. Text format: ASCII '0'/'1', line breaks ignored.
/// Packed format: a header line "bits <N>", then N bits at 8 per byte,
/// most significant bit first.
SequenceSource read_sequence(std::istream& in, std::string provenance = "stream");
SequenceSource read_sequence_file(const std::string& path);
void write_sequence(std::ostream& out, const SequenceSource& X, std::uint64_t n, bool packed = false);
void write_sequence_file(const std::string& path, const SequenceSource& X, std::uint64_t n,
                         bool packed = false);

} // namespace aldim
