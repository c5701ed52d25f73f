#pragma once

#include "aldim/approx.hpp"
#include "aldim/bitstring.hpp"
#include "aldim/coder.hpp"
#include "aldim/learner.hpp"
#include "aldim/ratio.hpp"
#include "aldim/sequence.hpp"
#include "aldim/trie.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace aldim {

/// A formal sum Σ_d count[d]·2^{-s·d}, compared exactly for rational s.
/// Equality reduces to rational vectors over the basis 2^{-r/q}; strict
/// comparisons separate by adaptive-precision intervals.
class CostVec {
public:
    CostVec() = default;
    static CostVec single(unsigned depth) {
        CostVec v;
        v.counts_[depth] = 1;
        return v;
    }

    void add_term(unsigned depth, const Int& count = Int(1)) {
        if (count.is_zero()) return;
        counts_[depth] += count;
    }
    CostVec& operator+=(const CostVec& other) {
        for (const auto& [d, c] : other.counts_) counts_[d] += c;
        return *this;
    }

    bool empty() const { return counts_.empty(); }
    const std::map<unsigned, Int>& counts() const { return counts_; }

    /// Exact value when s·d is an integer for every carried depth.
    std::optional<Ratio> exact(const Ratio& s) const;

    /// Certified interval at the given precision.
    ApproxReal bounds(const Ratio& s, unsigned precision) const;

    /// Sign of (this − other) under exponent s: -1, 0, +1. Zero is exact
    /// (coefficient vectors match); otherwise intervals are refined up to
    /// max_precision and indistinct is returned if they never separate.
    struct Comparison {
        int sign = 0;
        bool exact = true; // false only when the precision cap was hit
    };
    Comparison compare(const CostVec& other, const Ratio& s, unsigned max_precision = 256) const;
    Comparison compare_value(const Ratio& value, const Ratio& s,
                             unsigned max_precision = 256) const;

private:
    /// Coefficients over the basis {2^{-r/q} : r = 0..q-1} for s = p/q.
    std::map<unsigned, Ratio> residue_form(const Ratio& s) const;

    std::map<unsigned, Int> counts_; // depth -> multiplicity
};

// ---------------------------------------------------------------------------

struct CoverSolution {
    std::vector<BitString> antichain; // prefix-free, lengths in [k, depth]
    Ratio s;
    unsigned k = 0;
    CostVec cost;
    std::optional<Ratio> cost_exact;
    ApproxReal cost_bounds;
};

/// Minimal Σ 2^{-s|w|} over all prefix-set covers of the trie's depth
/// slice with member lengths ≥ k, by exact tree dynamic programming.
/// Ties prefer the shallower cover. k must not exceed the trie depth.
CoverSolution min_cover_cost(const PrefixTrie& gamma, unsigned k, const Ratio& s,
                             unsigned precision = 128);

// ---------------------------------------------------------------------------

struct HausdorffEstimate {
    Ratio lower, upper; // bracketing interval for the root of cost = 1
    unsigned iterations = 0;
    bool exact_root = false; // the root landed exactly on a bisection point
};

/// Bisection in s for min_cover_cost(gamma, k, s) = 1; the cost is
/// strictly decreasing in s on nonempty tries. Finite-depth surrogate of
/// the dimension: the root at fixed k, not a limit over k.
HausdorffEstimate hausdorff_estimate(const PrefixTrie& gamma, unsigned k, const Ratio& tol);

// ---------------------------------------------------------------------------

struct BoxDimensionRow {
    unsigned n = 0;
    std::uint64_t count = 0;
    double ratio = 0.0; // log2(count)/n
};

struct BoxDimensionSummary {
    std::vector<BoxDimensionRow> rows; // n = max(n_min,1) .. depth
    double max_ratio = 0.0;            // the limsup surrogate
    unsigned argmax = 0;
};

BoxDimensionSummary box_dimension_estimate(const PrefixTrie& gamma, unsigned n_min);
BoxDimensionSummary box_dimension_estimate(const std::vector<std::uint64_t>& slice_counts,
                                           unsigned n_min);

// ---------------------------------------------------------------------------

struct LearnerCover {
    std::vector<BitString> antichain; // first-hitting threshold strings
    unsigned k = 0, depth = 0;
    std::uint64_t r = 0;
    Ratio s;
    CostVec cost;
    ApproxReal cost_bounds;
    Ratio bound;              // 2^{-r}
    bool within_bound = true; // violation indicates a failed measure condition
};

/// The threshold cover: minimal strings of length in [k, depth] whose
/// yes-count reaches r + (1-s)·|w|, with the Σ 2^{-s|w|} ≤ 2^{-r} check.
LearnerCover extract_learner_cover(const Learner& l, unsigned k, std::uint64_t r, const Ratio& s,
                                   unsigned depth);

// ---------------------------------------------------------------------------

struct SliceSet {
    unsigned n = 0;
    Ratio s;
    std::vector<BitString> members; // lexicographic
    bool bound_asserted = false;    // learner was tagged measure-verified
    bool bound_ok = true;           // |members| ≤ 2^{s·n} (exact q-th power test)
};

/// All length-n strings with AVG_l ≥ 1−s, in lexicographic order.
SliceSet enumerate_slice(const Learner& l, unsigned n, const Ratio& s);

/// Number of code bits for a slice element of length n: ⌈s·n⌉.
std::uint64_t slice_code_width(const Ratio& s, unsigned n);

/// Fixed-width slice codes: the index of w in the lexicographic
/// enumeration of its slice, in exactly ⌈s·n⌉ bits. Caches enumerations
/// per length.
class SliceCodec {
public:
    SliceCodec(Learner l, Ratio s) : l_(std::move(l)), s_(std::move(s)) {}

    BitString encode(const BitString& w);
    BitString decode(unsigned n, const BitString& code);
    const SliceSet& slice(unsigned n);

private:
    Learner l_;
    Ratio s_;
    std::map<unsigned, SliceSet> cache_;
};

BitString slice_encode(const Learner& l, const Ratio& s, const BitString& w);
BitString slice_decode(const Learner& l, const Ratio& s, unsigned n, const BitString& code);

// ---------------------------------------------------------------------------

enum class DimMode { liminf, limsup };

struct CompressionRow {
    std::uint64_t n = 0;
    std::uint64_t codelen = 0;
    double ratio = 0.0;
};

struct CompressionEstimate {
    DimMode mode = DimMode::liminf;
    std::string coder;
    std::uint64_t horizon = 0;
    std::vector<CompressionRow> rows;
    double tail_min = 0.0, tail_max = 0.0; // over rows with n > horizon/2
    double estimate = 0.0;                 // tail_min (liminf) or tail_max (limsup)
};

/// codelen(X↾n)/n on a sample grid up to the horizon; the tail-min is the
/// liminf proxy (dimension), the tail-max the limsup proxy (strong
/// dimension). Code lengths certify upper bounds only: the estimate is
/// one-sided by construction. Every sampled prefix is round-trip decoded.
CompressionEstimate compression_dim_estimate(const SequenceSource& X, const Coder& coder,
                                             std::uint64_t horizon, DimMode mode,
                                             unsigned samples = 64);

} // namespace aldim
