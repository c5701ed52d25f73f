#pragma once

#include "aldim/approx.hpp"
#include "aldim/bitstring.hpp"
#include "aldim/measure.hpp"
#include "aldim/ratio.hpp"
#include "aldim/sequence.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aldim {

/// An exact betting strategy: a capital function d with
/// d(w0) + d(w1) = 2·d(w) and d ≥ 0. Values are exact rationals.
class Martingale {
public:
    /// Depth-first evaluator over the binary tree; keeps the capital of
    /// every node on the current path, so pop() is exact and free.
    class Walker {
    public:
        virtual ~Walker() = default;
        virtual const Ratio& value() const = 0;
        virtual void push(int bit) = 0;
        virtual void pop() = 0;
        virtual std::size_t depth() const = 0;
    };

    /// Forward-only evaluator for long traces. Queries avoid normalizing
    /// the capital, which would cost a gcd of huge coprime operands per step.
    class Cursor {
    public:
        virtual ~Cursor() = default;
        virtual void advance(int bit) = 0;
        virtual int sign() const = 0;             // sign of the capital
        virtual long long floor_log2() const = 0; // exact; requires sign() > 0
        virtual double log2_value() const = 0;    // approx; requires sign() > 0
        virtual Ratio value() const = 0;          // exact rational
    };

    Ratio value(const BitString& w) const;
    Ratio initial() const { return value(BitString()); }
    std::unique_ptr<Walker> walker() const;
    std::unique_ptr<Cursor> cursor() const;
    const std::string& name() const;

    /// Capital is a product of per-position factors:
    /// d(w) = Π_i factor(i, w[i]). Fair iff factor(i,0)+factor(i,1) = 2.
    static Martingale from_factors(std::function<Ratio(std::size_t, int)> factor,
                                   std::string name);
    /// Arbitrary capital function (used to exercise the validators).
    static Martingale from_function(std::function<Ratio(const BitString&)> eval,
                                    std::string name);
    /// Same capital scaled so that d(λ) = 1.
    Martingale normalized() const;

    struct Impl;
    explicit Martingale(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

/// One position of a betting schedule: wager `stake` (in [0,1]) of current
/// capital on the next bit being `predict`.
struct Bet {
    Ratio stake;
    int predict = 0;
};

/// d(w) = Π (2p if bit 1 else 2(1-p)): the likelihood-ratio gambler for
/// Bernoulli(p) against the fair coin. Requires 0 < p < 1.
Martingale bernoulli_likelihood_martingale(const Ratio& p);

/// Cyclic betting schedule; capital multiplies by 1±stake. Fair by
/// construction.
Martingale structured_martingale(std::vector<Bet> schedule);

/// Stake-1 bet on 0 at every position: d(w) = 2^|w| on 0^n, else 0.
Martingale all_in_on_zero_martingale();

/// d ≡ 1.
Martingale constant_martingale();

// ---------------------------------------------------------------------------

struct GaleViolation {
    BitString node;
    enum class Kind { negative, unfair, eval_error } kind;
    std::string detail;
};

struct GaleValidation {
    bool ok = true;
    std::uint64_t nodes_checked = 0;
    std::optional<GaleViolation> first; // breadth-first, then lexicographic
};

/// Exact fairness (d(w0)+d(w1) = 2 d(w)) and nonnegativity at every node
/// up to `depth`.
GaleValidation validate_martingale(const Martingale& d, unsigned depth);

/// Def.-4 validation of a capital function as a μ-s-gale:
/// d(w)μ(w)^s = d(w0)μ(w0)^s + d(w1)μ(w1)^s, for integer s exactly.
GaleValidation validate_mu_s_gale(const Martingale& d, const Measure& mu, long long s,
                                  unsigned depth);

// ---------------------------------------------------------------------------

/// An s-gale stored as (base martingale, exponent): d(w) = base(w)·2^((s-1)|w|).
/// The exponent swap keeps every decision exact for rational s.
struct SGale {
    Martingale base;
    Ratio s;

    /// Same s-gale family re-expressed at exponent s'; the base is shared.
    SGale with_exponent(const Ratio& s_prime) const { return SGale{base, s_prime}; }
};

/// Value of an s-gale at w: exact rational when (s-1)|w| is an integer,
/// certified interval otherwise.
struct GaleValue {
    std::optional<Ratio> exact;
    ApproxReal bounds;
};

GaleValue sgale_value(const SGale& g, const BitString& w, unsigned precision = 64);

/// The growth benchmark h(n) = 2^((1-s)n).
struct Order {
    Ratio s;
    Ratio log2_at(std::uint64_t n) const { return (Ratio(1) - s) * Ratio(std::uint64_t{n}); }
};

// ---------------------------------------------------------------------------

struct KolmogorovRow {
    unsigned n = 0;
    std::uint64_t antichain_size = 0;
    Ratio measure;           // λ(∪_{w∈B_n} C_w)
    Ratio bound;             // 2^{-n}
    bool tight = false;      // measure == bound
    bool pass = false;       // measure <= bound
    std::vector<BitString> antichain; // filled only when requested
};

struct KolmogorovReport {
    bool pass = true;
    unsigned depth = 0;
    Ratio initial;           // declared d(λ) used for normalization
    std::vector<KolmogorovRow> rows; // n = 0..depth
};

/// First-crossing antichains B_n = minimal w (|w| ≤ depth) with
/// d(w)/d(λ) ≥ 2^n, and the exact check λ(∪B_n) ≤ 2^{-n}.
KolmogorovReport verify_kolmogorov_inequality(const Martingale& d, unsigned depth,
                                              bool keep_antichains = false);

// ---------------------------------------------------------------------------

struct OrderTraceRow {
    std::uint64_t n = 0;
    double excess_log2 = 0.0; // log2 d(X↾n) − (1−s)n; meaningless if zero_capital
    bool zero_capital = false;
};

struct OrderTrace {
    std::vector<OrderTraceRow> rows; // n = 0..horizon
    double max_excess = 0.0, min_excess = 0.0;       // over the whole trace
    double tail_max = 0.0, tail_min = 0.0;           // over the last half
    bool hit_zero = false;
};

/// Success-against-order diagnostic: the excess log2 d(X↾n) − (1−s)n along
/// X. Exact rational capital drives the numbers; rows with capital 0 carry
/// a sentinel flag.
OrderTrace order_success_trace(const Martingale& base, const Ratio& s, const SequenceSource& X,
                               std::uint64_t horizon);

inline OrderTrace order_success_trace(const SGale& g, const SequenceSource& X,
                                      std::uint64_t horizon) {
    return order_success_trace(g.base, g.s, X, horizon);
}

} // namespace aldim
