#pragma once

#include "aldim/bitstring.hpp"
#include "aldim/gale.hpp"
#include "aldim/ratio.hpp"
#include "aldim/sequence.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aldim {

/// A learning function l : {0,1}* → {yes, no}. Deterministic; yes = 1.
class Learner {
public:
    /// Depth-first evaluator with push/pop, for exhaustive scans.
    class Walker {
    public:
        virtual ~Walker() = default;
        virtual bool answer() const = 0; // l at the current node
        virtual void push(int bit) = 0;
        virtual void pop() = 0;
    };

    /// Forward-only evaluator with small state, for long traces.
    class Cursor {
    public:
        virtual ~Cursor() = default;
        virtual bool answer() const = 0;
        virtual void advance(int bit) = 0;
    };

    bool eval(const BitString& w) const;
    std::unique_ptr<Walker> walker() const;
    std::unique_ptr<Cursor> cursor() const;
    const std::string& name() const;

    bool measure_verified() const { return measure_verified_; }
    /// Copy tagged as having passed verify_measure_condition (the slice
    /// cardinality bound is only asserted for tagged learners).
    Learner with_measure_verified(bool verified = true) const {
        Learner copy = *this;
        copy.measure_verified_ = verified;
        return copy;
    }

    static Learner from_function(std::function<bool(const BitString&)> eval, std::string name);

    struct Impl;
    explicit Learner(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
    bool measure_verified_ = false;
};

/// The gale-to-learner construction: yes exactly when the running maximum
/// of the capital attains a new power of two at or above 2. The yes-count
/// along w is then max(0, floor(log2 max_{v⊑w} d(v))). Requires d(λ) = 1.
Learner build_doubling_learner(const Martingale& d);

/// Literal doubling rule (fires when d(w) ≥ 2·d(w') for some checkpoint
/// w'), for comparing against the milestone semantics. The two differ on
/// capital paths that double out of a dip; see compare_doubling_rules.
Learner build_literal_doubling_learner(const Martingale& d);

struct DoublingRuleComparison {
    std::uint64_t nodes = 0;
    std::uint64_t milestone_only = 0; // nodes where only the milestone rule fires
    std::uint64_t literal_only = 0;   // nodes where only the literal rule fires
    std::optional<BitString> first_difference;
};

/// Exhaustive diagnostic of the two doubling-rule readings up to depth.
DoublingRuleComparison compare_doubling_rules(const Martingale& d, unsigned depth);

/// AVG_l(w) = (Σ_{i=0..|w|} l(w↾i)) / |w|; the empty string averages to 0.
/// The numerator counts |w|+1 prefixes, so values may exceed 1.
Ratio path_average(const Learner& l, const BitString& w);

// ---------------------------------------------------------------------------

struct MeasureConditionRow {
    unsigned n = 0;
    std::uint64_t strings_ge = 0; // depth-length strings with ≥ n yes among their prefixes
    Ratio measure;                // strings_ge · 2^{-depth}
    Ratio bound;                  // 2^{-n}
    bool pass = false;
    bool tight = false;
};

struct MeasureConditionReport {
    bool pass = true;
    unsigned depth = 0;
    std::vector<MeasureConditionRow> rows; // n = 1..depth
    unsigned witness_n = 0;                // smallest failing n, if any
    std::vector<BitString> witness;        // first-crossing antichain for witness_n
};

/// Exact check of λ({Y : #yes among prefixes ≤ depth ≥ n}) ≤ 2^{-n} for
/// every n ≤ depth. Counts only grow with length, so a failure here
/// refutes the measure condition outright.
MeasureConditionReport verify_measure_condition(const Learner& l, unsigned depth);

// ---------------------------------------------------------------------------

/// Abstract cost of discovering a yes answer; must be ≥ 1 wherever the
/// learner says yes.
using CostOracle = std::function<std::uint64_t(const BitString&)>;

/// Charges the number of prefix evaluations needed to evaluate l(w): |w|+1.
/// Injective in |w|, so delayed firing lengths never collide along a path.
CostOracle prefix_eval_cost();

CostOracle constant_cost(std::uint64_t c);
CostOracle cost_from_map(std::map<BitString, std::uint64_t> costs);

/// The delayed learner: fires at w iff some proper prefix w' fired and
/// tau(w') = |w| - |w'|. Prefixes scheduled onto the same length merge
/// into a single yes.
Learner delay_learner(const Learner& l, CostOracle tau);

// ---------------------------------------------------------------------------

enum class UnionMode {
    paper,     // suppress the first firing attributable to each component
    decimated, // every second firing of the union, after suppressing two
};

Learner union_learners(const Learner& l1, const Learner& l2, UnionMode mode);

// ---------------------------------------------------------------------------

/// A two-argument staged approximation (w, k) ↦ rational, nondecreasing
/// in k: the computable witness of a lower-semicomputable capital.
class StagedMartingale {
public:
    StagedMartingale(std::function<Ratio(const BitString&, std::uint64_t)> eval, std::string name)
        : eval_(std::move(eval)), name_(std::move(name)) {}

    Ratio at(const BitString& w, std::uint64_t k) const { return eval_(w, k); }
    const std::string& name() const { return name_; }

    /// Stage k caps the exact capital at 2^k: min(d(w), 2^k).
    static StagedMartingale capped(const Martingale& d);

private:
    std::function<Ratio(const BitString&, std::uint64_t)> eval_;
    std::string name_;
};

/// Staged path-average witness: floor(max_{w'⊑w} log2 d̂(w',k)) / |w|,
/// clamped below at 0. Nondecreasing in k; at an exact stage it equals the
/// doubling learner's yes-count over |w|. Requires |w| ≥ 1.
Ratio avg_witness(const StagedMartingale& dk, const BitString& w, std::uint64_t k);

// ---------------------------------------------------------------------------

enum class DetectionMode { weak, s_learn };

struct DensityTrace {
    DetectionMode mode = DetectionMode::weak;
    std::uint64_t horizon = 0;
    double tail_fraction = 0.5;
    std::vector<std::uint64_t> yes_cum;       // index n: Σ_{i≤n} l(X↾i), n = 0..horizon
    std::vector<std::uint64_t> yes_positions; // prefix lengths answered yes
    Ratio tail_max, tail_min;                 // of AVG over the tail window
    Ratio s_weak, s_strong;                   // 1 − tail_max, 1 − tail_min

    Ratio avg_at(std::uint64_t n) const {
        return n == 0 ? Ratio(0) : Ratio(Int(yes_cum[n]), Int(n));
    }
};

/// Runs l along X up to the horizon. Weak mode records yes positions (the
/// finite proxy for "infinitely many"); s_learn mode also estimates the
/// limsup/liminf of AVG from the tail window.
DensityTrace detection_report(const Learner& l, const SequenceSource& X, std::uint64_t horizon,
                              DetectionMode mode, double tail_fraction = 0.5);

} // namespace aldim
