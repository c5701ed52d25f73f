#pragma once

#include "aldim/ratio.hpp"

namespace aldim {

/// A dyadic interval certified to contain a real value. Refining the
/// precision never widens the interval.
struct ApproxReal {
    Ratio lower;
    Ratio upper;
    unsigned precision = 0; // fractional bits of the endpoints

    bool contains(const Ratio& x) const { return lower <= x && x <= upper; }
    Ratio width() const { return upper - lower; }
    double midpoint_double() const { return ((lower + upper) / Ratio(2)).to_double(); }

    /// Intersection with another enclosure of the same value.
    ApproxReal intersect(const ApproxReal& other) const;
};

/// floor(n^(1/k)) for n ≥ 0, k ≥ 1.
Int iroot_floor(const Int& n, unsigned k);

/// Dyadic enclosure of 2^x with `precision` fractional bits. The exponent
/// may be any rational; width is at most 2^(floor(x)+1-precision).
ApproxReal pow2_bounds(const Ratio& x, unsigned precision);

/// Dyadic enclosure of an arbitrary rational at the given precision
/// (exact if x is already dyadic).
ApproxReal dyadic_bounds(const Ratio& x, unsigned precision);

} // namespace aldim
