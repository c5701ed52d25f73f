#include "aldim/approx.hpp"

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace aldim {

namespace mp = boost::multiprecision;

ApproxReal ApproxReal::intersect(const ApproxReal& other) const {
    ApproxReal out;
    out.lower = lower > other.lower ? lower : other.lower;
    out.upper = upper < other.upper ? upper : other.upper;
    out.precision = precision > other.precision ? precision : other.precision;
    if (out.lower > out.upper)
        throw std::logic_error("ApproxReal::intersect: disjoint enclosures of one value");
    return out;
}

Int iroot_floor(const Int& n, unsigned k) {
    if (n < 0) throw std::domain_error("iroot_floor: negative radicand");
    if (k == 0) throw std::domain_error("iroot_floor: zeroth root");
    if (n == 0 || n == 1 || k == 1) return n;

    // Newton's method from an over-estimate; converges monotonically down.
    unsigned bits = static_cast<unsigned>(mp::msb(n)) + 1;
    Int x = Int(1) << (bits / k + 1);
    while (true) {
        Int xk1 = mp::pow(x, k - 1);
        Int y = ((k - 1) * x + n / xk1) / k;
        if (y >= x) break;
        x = y;
    }
    while (mp::pow(x, k) > n) --x;
    while (mp::pow(x + 1, k) <= n) ++x;
    return x;
}

namespace {

// Fixed-point helpers, F fractional bits, directed rounding.
Int fix_sqrt(const Int& v, unsigned F, bool round_up) {
    Int s = v << F;
    Int r = mp::sqrt(s);
    if (round_up && r * r != s) ++r;
    return r;
}

Int fix_mul(const Int& x, const Int& y, unsigned F, bool round_up) {
    Int p = x * y;
    Int r = p >> F;
    if (round_up && (r << F) != p) ++r;
    return r;
}

// Enclosure of 2^(a/b) for 0 < a < b, via the binary expansion of a/b and
// the repeated-square-root ladder 2^(1/2), 2^(1/4), ...
void pow2_frac_fixpoint(const Int& a, const Int& b, unsigned precision, Int& lo, Int& hi,
                        unsigned& F_out) {
    const unsigned P = precision;
    const unsigned F = precision + 16;
    F_out = F;

    std::vector<bool> digits(P);
    Int t = a;
    for (unsigned i = 0; i < P; ++i) {
        t <<= 1;
        digits[i] = t >= b;
        if (digits[i]) t -= b;
    }
    const bool exact_tail = t == 0;

    Int acc_lo = Int(1) << F, acc_hi = Int(1) << F;
    Int r_lo = Int(2) << F, r_hi = Int(2) << F; // current ladder value 2^(2^-i)
    for (unsigned i = 0; i < P; ++i) {
        r_lo = fix_sqrt(r_lo, F, false);
        r_hi = fix_sqrt(r_hi, F, true);
        if (digits[i]) {
            acc_lo = fix_mul(acc_lo, r_lo, F, false);
            acc_hi = fix_mul(acc_hi, r_hi, F, true);
        }
    }
    if (!exact_tail) acc_hi = fix_mul(acc_hi, r_hi, F, true); // tail < 2^-P

    lo = acc_lo;
    hi = acc_hi;
}

struct Pow2Key {
    Int a, b;
    long long e;
    unsigned prec;
    bool operator<(const Pow2Key& o) const {
        return std::tie(e, prec, a, b) < std::tie(o.e, o.prec, o.a, o.b);
    }
};

} // namespace

ApproxReal pow2_bounds(const Ratio& x, unsigned precision) {
    ApproxReal out;
    out.precision = precision;

    Int e_int = x.floor();
    if (e_int < -(1 << 26) || e_int > (1 << 26))
        throw std::domain_error("pow2_bounds: exponent out of supported range");
    long long e = e_int.convert_to<long long>();

    Ratio frac = x - Ratio(e_int); // in [0, 1)
    if (frac.is_zero()) {
        out.lower = out.upper = Ratio::pow2(e);
        return out;
    }

    static std::mutex cache_mutex;
    static std::map<Pow2Key, std::pair<Ratio, Ratio>> cache;
    Pow2Key key{frac.num(), frac.den(), e, precision};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            out.lower = it->second.first;
            out.upper = it->second.second;
            return out;
        }
    }

    Int lo, hi;
    unsigned F = 0;
    pow2_frac_fixpoint(frac.num(), frac.den(), precision, lo, hi, F);
    Ratio scale = Ratio::pow2(e - static_cast<long long>(F));
    out.lower = Ratio(lo) * scale;
    out.upper = Ratio(hi) * scale;

    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(key, std::make_pair(out.lower, out.upper));
    }
    return out;
}

ApproxReal dyadic_bounds(const Ratio& x, unsigned precision) {
    ApproxReal out;
    out.precision = precision;
    Ratio scaled = x * Ratio::pow2(precision);
    Int lo = scaled.floor();
    out.lower = Ratio(lo) * Ratio::pow2(-static_cast<long long>(precision));
    out.upper = scaled.is_integer() ? out.lower
                                    : Ratio(lo + 1) * Ratio::pow2(-static_cast<long long>(precision));
    return out;
}

} // namespace aldim
