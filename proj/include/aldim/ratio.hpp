#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aldim {

using Int = boost::multiprecision::cpp_int;

/// Exact rational number. Always in lowest terms with a positive
/// denominator; equality is structural. No operation ever rounds.
class Ratio {
public:
    Ratio() : v_(0) {}
    Ratio(int n) : v_(n) {}                // NOLINT: implicit by design
    Ratio(long long n) : v_(n) {}          // NOLINT
    Ratio(std::uint64_t n) : v_(n) {}      // NOLINT
    explicit Ratio(const Int& n) : v_(n) {}

    Ratio(const Int& num, const Int& den)
        : v_(den < 0 ? -num : num, den < 0 ? Int(-den) : validated_den(den)) {}

    /// Parses "3/4", "-2", "0.75", "1e-3". Decimal forms become exact
    /// fractions over powers of ten.
    static Ratio parse(std::string_view text);

    /// 2^e as an exact rational.
    static Ratio pow2(long long e) {
        if (e >= 0) return Ratio(Int(Int(1) << static_cast<unsigned>(e)));
        return Ratio(Int(1), Int(1) << static_cast<unsigned>(-e));
    }

    Int num() const { return boost::multiprecision::numerator(v_); }
    Int den() const { return boost::multiprecision::denominator(v_); }

    bool is_integer() const { return den() == 1; }
    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    /// Largest integer ≤ this value.
    Int floor() const;
    /// Smallest integer ≥ this value.
    Int ceil() const;

    /// floor(log2(x)) for x > 0, exact.
    long long floor_log2() const;

    /// True iff the value equals 2^e for some integer e.
    bool is_power_of_two() const;

    /// Close double approximation (log-domain safe for huge operands).
    double to_double() const;

    std::string str() const;

    Ratio operator-() const { Ratio r; r.v_ = -v_; return r; }
    Ratio& operator+=(const Ratio& o) { v_ += o.v_; return *this; }
    Ratio& operator-=(const Ratio& o) { v_ -= o.v_; return *this; }
    Ratio& operator*=(const Ratio& o) { v_ *= o.v_; return *this; }
    Ratio& operator/=(const Ratio& o) {
        if (o.v_.is_zero()) throw std::invalid_argument("Ratio: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }
    friend Ratio operator-(Ratio a, const Ratio& b) { return a -= b; }
    friend Ratio operator*(Ratio a, const Ratio& b) { return a *= b; }
    friend Ratio operator/(Ratio a, const Ratio& b) { return a /= b; }

    friend bool operator==(const Ratio& a, const Ratio& b) { return a.v_ == b.v_; }
    friend auto operator<=>(const Ratio& a, const Ratio& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    static const Int& validated_den(const Int& den) {
        if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
        return den;
    }

    boost::multiprecision::cpp_rational v_;
};

/// log2 as a double, accurate to ~1 ulp even for huge operands; exact for
/// powers of two. Requires x > 0.
double log2_approx(const Ratio& x);

/// log2 of a positive integer, same accuracy contract.
double log2_approx(const Int& x);

/// floor(log2(num/den)) for num, den > 0, without normalizing the fraction.
long long floor_log2_fraction(const Int& num, const Int& den);

/// Binary entropy H(p) = -p log2 p - (1-p) log2(1-p), as a double.
double binary_entropy(const Ratio& p);

} // namespace aldim
