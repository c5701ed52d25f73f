#include "aldim/ratio.hpp"

#include <cmath>
#include <cstdlib>

namespace aldim {

namespace mp = boost::multiprecision;

Ratio Ratio::parse(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("Ratio::parse: bad literal '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    std::string s(text);
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        pos = 1;
    }

    auto is_digits = [](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    // cpp_int would read a leading zero as an octal prefix
    auto to_int = [](std::string digits) {
        std::size_t nz = digits.find_first_not_of('0');
        return nz == std::string::npos ? Int(0) : Int(digits.substr(nz));
    };

    std::string body = s.substr(pos);
    Int num, den = 1;

    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string n = body.substr(0, slash), d = body.substr(slash + 1);
        if (!is_digits(n) || !is_digits(d)) fail();
        num = to_int(n);
        den = to_int(d);
        if (den == 0) fail();
    } else {
        // optional decimal point and exponent
        long long exp10 = 0;
        if (auto e = body.find_first_of("eE"); e != std::string::npos) {
            std::string tail = body.substr(e + 1);
            if (tail.empty()) fail();
            char* end = nullptr;
            exp10 = std::strtoll(tail.c_str(), &end, 10);
            if (end == tail.c_str() || *end != '\0') fail();
            body = body.substr(0, e);
        }
        std::string digits = body;
        if (auto dot = body.find('.'); dot != std::string::npos) {
            std::string frac = body.substr(dot + 1);
            digits = body.substr(0, dot) + frac;
            exp10 -= static_cast<long long>(frac.size());
            if (digits.empty()) fail();
        }
        if (!is_digits(digits)) fail();
        num = to_int(digits);
        if (exp10 > 0)
            num *= mp::pow(Int(10), static_cast<unsigned>(exp10));
        else if (exp10 < 0)
            den = mp::pow(Int(10), static_cast<unsigned>(-exp10));
    }
    if (negative) num = -num;
    return Ratio(num, den);
}

Int Ratio::floor() const {
    Int n = num(), d = den();
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

Int Ratio::ceil() const { return -(-*this).floor(); }

long long Ratio::floor_log2() const {
    if (sign() <= 0) throw std::domain_error("floor_log2: nonpositive value");
    return floor_log2_fraction(num(), den());
}

long long floor_log2_fraction(const Int& n, const Int& d) {
    if (n <= 0 || d <= 0) throw std::domain_error("floor_log2_fraction: nonpositive operand");
    long long k = static_cast<long long>(mp::msb(n)) - static_cast<long long>(mp::msb(d));
    // 2^(k-1) < x < 2^(k+1); decide which side of 2^k.
    bool at_least;
    if (k >= 0)
        at_least = n >= (d << static_cast<unsigned>(k));
    else
        at_least = (n << static_cast<unsigned>(-k)) >= d;
    return at_least ? k : k - 1;
}

bool Ratio::is_power_of_two() const {
    if (sign() <= 0) return false;
    Int n = num(), d = den();
    auto pow2_int = [](const Int& x) { return (x & (x - 1)) == 0; };
    if (n == 1) return pow2_int(d);
    if (d == 1) return pow2_int(n);
    return false; // lowest terms: both can't exceed 1
}

double log2_approx(const Int& x) {
    if (x <= 0) throw std::domain_error("log2_approx: nonpositive integer");
    auto k = mp::msb(x);
    if ((x & (x - 1)) == 0) return static_cast<double>(k);
    if (k <= 62) return std::log2(static_cast<double>(x.convert_to<std::uint64_t>()));
    Int top = x >> static_cast<unsigned>(k - 62);
    double mant = static_cast<double>(top.convert_to<std::uint64_t>());
    return std::log2(mant) + static_cast<double>(k - 62);
}

double Ratio::to_double() const {
    if (is_zero()) return 0.0;
    double mag = std::exp2(log2_approx(sign() > 0 ? *this : -*this));
    return sign() > 0 ? mag : -mag;
}

std::string Ratio::str() const {
    std::string s = num().str();
    if (!is_integer()) s += "/" + den().str();
    return s;
}

double log2_approx(const Ratio& x) {
    if (x.sign() <= 0) throw std::domain_error("log2_approx: nonpositive value");
    return log2_approx(x.num()) - log2_approx(x.den());
}

double binary_entropy(const Ratio& p) {
    if (p.sign() < 0 || p > Ratio(1)) throw std::domain_error("binary_entropy: p outside [0,1]");
    if (p.is_zero() || p == Ratio(1)) return 0.0;
    Ratio q = Ratio(1) - p;
    double lp = log2_approx(p), lq = log2_approx(q);
    return -p.to_double() * lp - q.to_double() * lq;
}

} // namespace aldim
