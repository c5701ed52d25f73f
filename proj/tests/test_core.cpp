#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aldim/approx.hpp"
#include "aldim/bitstring.hpp"
#include "aldim/measure.hpp"
#include "aldim/ratio.hpp"
#include "aldim/trie.hpp"

#include <random>
#include <sstream>

using namespace aldim;

TEST_CASE("bitstring basics") {
    BitString empty;
    CHECK(empty.size() == 0);
    BitString w("010");
    CHECK(w.size() == 3);
    CHECK(w.str() == "010");
    CHECK(w.bit(1) == 1);
    CHECK_THROWS_AS(BitString("01x"), std::invalid_argument);

    CHECK(empty.is_prefix_of(w));
    CHECK(BitString("01").is_prefix_of(w));
    CHECK(BitString("01").is_proper_prefix_of(w));
    CHECK(!w.is_proper_prefix_of(w));
    CHECK(!BitString("1").is_prefix_of(w));

    CHECK(BitString::from_index(5, 4) == BitString("0101"));
    CHECK(BitString::zeros(3) == BitString("000"));
}

TEST_CASE("prefix relation is a partial order") {
    // antisymmetry at small scale, exhaustively up to length 5
    std::vector<BitString> all;
    for (std::size_t len = 0; len <= 5; ++len)
        for (std::uint64_t i = 0; i < (1ull << len); ++i) all.push_back(BitString::from_index(i, len));
    for (const auto& a : all)
        for (const auto& b : all)
            if (a.is_prefix_of(b) && b.is_prefix_of(a)) CHECK(a == b);
}

TEST_CASE("minimal_prefix_set") {
    auto items = [](std::initializer_list<const char*> xs) {
        std::vector<BitString> out;
        for (auto* s : xs) out.emplace_back(s);
        return out;
    };
    CHECK(minimal_prefix_set(items({"0", "01", "11"})) == items({"0", "11"}));
    CHECK(minimal_prefix_set({}).empty());
    CHECK(minimal_prefix_set(items({"00", "01", "10", "11"})) == items({"00", "01", "10", "11"}));
}

TEST_CASE("ratio arithmetic and normalization") {
    Ratio half(Int(1), Int(2));
    Ratio also_half(Int(4), Int(8));
    CHECK(half == also_half);
    CHECK(half.num() == 1);
    CHECK(also_half.den() == 2);

    Ratio neg(Int(3), Int(-6));
    CHECK(neg == Ratio(Int(-1), Int(2)));
    CHECK(neg.den() == 2);
    CHECK(neg.num() == -1);

    CHECK((half + half) == Ratio(1));
    CHECK((Ratio(3) / Ratio(4)).str() == "3/4");
    CHECK(Ratio::parse("3/4") == Ratio(Int(3), Int(4)));
    CHECK(Ratio::parse("0.75") == Ratio(Int(3), Int(4)));
    CHECK(Ratio::parse("-2") == Ratio(-2));
    CHECK(Ratio::parse("1e-3") == Ratio(Int(1), Int(1000)));
    CHECK_THROWS_AS(Ratio::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Ratio::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Ratio(Int(1), Int(0)), std::invalid_argument);
}

TEST_CASE("ratio floor/ceil/floor_log2") {
    CHECK(Ratio::parse("7/2").floor() == 3);
    CHECK(Ratio::parse("-7/2").floor() == -4);
    CHECK(Ratio::parse("7/2").ceil() == 4);
    CHECK(Ratio(5).floor() == 5);

    CHECK(Ratio(1).floor_log2() == 0);
    CHECK(Ratio(2).floor_log2() == 1);
    CHECK(Ratio::parse("3/2").floor_log2() == 0);
    CHECK(Ratio::parse("1/2").floor_log2() == -1);
    CHECK(Ratio::parse("1/3").floor_log2() == -2);
    CHECK(Ratio::parse("1023/4").floor_log2() == 7);
    CHECK_THROWS_AS(Ratio(0).floor_log2(), std::domain_error);
}

TEST_CASE("floor_log2 against brute force") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 2000; ++trial) {
        Int num = Int(rng() % 100000 + 1);
        Int den = Int(rng() % 100000 + 1);
        Ratio r(num, den);
        long long k = r.floor_log2();
        CHECK(Ratio::pow2(k) <= r);
        CHECK(r < Ratio::pow2(k + 1));
    }
}

TEST_CASE("ratio helpers") {
    CHECK(Ratio::pow2(-3) == Ratio(Int(1), Int(8)));
    CHECK(Ratio(8).is_power_of_two());
    CHECK(Ratio::parse("1/4").is_power_of_two());
    CHECK(!Ratio::parse("3/4").is_power_of_two());
    CHECK(log2_approx(Ratio::pow2(-20)) == -20.0);
    CHECK(log2_approx(Ratio(1024)) == 10.0);
    CHECK(std::abs(log2_approx(Ratio(3)) - 1.58496250072) < 1e-9);
    CHECK(std::abs(binary_entropy(Ratio::parse("1/4")) - 0.811278124459133) < 1e-12);
    CHECK(std::abs(Ratio::parse("1/3").to_double() - (1.0 / 3.0)) < 1e-15);
}

TEST_CASE("iroot_floor property: r^k <= n < (r+1)^k") {
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 500; ++trial) {
        Int n = Int(rng() % 1000000);
        unsigned k = 1 + static_cast<unsigned>(rng() % 7);
        Int r = iroot_floor(n, k);
        CHECK(boost::multiprecision::pow(r, k) <= n);
        CHECK(boost::multiprecision::pow(r + 1, k) > n);
    }
    CHECK(iroot_floor(Int(0), 5) == 0);
    CHECK(iroot_floor(Int(1) << 30, 3) == 1024);
}

TEST_CASE("pow2_bounds encloses and cross-checks the iroot oracle") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        long long num = static_cast<long long>(rng() % 200) - 100;
        long long den = 1 + static_cast<long long>(rng() % 12);
        Ratio x{Int(num), Int(den)};
        unsigned prec = 32 + static_cast<unsigned>(rng() % 64);
        ApproxReal b = pow2_bounds(x, prec);
        CHECK(b.lower <= b.upper);
        // independent oracle: floor(2^(a/b) * 2^prec) via integer roots
        Ratio e_floor(x.floor());
        Ratio frac = x - e_floor;
        if (!frac.is_zero()) {
            unsigned a = frac.num().convert_to<unsigned>();
            unsigned bb = frac.den().convert_to<unsigned>();
            Int m = iroot_floor(Int(1) << (a + bb * prec), bb);
            Ratio scale = Ratio::pow2(e_floor.floor().convert_to<long long>() -
                                      static_cast<long long>(prec));
            Ratio lo_oracle = Ratio(m) * scale;
            Ratio hi_oracle = Ratio(m + 1) * scale;
            // both are enclosures of the same value: they must overlap
            CHECK(b.lower <= hi_oracle);
            CHECK(lo_oracle <= b.upper);
            // and the production interval must be tight: width ≲ 2^(floor(x)+2-prec)
            CHECK(b.width() <= Ratio::pow2(e_floor.floor().convert_to<long long>() + 2 -
                                           static_cast<long long>(prec)));
        } else {
            CHECK(b.lower == b.upper);
        }
    }
}

TEST_CASE("pow2_bounds refinement never widens") {
    Ratio x = Ratio::parse("-7/3");
    ApproxReal prev = pow2_bounds(x, 16);
    for (unsigned prec = 32; prec <= 256; prec *= 2) {
        ApproxReal next = pow2_bounds(x, prec).intersect(prev);
        CHECK(next.lower >= prev.lower);
        CHECK(next.upper <= prev.upper);
        prev = next;
    }
    CHECK(prev.width() < Ratio::pow2(-250));
}

TEST_CASE("pow2_bounds known values") {
    // 2^(3/2) = sqrt(8) = 2.8284271247...: lo^2 <= 8 <= hi^2, tightly
    ApproxReal b = pow2_bounds(Ratio::parse("3/2"), 64);
    CHECK(b.lower.to_double() == doctest::Approx(2.8284271247).epsilon(1e-9));
    CHECK(b.lower * b.lower <= Ratio(8));
    CHECK(b.upper * b.upper >= Ratio(8));
    CHECK(b.width() <= Ratio::pow2(-60));
    CHECK(!b.contains(Ratio::parse("2.8284271248")));
    CHECK(!b.contains(Ratio(3)));
}

TEST_CASE("measure: lebesgue and bernoulli") {
    Measure leb = Measure::lebesgue();
    CHECK(cylinder_measure(leb, BitString()) == Ratio(1));
    CHECK(cylinder_measure(leb, BitString("010")) == Ratio(Int(1), Int(8)));

    Measure b = Measure::bernoulli(Ratio::parse("1/4"));
    CHECK(cylinder_measure(b, BitString("110")) == Ratio(Int(3), Int(64)));
    CHECK_THROWS_AS(Measure::bernoulli(Ratio(2)), std::invalid_argument);
}

TEST_CASE("validate_measure") {
    CHECK(validate_measure(Measure::lebesgue(), 10).ok);
    CHECK(validate_measure(Measure::bernoulli(Ratio::parse("1/4")), 10).ok);

    Measure bad([](const BitString& w) { return Ratio::pow2(-2 * static_cast<long long>(w.size())); },
                "w->4^-|w|");
    auto report = validate_measure(bad, 1);
    CHECK(!report.ok);
    REQUIRE(report.first.has_value());
    CHECK(report.first->node == BitString());
}

TEST_CASE("trie: construction and slices") {
    auto full3 = PrefixTrie::full(3);
    CHECK(full3.node_count() == 15);
    CHECK(full3.slice_counts() == std::vector<std::uint64_t>{1, 2, 4, 8});

    auto path = PrefixTrie::single_path(BitString("010"));
    CHECK(path.slice_counts() == std::vector<std::uint64_t>{1, 1, 1, 1});
    CHECK(path.contains(BitString("01")));
    CHECK(!path.contains(BitString("1")));

    auto even = PrefixTrie::diluted(6, 2);
    CHECK(even.slice_counts() == std::vector<std::uint64_t>{1, 2, 2, 4, 4, 8, 8});
}

TEST_CASE("trie slice counts are monotone and at most double") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        PrefixTrie t(6);
        int leaves = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < leaves; ++i)
            t.insert(BitString::from_index(rng() % 64, 6));
        auto counts = t.slice_counts();
        for (std::size_t d = 0; d + 1 < counts.size(); ++d) {
            CHECK(counts[d] <= counts[d + 1]);
            CHECK(counts[d + 1] <= 2 * counts[d]);
        }
    }
}

TEST_CASE("trie antichain round trip") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        PrefixTrie t(5);
        int inserts = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < inserts; ++i) {
            unsigned len = rng() % 6;
            t.insert(BitString::from_index(rng() % (1ull << len), len));
        }
        auto anti = t.to_antichain();
        // antichain is prefix-free
        for (const auto& a : anti)
            for (const auto& b : anti)
                if (!(a == b)) CHECK(!a.is_prefix_of(b));
        auto rebuilt = PrefixTrie::from_strings(5, anti);
        CHECK(rebuilt.slice(5) == t.slice(5));
        CHECK(rebuilt.node_count() == t.node_count());
    }
}

TEST_CASE("prefix-set file round trip") {
    PrefixTrie t(4);
    t.insert(BitString("01"));
    t.insert(BitString("1101"));
    std::stringstream ss;
    t.write_prefix_set(ss);
    std::stringstream in("# cover of a couple of cylinders\n" + ss.str() + "\n\n");
    auto back = PrefixTrie::read_prefix_set(in, 4);
    CHECK(back.slice(4) == t.slice(4));

    std::stringstream bad("01\n0a1\n");
    CHECK_THROWS_AS(PrefixTrie::read_prefix_set(bad, 4), std::invalid_argument);
}

TEST_CASE("kraft inequality and depth-L identity for prefix-free sets") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<BitString> raw;
        int n = static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            unsigned len = 1 + rng() % 6;
            raw.push_back(BitString::from_index(rng() % (1ull << len), len));
        }
        auto anti = minimal_prefix_set(raw);

        Ratio kraft(0);
        std::size_t max_len = 0;
        for (const auto& w : anti) {
            kraft += Ratio::pow2(-static_cast<long long>(w.size()));
            max_len = std::max(max_len, w.size());
        }
        CHECK(kraft <= Ratio(1));

        const unsigned L = 7; // ≥ max length by construction
        std::uint64_t covered = 0;
        for (std::uint64_t i = 0; i < (1ull << L); ++i) {
            BitString leaf = BitString::from_index(i, L);
            for (const auto& w : anti)
                if (w.is_prefix_of(leaf)) {
                    ++covered;
                    break;
                }
        }
        CHECK(kraft == Ratio(covered) * Ratio::pow2(-static_cast<long long>(L)));
    }
}
