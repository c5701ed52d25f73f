#include "aldim/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace aldim {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// CostVec

std::map<unsigned, Ratio> CostVec::residue_form(const Ratio& s) const {
    if (s.sign() < 0) throw std::invalid_argument("CostVec: exponent s must be >= 0");
    Int p = s.num(), q = s.den();
    if (q > Int(1) << 31) throw std::invalid_argument("CostVec: exponent denominator too large");

    std::map<unsigned, Ratio> form;
    for (const auto& [d, c] : counts_) {
        Int e = p * d;
        Int r = e % q; // e >= 0, q > 0
        Int whole = (e - r) / q;
        form[r.convert_to<unsigned>()] +=
            Ratio(c) * Ratio::pow2(-whole.convert_to<long long>());
    }
    return form;
}

std::optional<Ratio> CostVec::exact(const Ratio& s) const {
    auto form = residue_form(s);
    Ratio total(0);
    for (const auto& [r, coeff] : form) {
        if (r != 0 && !coeff.is_zero()) return std::nullopt;
        total += coeff;
    }
    return total;
}

ApproxReal CostVec::bounds(const Ratio& s, unsigned precision) const {
    auto form = residue_form(s);
    Ratio q(s.den());
    ApproxReal out;
    out.precision = precision;
    out.lower = Ratio(0);
    out.upper = Ratio(0);
    for (const auto& [r, coeff] : form) {
        if (coeff.is_zero()) continue;
        if (r == 0) {
            out.lower += coeff;
            out.upper += coeff;
            continue;
        }
        ApproxReal term = pow2_bounds(Ratio(Int(r)) / Ratio(s.den()) * Ratio(-1), precision);
        if (coeff.sign() >= 0) {
            out.lower += coeff * term.lower;
            out.upper += coeff * term.upper;
        } else {
            out.lower += coeff * term.upper;
            out.upper += coeff * term.lower;
        }
    }
    return out;
}

namespace {

CostVec::Comparison compare_residue_forms(const std::map<unsigned, Ratio>& a,
                                          const std::map<unsigned, Ratio>& b, const Ratio& s,
                                          unsigned max_precision) {
    // difference over the basis {2^{-r/q}}
    std::map<unsigned, Ratio> diff = a;
    for (const auto& [r, coeff] : b) diff[r] -= coeff;
    bool all_zero = true;
    for (const auto& [r, coeff] : diff)
        if (!coeff.is_zero()) {
            all_zero = false;
            break;
        }
    if (all_zero) return {0, true};

    // the basis is linearly independent over Q, so the difference is a
    // nonzero real; refine until the interval separates from 0
    Ratio den(s.den());
    for (unsigned prec = 64;; prec *= 2) {
        if (prec > max_precision) return {0, false};
        Ratio lo(0), hi(0);
        for (const auto& [r, coeff] : diff) {
            if (coeff.is_zero()) continue;
            if (r == 0) {
                lo += coeff;
                hi += coeff;
                continue;
            }
            ApproxReal term = pow2_bounds(Ratio(Int(r)) / den * Ratio(-1), prec);
            if (coeff.sign() >= 0) {
                lo += coeff * term.lower;
                hi += coeff * term.upper;
            } else {
                lo += coeff * term.upper;
                hi += coeff * term.lower;
            }
        }
        if (hi.sign() < 0) return {-1, true};
        if (lo.sign() > 0) return {1, true};
        if (lo.sign() == 0 && hi.sign() == 0) return {0, true};
    }
}

} // namespace

CostVec::Comparison CostVec::compare(const CostVec& other, const Ratio& s,
                                     unsigned max_precision) const {
    return compare_residue_forms(residue_form(s), other.residue_form(s), s, max_precision);
}

CostVec::Comparison CostVec::compare_value(const Ratio& value, const Ratio& s,
                                           unsigned max_precision) const {
    std::map<unsigned, Ratio> constant;
    constant[0] = value;
    return compare_residue_forms(residue_form(s), constant, s, max_precision);
}

// ---------------------------------------------------------------------------
// Cover dynamic programming

CoverSolution min_cover_cost(const PrefixTrie& gamma, unsigned k, const Ratio& s,
                             unsigned precision) {
    if (gamma.empty()) throw std::invalid_argument("min_cover_cost: empty trie");
    if (k > gamma.depth())
        throw std::invalid_argument("min_cover_cost: k exceeds the trie depth (no cover exists)");
    if (s.sign() < 0) throw std::invalid_argument("min_cover_cost: s must be >= 0");

    const auto n_nodes = gamma.node_count();
    std::vector<CostVec> cost(n_nodes);
    std::vector<char> cut(n_nodes, 0);

    auto rec = [&](auto&& self, std::int32_t idx, unsigned depth) -> void {
        const auto& nd = gamma.node(idx);
        bool leaf = nd.child[0] == PrefixTrie::kAbsent && nd.child[1] == PrefixTrie::kAbsent;
        auto ui = static_cast<std::size_t>(idx);
        if (leaf) {
            if (depth < k)
                throw std::logic_error("min_cover_cost: dead-end node above the admissible depth");
            cost[ui] = CostVec::single(depth);
            cut[ui] = 1;
            return;
        }
        CostVec children;
        for (int b = 0; b < 2; ++b)
            if (nd.child[b] != PrefixTrie::kAbsent) {
                self(self, nd.child[b], depth + 1);
                children += cost[static_cast<std::size_t>(nd.child[b])];
            }
        if (depth >= k) {
            CostVec here = CostVec::single(depth);
            auto cmp = here.compare(children, s, precision);
            if (cmp.sign <= 0) { // ties (and indistinct) prefer the shallower cover
                cost[ui] = std::move(here);
                cut[ui] = 1;
                return;
            }
        }
        cost[ui] = std::move(children);
        cut[ui] = 0;
    };
    rec(rec, gamma.root(), 0);

    CoverSolution sol;
    sol.s = s;
    sol.k = k;
    sol.cost = cost[0];
    sol.cost_exact = sol.cost.exact(s);
    sol.cost_bounds = sol.cost.bounds(s, precision);

    BitString path;
    auto collect = [&](auto&& self, std::int32_t idx) -> void {
        if (cut[static_cast<std::size_t>(idx)]) {
            sol.antichain.push_back(path);
            return;
        }
        const auto& nd = gamma.node(idx);
        for (int b = 0; b < 2; ++b) {
            if (nd.child[b] == PrefixTrie::kAbsent) continue;
            path.push_back(b);
            self(self, nd.child[b]);
            path.pop_back();
        }
    };
    collect(collect, gamma.root());
    return sol;
}

// ---------------------------------------------------------------------------
// Hausdorff surrogate by bisection

HausdorffEstimate hausdorff_estimate(const PrefixTrie& gamma, unsigned k, const Ratio& tol) {
    if (tol.sign() <= 0) throw std::invalid_argument("hausdorff_estimate: tol must be > 0");
    if (gamma.empty()) throw std::invalid_argument("hausdorff_estimate: empty trie");
    if (k > gamma.depth()) throw std::invalid_argument("hausdorff_estimate: k exceeds depth");

    HausdorffEstimate est;
    auto sign_at = [&](const Ratio& s) {
        // sign of (min cover cost − 1)
        return min_cover_cost(gamma, k, s).cost.compare_value(Ratio(1), s).sign;
    };

    Ratio lo(0), hi(1);
    int at_lo = sign_at(lo);
    ++est.iterations;
    if (at_lo <= 0) {
        // cost(0) is the minimal antichain size; ≤ 1 means a single path
        est.lower = est.upper = Ratio(0);
        est.exact_root = at_lo == 0;
        return est;
    }
    int at_hi = sign_at(hi);
    ++est.iterations;
    if (at_hi == 0) {
        est.lower = est.upper = Ratio(1);
        est.exact_root = true;
        return est;
    }

    while (hi - lo > tol) {
        Ratio mid = (lo + hi) / Ratio(2);
        int c = sign_at(mid);
        ++est.iterations;
        if (c == 0) {
            est.lower = est.upper = mid;
            est.exact_root = true;
            return est;
        }
        if (c > 0)
            lo = mid;
        else
            hi = mid;
    }
    est.lower = lo;
    est.upper = hi;
    return est;
}

// ---------------------------------------------------------------------------
// Box-counting dimension

BoxDimensionSummary box_dimension_estimate(const std::vector<std::uint64_t>& slice_counts,
                                           unsigned n_min) {
    BoxDimensionSummary out;
    bool first = true;
    for (unsigned n = std::max(n_min, 1u); n < slice_counts.size(); ++n) {
        std::uint64_t count = slice_counts[n];
        if (count == 0) continue;
        BoxDimensionRow row;
        row.n = n;
        row.count = count;
        double l2 = (count & (count - 1)) == 0
                        ? static_cast<double>(63 - __builtin_clzll(count))
                        : std::log2(static_cast<double>(count));
        row.ratio = l2 / n;
        if (first || row.ratio > out.max_ratio) {
            out.max_ratio = row.ratio;
            out.argmax = n;
            first = false;
        }
        out.rows.push_back(row);
    }
    return out;
}

BoxDimensionSummary box_dimension_estimate(const PrefixTrie& gamma, unsigned n_min) {
    return box_dimension_estimate(gamma.slice_counts(), n_min);
}

// ---------------------------------------------------------------------------
// Learner-derived covers

LearnerCover extract_learner_cover(const Learner& l, unsigned k, std::uint64_t r, const Ratio& s,
                                   unsigned depth) {
    if (k > depth) throw std::invalid_argument("extract_learner_cover: k exceeds depth");
    LearnerCover out;
    out.k = k;
    out.depth = depth;
    out.r = r;
    out.s = s;
    out.bound = Ratio::pow2(-static_cast<long long>(r));

    // #yes(w) ≥ r + (1−s)|w| ⟺ q·#yes ≥ q·r + (q−p)·|w|
    Int p = s.num(), q = s.den();
    auto hits = [&](std::uint64_t count, std::uint64_t len) {
        return q * count >= q * r + (q - p) * len;
    };

    auto wk = l.walker();
    BitString path;
    auto dfs = [&](auto&& self, std::uint64_t count) -> void {
        count += wk->answer() ? 1 : 0;
        if (path.size() >= k && hits(count, path.size())) {
            out.antichain.push_back(path);
            out.cost.add_term(static_cast<unsigned>(path.size()));
            return;
        }
        if (path.size() == depth) return;
        for (int bit = 0; bit < 2; ++bit) {
            path.push_back(bit);
            wk->push(bit);
            self(self, count);
            wk->pop();
            path.pop_back();
        }
    };
    dfs(dfs, 0);

    out.cost_bounds = out.cost.bounds(s, 128);
    out.within_bound = out.cost.compare_value(out.bound, s).sign <= 0;
    return out;
}

// ---------------------------------------------------------------------------
// Slices and slice codes

SliceSet enumerate_slice(const Learner& l, unsigned n, const Ratio& s) {
    if (n < 1) throw std::invalid_argument("enumerate_slice: n must be >= 1");
    if (n > 30) throw std::invalid_argument("enumerate_slice: n too large");

    SliceSet slice;
    slice.n = n;
    slice.s = s;
    slice.bound_asserted = l.measure_verified();

    // AVG_l(w) ≥ 1−s ⟺ q·#yes ≥ (q−p)·n
    Int p = s.num(), q = s.den();
    Int threshold = (q - p) * n;

    auto wk = l.walker();
    BitString path;
    auto dfs = [&](auto&& self, std::uint64_t count) -> void {
        count += wk->answer() ? 1 : 0;
        if (path.size() == n) {
            if (q * count >= threshold) slice.members.push_back(path);
            return;
        }
        for (int bit = 0; bit < 2; ++bit) {
            path.push_back(bit);
            wk->push(bit);
            self(self, count);
            wk->pop();
            path.pop_back();
        }
    };
    dfs(dfs, 0);

    if (slice.bound_asserted) {
        // |T_n| ≤ 2^{s·n} ⟺ |T_n|^q ≤ 2^{p·n}
        Int size(slice.members.size());
        Int lhs = mp::pow(size, q.convert_to<unsigned>());
        Int rhs = Int(1) << (p * n).convert_to<unsigned>();
        slice.bound_ok = lhs <= rhs;
    }
    return slice;
}

std::uint64_t slice_code_width(const Ratio& s, unsigned n) {
    Ratio bits = s * Ratio(Int(n));
    Int width = bits.ceil();
    if (width < 0 || width > 62)
        throw std::invalid_argument("slice_code_width: width out of range");
    return width.convert_to<std::uint64_t>();
}

const SliceSet& SliceCodec::slice(unsigned n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, enumerate_slice(l_, n, s_)).first;
    return it->second;
}

BitString SliceCodec::encode(const BitString& w) {
    if (w.empty()) throw std::invalid_argument("SliceCodec::encode: empty string");
    auto n = static_cast<unsigned>(w.size());
    const SliceSet& T = slice(n);
    auto it = std::lower_bound(T.members.begin(), T.members.end(), w);
    if (it == T.members.end() || !(*it == w))
        throw std::invalid_argument("SliceCodec::encode: string is not in the slice T_" +
                                    std::to_string(n));
    auto index = static_cast<std::uint64_t>(it - T.members.begin());
    std::uint64_t width = slice_code_width(s_, n);
    if (width < 64 && index >= (std::uint64_t{1} << width))
        throw std::runtime_error("SliceCodec::encode: index does not fit (slice bound violated)");
    return BitString::from_index(index, width);
}

BitString SliceCodec::decode(unsigned n, const BitString& code) {
    std::uint64_t width = slice_code_width(s_, n);
    if (code.size() != width)
        throw std::invalid_argument("SliceCodec::decode: code length " +
                                    std::to_string(code.size()) + " != expected width " +
                                    std::to_string(width));
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < code.size(); ++i) index = (index << 1) | code.bit(i);
    const SliceSet& T = slice(n);
    if (index >= T.members.size())
        throw std::out_of_range("SliceCodec::decode: index " + std::to_string(index) +
                                " beyond |T_n| = " + std::to_string(T.members.size()));
    return T.members[index];
}

BitString slice_encode(const Learner& l, const Ratio& s, const BitString& w) {
    SliceCodec codec(l, s);
    return codec.encode(w);
}

BitString slice_decode(const Learner& l, const Ratio& s, unsigned n, const BitString& code) {
    SliceCodec codec(l, s);
    return codec.decode(n, code);
}

// ---------------------------------------------------------------------------
// Compression estimators

CompressionEstimate compression_dim_estimate(const SequenceSource& X, const Coder& coder,
                                             std::uint64_t horizon, DimMode mode,
                                             unsigned samples) {
    if (horizon < 1) throw std::invalid_argument("compression_dim_estimate: horizon must be >= 1");
    if (samples < 1) samples = 1;

    CompressionEstimate out;
    out.mode = mode;
    out.coder = coder.name();
    out.horizon = horizon;

    std::vector<std::uint64_t> grid;
    for (unsigned i = 1; i <= samples; ++i) {
        auto n = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(horizon) * i) / samples);
        if (n < 1) n = 1;
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }

    for (auto n : grid) {
        BitString prefix = X.prefix(n);
        BitString code = coder.encode(prefix);
        BitString back = coder.decode(code, n);
        if (!(back == prefix))
            throw std::runtime_error("compression_dim_estimate: coder round-trip failed at n = " +
                                     std::to_string(n));
        CompressionRow row;
        row.n = n;
        row.codelen = code.size();
        row.ratio = static_cast<double>(code.size()) / static_cast<double>(n);
        out.rows.push_back(row);
    }

    bool first = true;
    for (const auto& row : out.rows) {
        if (row.n * 2 <= horizon && out.rows.size() > 1) continue; // tail window only
        if (first) {
            out.tail_min = out.tail_max = row.ratio;
            first = false;
        } else {
            out.tail_min = std::min(out.tail_min, row.ratio);
            out.tail_max = std::max(out.tail_max, row.ratio);
        }
    }
    out.estimate = mode == DimMode::liminf ? out.tail_min : out.tail_max;
    return out;
}

} // namespace aldim
