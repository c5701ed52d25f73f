#include "aldim/gale.hpp"

#include <deque>

namespace aldim {

// ---------------------------------------------------------------------------
// Martingale representations

struct Martingale::Impl {
    virtual ~Impl() = default;
    virtual Ratio value(const BitString& w) const = 0;
    virtual std::unique_ptr<Walker> walker() const = 0;
    virtual std::unique_ptr<Cursor> cursor() const = 0;
    std::string name;
};

namespace {

class FactorWalker final : public Martingale::Walker {
public:
    explicit FactorWalker(const std::function<Ratio(std::size_t, int)>* factor)
        : factor_(factor) {
        stack_.emplace_back(1);
    }
    const Ratio& value() const override { return stack_.back(); }
    void push(int bit) override {
        Ratio next = stack_.back() * (*factor_)(stack_.size() - 1, bit & 1);
        stack_.push_back(std::move(next));
    }
    void pop() override { stack_.pop_back(); }
    std::size_t depth() const override { return stack_.size() - 1; }

private:
    const std::function<Ratio(std::size_t, int)>* factor_;
    std::vector<Ratio> stack_;
};

// Keeps the capital as an unnormalized product num/den: a per-step gcd on
// huge coprime operands would dominate long traces.
class FactorCursor final : public Martingale::Cursor {
public:
    explicit FactorCursor(const std::function<Ratio(std::size_t, int)>* factor)
        : factor_(factor), num_(1), den_(1) {}
    void advance(int bit) override {
        Ratio f = (*factor_)(pos_, bit & 1);
        num_ *= f.num();
        den_ *= f.den(); // Ratio keeps den > 0
        ++pos_;
    }
    int sign() const override { return num_.sign(); }
    long long floor_log2() const override { return floor_log2_fraction(num_, den_); }
    double log2_value() const override { return log2_approx(num_) - log2_approx(den_); }
    Ratio value() const override { return Ratio(num_, den_); }

private:
    const std::function<Ratio(std::size_t, int)>* factor_;
    Int num_, den_;
    std::size_t pos_ = 0;
};

struct FactorImpl final : Martingale::Impl {
    std::function<Ratio(std::size_t, int)> factor;

    Ratio value(const BitString& w) const override {
        Ratio v(1);
        for (std::size_t i = 0; i < w.size(); ++i) v *= factor(i, w.bit(i));
        return v;
    }
    std::unique_ptr<Martingale::Walker> walker() const override {
        return std::make_unique<FactorWalker>(&factor);
    }
    std::unique_ptr<Martingale::Cursor> cursor() const override {
        return std::make_unique<FactorCursor>(&factor);
    }
};

class FunctionWalker final : public Martingale::Walker {
public:
    explicit FunctionWalker(const std::function<Ratio(const BitString&)>* eval) : eval_(eval) {
        stack_.push_back((*eval_)(path_));
    }
    const Ratio& value() const override { return stack_.back(); }
    void push(int bit) override {
        path_.push_back(bit);
        stack_.push_back((*eval_)(path_));
    }
    void pop() override {
        path_.pop_back();
        stack_.pop_back();
    }
    std::size_t depth() const override { return path_.size(); }

private:
    const std::function<Ratio(const BitString&)>* eval_;
    BitString path_;
    std::vector<Ratio> stack_;
};

class FunctionCursor final : public Martingale::Cursor {
public:
    explicit FunctionCursor(const std::function<Ratio(const BitString&)>* eval) : eval_(eval) {
        value_ = (*eval_)(path_);
    }
    void advance(int bit) override {
        path_.push_back(bit);
        value_ = (*eval_)(path_);
    }
    int sign() const override { return value_.sign(); }
    long long floor_log2() const override { return value_.floor_log2(); }
    double log2_value() const override { return log2_approx(value_); }
    Ratio value() const override { return value_; }

private:
    const std::function<Ratio(const BitString&)>* eval_;
    BitString path_;
    Ratio value_;
};

struct FunctionImpl final : Martingale::Impl {
    std::function<Ratio(const BitString&)> eval;

    Ratio value(const BitString& w) const override { return eval(w); }
    std::unique_ptr<Martingale::Walker> walker() const override {
        return std::make_unique<FunctionWalker>(&eval);
    }
    std::unique_ptr<Martingale::Cursor> cursor() const override {
        return std::make_unique<FunctionCursor>(&eval);
    }
};

} // namespace

Ratio Martingale::value(const BitString& w) const { return impl_->value(w); }
std::unique_ptr<Martingale::Walker> Martingale::walker() const { return impl_->walker(); }
std::unique_ptr<Martingale::Cursor> Martingale::cursor() const { return impl_->cursor(); }
const std::string& Martingale::name() const { return impl_->name; }

Martingale Martingale::from_factors(std::function<Ratio(std::size_t, int)> factor,
                                    std::string name) {
    auto impl = std::make_shared<FactorImpl>();
    impl->factor = std::move(factor);
    impl->name = std::move(name);
    return Martingale(impl);
}

Martingale Martingale::from_function(std::function<Ratio(const BitString&)> eval,
                                     std::string name) {
    auto impl = std::make_shared<FunctionImpl>();
    impl->eval = std::move(eval);
    impl->name = std::move(name);
    return Martingale(impl);
}

Martingale Martingale::normalized() const {
    Ratio d0 = initial();
    if (d0 == Ratio(1)) return *this;
    if (d0.sign() <= 0)
        throw std::invalid_argument("Martingale::normalized: d(lambda) must be positive");
    auto inner = impl_;
    return from_function(
        [inner, d0](const BitString& w) { return inner->value(w) / d0; },
        name() + "/norm");
}

Martingale bernoulli_likelihood_martingale(const Ratio& p) {
    if (p.sign() <= 0 || p >= Ratio(1))
        throw std::invalid_argument("bernoulli_likelihood_martingale: p must lie in (0,1)");
    Ratio f1 = Ratio(2) * p, f0 = Ratio(2) * (Ratio(1) - p);
    return Martingale::from_factors(
        [f0, f1](std::size_t, int bit) { return bit ? f1 : f0; },
        "likelihood(p=" + p.str() + ")");
}

Martingale structured_martingale(std::vector<Bet> schedule) {
    if (schedule.empty()) throw std::invalid_argument("structured_martingale: empty schedule");
    for (const auto& b : schedule)
        if (b.stake.sign() < 0 || b.stake > Ratio(1))
            throw std::invalid_argument("structured_martingale: stake outside [0,1]");
    std::string name = "structured[";
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (i) name += ",";
        name += schedule[i].stake.str() + ">" + std::to_string(schedule[i].predict & 1);
    }
    name += "]";
    auto sched = std::make_shared<std::vector<Bet>>(std::move(schedule));
    return Martingale::from_factors(
        [sched](std::size_t pos, int bit) {
            const Bet& b = (*sched)[pos % sched->size()];
            return (bit & 1) == (b.predict & 1) ? Ratio(1) + b.stake : Ratio(1) - b.stake;
        },
        std::move(name));
}

Martingale all_in_on_zero_martingale() { return structured_martingale({Bet{Ratio(1), 0}}); }

Martingale constant_martingale() { return structured_martingale({Bet{Ratio(0), 0}}); }

// ---------------------------------------------------------------------------
// Validation

GaleValidation validate_martingale(const Martingale& d, unsigned depth) {
    GaleValidation report;
    std::deque<std::pair<BitString, Ratio>> queue;

    auto eval = [&](const BitString& w, Ratio& out) {
        try {
            out = d.value(w);
            return true;
        } catch (const std::exception& e) {
            report.ok = false;
            report.first =
                GaleViolation{w, GaleViolation::Kind::eval_error, std::string("evaluation failed: ") + e.what()};
            return false;
        }
    };

    BitString root;
    Ratio v;
    if (!eval(root, v)) return report;
    ++report.nodes_checked;
    if (v.sign() < 0) {
        report.ok = false;
        report.first = GaleViolation{root, GaleViolation::Kind::negative, "d(lambda) = " + v.str()};
        return report;
    }
    queue.emplace_back(root, v);

    while (!queue.empty()) {
        auto [w, value] = queue.front();
        queue.pop_front();
        if (w.size() == depth) continue;
        Ratio v0, v1;
        if (!eval(w.extended(0), v0) || !eval(w.extended(1), v1)) return report;
        report.nodes_checked += 2;
        for (int b = 0; b < 2; ++b) {
            const Ratio& vb = b ? v1 : v0;
            if (vb.sign() < 0) {
                report.ok = false;
                report.first = GaleViolation{w.extended(b), GaleViolation::Kind::negative,
                                             "d(w) = " + vb.str()};
                return report;
            }
        }
        if (v0 + v1 != Ratio(2) * value) {
            report.ok = false;
            report.first = GaleViolation{w, GaleViolation::Kind::unfair,
                                         "d(w0)+d(w1) = " + (v0 + v1).str() + ", expected " +
                                             (Ratio(2) * value).str()};
            return report;
        }
        queue.emplace_back(w.extended(0), v0);
        queue.emplace_back(w.extended(1), v1);
    }
    return report;
}

GaleValidation validate_mu_s_gale(const Martingale& d, const Measure& mu, long long s,
                                  unsigned depth) {
    GaleValidation report;
    auto mu_pow = [&](const BitString& w) {
        Ratio m = mu(w);
        if (s >= 0) {
            Ratio r(1);
            for (long long i = 0; i < s; ++i) r *= m;
            return r;
        }
        Ratio r(1);
        for (long long i = 0; i < -s; ++i) r *= m;
        return Ratio(1) / r;
    };

    std::deque<BitString> queue;
    queue.emplace_back();
    while (!queue.empty()) {
        BitString w = queue.front();
        queue.pop_front();
        Ratio dv = d.value(w);
        ++report.nodes_checked;
        if (dv.sign() < 0) {
            report.ok = false;
            report.first = GaleViolation{w, GaleViolation::Kind::negative, "d(w) = " + dv.str()};
            return report;
        }
        if (w.size() == depth) continue;
        BitString w0 = w.extended(0), w1 = w.extended(1);
        Ratio lhs = dv * mu_pow(w);
        Ratio rhs = d.value(w0) * mu_pow(w0) + d.value(w1) * mu_pow(w1);
        if (lhs != rhs) {
            report.ok = false;
            report.first = GaleViolation{w, GaleViolation::Kind::unfair,
                                         "d(w)mu(w)^s = " + lhs.str() + " but children sum to " +
                                             rhs.str()};
            return report;
        }
        queue.push_back(w0);
        queue.push_back(w1);
    }
    return report;
}

// ---------------------------------------------------------------------------
// s-gale values

GaleValue sgale_value(const SGale& g, const BitString& w, unsigned precision) {
    GaleValue out;
    Ratio base = g.base.value(w);
    Ratio exponent = (g.s - Ratio(1)) * Ratio(std::uint64_t{w.size()});
    if (exponent.is_integer()) {
        Ratio exact = base * Ratio::pow2(exponent.floor().convert_to<long long>());
        out.exact = exact;
        out.bounds = dyadic_bounds(exact, precision);
        return out;
    }
    if (base.is_zero()) {
        out.exact = Ratio(0);
        out.bounds = dyadic_bounds(Ratio(0), precision);
        return out;
    }
    ApproxReal p = pow2_bounds(exponent, precision);
    out.bounds = ApproxReal{base * p.lower, base * p.upper, precision};
    return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov inequality

KolmogorovReport verify_kolmogorov_inequality(const Martingale& d, unsigned depth,
                                              bool keep_antichains) {
    KolmogorovReport report;
    report.depth = depth;
    report.initial = d.initial();
    if (report.initial.sign() <= 0)
        throw std::invalid_argument("verify_kolmogorov_inequality: d(lambda) must be positive");

    report.rows.resize(depth + 1);
    for (unsigned n = 0; n <= depth; ++n) {
        report.rows[n].n = n;
        report.rows[n].bound = Ratio::pow2(-static_cast<long long>(n));
    }

    auto w = d.walker();
    BitString path;
    const Ratio& d0 = report.initial;

    // crossed = highest n with d(v)/d(lambda) >= 2^n seen along the path (-1: none).
    auto record = [&](long long crossed_before) -> long long {
        const Ratio& c = w->value();
        if (c.sign() <= 0) return crossed_before;
        // floor_log2 of c/d0 without building the quotient
        Ratio scaled = c / d0;
        if (scaled < Ratio(1)) return crossed_before;
        long long m = scaled.floor_log2();
        for (long long n = crossed_before + 1; n <= m && n <= static_cast<long long>(depth); ++n) {
            auto& row = report.rows[static_cast<std::size_t>(n)];
            ++row.antichain_size;
            row.measure += Ratio::pow2(-static_cast<long long>(path.size()));
            if (keep_antichains) row.antichain.push_back(path);
        }
        return m > crossed_before ? m : crossed_before;
    };

    auto dfs = [&](auto&& self, long long crossed) -> void {
        crossed = record(crossed);
        if (path.size() == depth || crossed >= static_cast<long long>(depth)) return;
        for (int b = 0; b < 2; ++b) {
            path.push_back(b);
            w->push(b);
            self(self, crossed);
            w->pop();
            path.pop_back();
        }
    };
    dfs(dfs, -1);

    for (auto& row : report.rows) {
        row.pass = row.measure <= row.bound;
        row.tight = row.measure == row.bound;
        if (!row.pass) report.pass = false;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Order-success traces

OrderTrace order_success_trace(const Martingale& base, const Ratio& s, const SequenceSource& X,
                               std::uint64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("order_success_trace: horizon must be >= 1");
    OrderTrace trace;
    trace.rows.reserve(horizon + 1);

    auto cur = base.cursor();
    Ratio one_minus_s = Ratio(1) - s;
    bool any = false;
    std::uint64_t tail_start = horizon / 2;

    for (std::uint64_t n = 0; n <= horizon; ++n) {
        if (n > 0) cur->advance(X.bit(n - 1));
        OrderTraceRow row;
        row.n = n;
        if (cur->sign() <= 0) {
            row.zero_capital = true;
            trace.hit_zero = true;
        } else {
            Ratio drift = one_minus_s * Ratio(n);
            row.excess_log2 = cur->log2_value() - drift.to_double();
        }
        if (!row.zero_capital) {
            if (!any) {
                trace.max_excess = trace.min_excess = row.excess_log2;
                any = true;
            } else {
                trace.max_excess = std::max(trace.max_excess, row.excess_log2);
                trace.min_excess = std::min(trace.min_excess, row.excess_log2);
            }
        }
        trace.rows.push_back(row);
    }

    bool tail_any = false;
    for (std::uint64_t n = tail_start; n <= horizon; ++n) {
        const auto& row = trace.rows[n];
        if (row.zero_capital) continue;
        if (!tail_any) {
            trace.tail_max = trace.tail_min = row.excess_log2;
            tail_any = true;
        } else {
            trace.tail_max = std::max(trace.tail_max, row.excess_log2);
            trace.tail_min = std::min(trace.tail_min, row.excess_log2);
        }
    }
    return trace;
}

} // namespace aldim
