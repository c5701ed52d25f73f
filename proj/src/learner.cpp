#include "aldim/learner.hpp"

#include <algorithm>
#include <set>

namespace aldim {

// ---------------------------------------------------------------------------
// Learner plumbing

struct Learner::Impl {
    virtual ~Impl() = default;
    virtual bool eval(const BitString& w) const = 0;
    virtual std::unique_ptr<Walker> walker() const = 0;
    virtual std::unique_ptr<Cursor> cursor() const = 0;
    std::string name;
};

namespace {

// Walker/cursor for learners defined by a plain function of the node.
class FunctionWalker final : public Learner::Walker {
public:
    explicit FunctionWalker(const std::function<bool(const BitString&)>* eval) : eval_(eval) {
        answers_.push_back((*eval_)(path_));
    }
    bool answer() const override { return answers_.back(); }
    void push(int bit) override {
        path_.push_back(bit);
        answers_.push_back((*eval_)(path_));
    }
    void pop() override {
        path_.pop_back();
        answers_.pop_back();
    }

private:
    const std::function<bool(const BitString&)>* eval_;
    BitString path_;
    std::vector<bool> answers_;
};

class FunctionCursor final : public Learner::Cursor {
public:
    explicit FunctionCursor(const std::function<bool(const BitString&)>* eval) : eval_(eval) {
        answer_ = (*eval_)(path_);
    }
    bool answer() const override { return answer_; }
    void advance(int bit) override {
        path_.push_back(bit);
        answer_ = (*eval_)(path_);
    }

private:
    const std::function<bool(const BitString&)>* eval_;
    BitString path_;
    bool answer_ = false;
};

struct FunctionLearnerImpl final : Learner::Impl {
    std::function<bool(const BitString&)> fn;
    bool eval(const BitString& w) const override { return fn(w); }
    std::unique_ptr<Learner::Walker> walker() const override {
        return std::make_unique<FunctionWalker>(&fn);
    }
    std::unique_ptr<Learner::Cursor> cursor() const override {
        return std::make_unique<FunctionCursor>(&fn);
    }
};

} // namespace

bool Learner::eval(const BitString& w) const { return impl_->eval(w); }
std::unique_ptr<Learner::Walker> Learner::walker() const { return impl_->walker(); }
std::unique_ptr<Learner::Cursor> Learner::cursor() const { return impl_->cursor(); }
const std::string& Learner::name() const { return impl_->name; }

Learner Learner::from_function(std::function<bool(const BitString&)> eval, std::string name) {
    auto impl = std::make_shared<FunctionLearnerImpl>();
    impl->fn = std::move(eval);
    impl->name = std::move(name);
    return Learner(impl);
}

// ---------------------------------------------------------------------------
// Doubling learners

namespace {

// Milestone rule: yes when floor(log2 of the running capital maximum)
// increases to at least 1. For a fair martingale with d(λ) = 1 the floor
// rises by at most one per bit, so the yes-count equals the floor itself.
struct DoublingLearnerImpl final : Learner::Impl {
    Martingale d;

    explicit DoublingLearnerImpl(Martingale m) : d(std::move(m)) {}

    struct Frame {
        long long m = 0;
        bool fired = false;
    };

    static Frame advance_frame(const Frame& prev, const Martingale::Cursor& cur) {
        Frame f{prev.m, false};
        if (cur.sign() > 0) {
            long long fl = cur.floor_log2();
            if (fl > prev.m) {
                f.m = fl;
                f.fired = fl >= 1;
            }
        }
        return f;
    }

    bool eval(const BitString& w) const override {
        auto cur = d.cursor();
        Frame f;
        for (std::size_t i = 0; i < w.size(); ++i) {
            cur->advance(w.bit(i));
            f = advance_frame(f, *cur);
        }
        return f.fired;
    }

    class W final : public Learner::Walker {
    public:
        explicit W(const Martingale& d) : wk_(d.walker()) { stack_.push_back(Frame{}); }
        bool answer() const override { return stack_.back().fired; }
        void push(int bit) override {
            wk_->push(bit);
            const Ratio& c = wk_->value();
            Frame prev = stack_.back();
            Frame f{prev.m, false};
            if (c.sign() > 0) {
                long long fl = c.floor_log2();
                if (fl > prev.m) {
                    f.m = fl;
                    f.fired = fl >= 1;
                }
            }
            stack_.push_back(f);
        }
        void pop() override {
            wk_->pop();
            stack_.pop_back();
        }

    private:
        std::unique_ptr<Martingale::Walker> wk_;
        std::vector<Frame> stack_;
    };

    class C final : public Learner::Cursor {
    public:
        explicit C(const Martingale& d) : cur_(d.cursor()) {}
        bool answer() const override { return frame_.fired; }
        void advance(int bit) override {
            cur_->advance(bit);
            frame_ = advance_frame(frame_, *cur_);
        }

    private:
        std::unique_ptr<Martingale::Cursor> cur_;
        Frame frame_;
    };

    std::unique_ptr<Learner::Walker> walker() const override { return std::make_unique<W>(d); }
    std::unique_ptr<Learner::Cursor> cursor() const override { return std::make_unique<C>(d); }
};

// Literal reading of the doubling recursion: fire when the capital has at
// least doubled from its minimum since the previous firing. Dead (zero
// capital) paths never fire.
struct LiteralDoublingImpl final : Learner::Impl {
    Martingale d;

    explicit LiteralDoublingImpl(Martingale m) : d(std::move(m)) {}

    struct State {
        Ratio window_min; // min capital since the last firing (inclusive)
        bool fired = false;
    };

    State root_state() const { return {d.initial(), false}; }

    static State step_state(const State& prev, const Ratio& c) {
        if (c.sign() > 0 && c >= Ratio(2) * prev.window_min) return {c, true};
        return {prev.window_min < c ? prev.window_min : c, false};
    }

    bool eval(const BitString& w) const override {
        auto cur = d.cursor();
        State s = root_state();
        for (std::size_t i = 0; i < w.size(); ++i) {
            cur->advance(w.bit(i));
            s = step_state(s, cur->value());
        }
        return s.fired;
    }

    class W final : public Learner::Walker {
    public:
        explicit W(const LiteralDoublingImpl* impl) : wk_(impl->d.walker()) {
            stack_.push_back(impl->root_state());
        }
        bool answer() const override { return stack_.back().fired; }
        void push(int bit) override {
            wk_->push(bit);
            stack_.push_back(step_state(stack_.back(), wk_->value()));
        }
        void pop() override {
            wk_->pop();
            stack_.pop_back();
        }

    private:
        std::unique_ptr<Martingale::Walker> wk_;
        std::vector<State> stack_;
    };

    class C final : public Learner::Cursor {
    public:
        explicit C(const LiteralDoublingImpl* impl) : cur_(impl->d.cursor()) {
            state_ = impl->root_state();
        }
        bool answer() const override { return state_.fired; }
        void advance(int bit) override {
            cur_->advance(bit);
            state_ = step_state(state_, cur_->value());
        }

    private:
        std::unique_ptr<Martingale::Cursor> cur_;
        State state_;
    };

    std::unique_ptr<Learner::Walker> walker() const override { return std::make_unique<W>(this); }
    std::unique_ptr<Learner::Cursor> cursor() const override { return std::make_unique<C>(this); }
};

} // namespace

Learner build_doubling_learner(const Martingale& d) {
    if (d.initial() != Ratio(1))
        throw std::invalid_argument(
            "build_doubling_learner: d(lambda) must be 1 (normalize first)");
    auto impl = std::make_shared<DoublingLearnerImpl>(d);
    impl->name = "doubling(" + d.name() + ")";
    return Learner(impl);
}

Learner build_literal_doubling_learner(const Martingale& d) {
    if (d.initial() != Ratio(1))
        throw std::invalid_argument(
            "build_literal_doubling_learner: d(lambda) must be 1 (normalize first)");
    auto impl = std::make_shared<LiteralDoublingImpl>(d);
    impl->name = "literal-doubling(" + d.name() + ")";
    return Learner(impl);
}

DoublingRuleComparison compare_doubling_rules(const Martingale& d, unsigned depth) {
    DoublingRuleComparison out;
    auto milestone = build_doubling_learner(d).walker();
    auto literal = build_literal_doubling_learner(d).walker();
    BitString path;
    auto dfs = [&](auto&& self) -> void {
        ++out.nodes;
        bool a = milestone->answer(), b = literal->answer();
        if (a != b) {
            if (a)
                ++out.milestone_only;
            else
                ++out.literal_only;
            if (!out.first_difference) out.first_difference = path;
        }
        if (path.size() == depth) return;
        for (int bit = 0; bit < 2; ++bit) {
            path.push_back(bit);
            milestone->push(bit);
            literal->push(bit);
            self(self);
            literal->pop();
            milestone->pop();
            path.pop_back();
        }
    };
    dfs(dfs);
    return out;
}

Ratio path_average(const Learner& l, const BitString& w) {
    if (w.empty()) return Ratio(0);
    auto cur = l.cursor();
    std::uint64_t count = cur->answer() ? 1 : 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        cur->advance(w.bit(i));
        if (cur->answer()) ++count;
    }
    return Ratio(Int(count), Int(w.size()));
}

// ---------------------------------------------------------------------------
// Measure condition

MeasureConditionReport verify_measure_condition(const Learner& l, unsigned depth) {
    if (depth < 1) throw std::invalid_argument("verify_measure_condition: depth must be >= 1");
    if (depth > 30) throw std::invalid_argument("verify_measure_condition: depth too large");

    MeasureConditionReport report;
    report.depth = depth;

    std::vector<std::uint64_t> hist(depth + 2, 0);
    auto wk = l.walker();
    auto dfs = [&](auto&& self, unsigned at, std::uint64_t count) -> void {
        count += wk->answer() ? 1 : 0;
        if (at == depth) {
            ++hist[count];
            return;
        }
        for (int bit = 0; bit < 2; ++bit) {
            wk->push(bit);
            self(self, at + 1, count);
            wk->pop();
        }
    };
    dfs(dfs, 0, 0);

    std::vector<std::uint64_t> ge_by_n(depth + 2, 0);
    std::uint64_t ge = 0;
    for (unsigned n = depth + 1; n >= 1; --n) {
        ge += hist[n];
        ge_by_n[n] = ge;
    }
    for (unsigned n = 1; n <= depth; ++n) {
        MeasureConditionRow row;
        row.n = n;
        row.strings_ge = ge_by_n[n];
        row.measure = Ratio(Int(row.strings_ge), Int(1) << depth);
        row.bound = Ratio::pow2(-static_cast<long long>(n));
        std::uint64_t limit = std::uint64_t{1} << (depth - n);
        row.pass = row.strings_ge <= limit;
        row.tight = row.strings_ge == limit;
        if (!row.pass && report.pass) {
            report.pass = false;
            report.witness_n = n;
        }
        report.rows.push_back(row);
    }

    if (!report.pass) {
        // first-crossing antichain for the smallest failing n
        const std::uint64_t n_fail = report.witness_n;
        auto wk2 = l.walker();
        BitString path;
        auto collect = [&](auto&& self, std::uint64_t count) -> void {
            count += wk2->answer() ? 1 : 0;
            if (count >= n_fail) {
                if (report.witness.size() < 4096) report.witness.push_back(path);
                return;
            }
            if (path.size() == depth) return;
            for (int bit = 0; bit < 2; ++bit) {
                path.push_back(bit);
                wk2->push(bit);
                self(self, count);
                wk2->pop();
                path.pop_back();
            }
        };
        collect(collect, 0);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Cost oracles and delayed learners

CostOracle prefix_eval_cost() {
    return [](const BitString& w) { return static_cast<std::uint64_t>(w.size()) + 1; };
}

CostOracle constant_cost(std::uint64_t c) {
    if (c < 1) throw std::invalid_argument("constant_cost: cost must be >= 1");
    return [c](const BitString&) { return c; };
}

CostOracle cost_from_map(std::map<BitString, std::uint64_t> costs) {
    auto shared = std::make_shared<std::map<BitString, std::uint64_t>>(std::move(costs));
    return [shared](const BitString& w) {
        auto it = shared->find(w);
        if (it == shared->end())
            throw std::out_of_range("cost oracle undefined at yes-point " + w.str());
        return it->second;
    };
}

namespace {

struct DelayImpl final : Learner::Impl {
    Learner inner;
    CostOracle tau;

    DelayImpl(Learner l, CostOracle t) : inner(std::move(l)), tau(std::move(t)) {}

    std::uint64_t tau_checked(const BitString& w) const {
        std::uint64_t t = tau(w);
        if (t < 1)
            throw std::invalid_argument("delay_learner: cost oracle must be >= 1 at '" + w.str() +
                                        "'");
        return t;
    }

    bool eval(const BitString& w) const override {
        // l̂(w): some proper prefix w' fired with tau(w') = |w| - |w'|
        auto cur = inner.cursor();
        BitString node;
        for (std::size_t len = 0; len < w.size(); ++len) {
            if (len > 0) {
                node.push_back(w.bit(len - 1));
                cur->advance(w.bit(len - 1));
            }
            if (cur->answer() && len + tau_checked(node) == w.size()) return true;
        }
        return false;
    }

    class W final : public Learner::Walker {
    public:
        explicit W(const DelayImpl* impl) : impl_(impl), wk_(impl->inner.walker()) {
            levels_.push_back(Level{});
            if (wk_->answer()) schedule(levels_.back());
        }
        bool answer() const override { return levels_.back().fired; }
        void push(int bit) override {
            path_.push_back(bit);
            wk_->push(bit);
            Level lvl;
            lvl.fired = pending_.count(path_.size()) > 0;
            levels_.push_back(lvl);
            if (wk_->answer()) schedule(levels_.back());
        }
        void pop() override {
            if (levels_.back().scheduled) pending_.erase(pending_.find(*levels_.back().scheduled));
            levels_.pop_back();
            wk_->pop();
            path_.pop_back();
        }

    private:
        struct Level {
            bool fired = false;
            std::optional<std::uint64_t> scheduled;
        };
        void schedule(Level& lvl) {
            std::uint64_t target = path_.size() + impl_->tau_checked(path_);
            lvl.scheduled = target;
            pending_.insert(target);
        }
        const DelayImpl* impl_;
        std::unique_ptr<Learner::Walker> wk_;
        BitString path_;
        std::vector<Level> levels_;
        std::multiset<std::uint64_t> pending_;
    };

    class C final : public Learner::Cursor {
    public:
        explicit C(const DelayImpl* impl) : impl_(impl), cur_(impl->inner.cursor()) {
            if (cur_->answer()) schedule();
        }
        bool answer() const override { return fired_; }
        void advance(int bit) override {
            path_.push_back(bit);
            cur_->advance(bit);
            fired_ = pending_.count(path_.size()) > 0;
            pending_.erase(path_.size()); // spent (and merged) targets
            if (cur_->answer()) schedule();
        }

    private:
        void schedule() { pending_.insert(path_.size() + impl_->tau_checked(path_)); }
        const DelayImpl* impl_;
        std::unique_ptr<Learner::Cursor> cur_;
        BitString path_;
        std::multiset<std::uint64_t> pending_;
        bool fired_ = false;
    };

    std::unique_ptr<Learner::Walker> walker() const override { return std::make_unique<W>(this); }
    std::unique_ptr<Learner::Cursor> cursor() const override { return std::make_unique<C>(this); }
};

} // namespace

Learner delay_learner(const Learner& l, CostOracle tau) {
    auto impl = std::make_shared<DelayImpl>(l, std::move(tau));
    impl->name = "delayed(" + l.name() + ")";
    return Learner(impl);
}

// ---------------------------------------------------------------------------
// Unions

namespace {

struct UnionState {
    bool seen1 = false, seen2 = false;
    std::uint64_t union_count = 0;
    bool fired = false;
};

struct UnionImpl final : Learner::Impl {
    Learner l1, l2;
    UnionMode mode;

    UnionImpl(Learner a, Learner b, UnionMode m) : l1(std::move(a)), l2(std::move(b)), mode(m) {}

    UnionState transition(const UnionState& prev, bool f1, bool f2) const {
        UnionState s = prev;
        s.fired = false;
        bool u = f1 || f2;
        if (u) ++s.union_count;
        if (mode == UnionMode::paper) {
            // a firing passes if its component has already fired strictly earlier
            s.fired = (f1 && prev.seen1) || (f2 && prev.seen2);
        } else {
            s.fired = u && s.union_count >= 4 && s.union_count % 2 == 0;
        }
        s.seen1 = prev.seen1 || f1;
        s.seen2 = prev.seen2 || f2;
        return s;
    }

    bool eval(const BitString& w) const override {
        auto c1 = l1.cursor(), c2 = l2.cursor();
        UnionState s = transition(UnionState{}, c1->answer(), c2->answer());
        for (std::size_t i = 0; i < w.size(); ++i) {
            c1->advance(w.bit(i));
            c2->advance(w.bit(i));
            s = transition(s, c1->answer(), c2->answer());
        }
        return s.fired;
    }

    class W final : public Learner::Walker {
    public:
        explicit W(const UnionImpl* impl)
            : impl_(impl), w1_(impl->l1.walker()), w2_(impl->l2.walker()) {
            stack_.push_back(impl_->transition(UnionState{}, w1_->answer(), w2_->answer()));
        }
        bool answer() const override { return stack_.back().fired; }
        void push(int bit) override {
            w1_->push(bit);
            w2_->push(bit);
            stack_.push_back(impl_->transition(stack_.back(), w1_->answer(), w2_->answer()));
        }
        void pop() override {
            stack_.pop_back();
            w1_->pop();
            w2_->pop();
        }

    private:
        const UnionImpl* impl_;
        std::unique_ptr<Learner::Walker> w1_, w2_;
        std::vector<UnionState> stack_;
    };

    class C final : public Learner::Cursor {
    public:
        explicit C(const UnionImpl* impl)
            : impl_(impl), c1_(impl->l1.cursor()), c2_(impl->l2.cursor()) {
            state_ = impl_->transition(UnionState{}, c1_->answer(), c2_->answer());
        }
        bool answer() const override { return state_.fired; }
        void advance(int bit) override {
            c1_->advance(bit);
            c2_->advance(bit);
            state_ = impl_->transition(state_, c1_->answer(), c2_->answer());
        }

    private:
        const UnionImpl* impl_;
        std::unique_ptr<Learner::Cursor> c1_, c2_;
        UnionState state_;
    };

    std::unique_ptr<Learner::Walker> walker() const override { return std::make_unique<W>(this); }
    std::unique_ptr<Learner::Cursor> cursor() const override { return std::make_unique<C>(this); }
};

} // namespace

Learner union_learners(const Learner& l1, const Learner& l2, UnionMode mode) {
    auto impl = std::make_shared<UnionImpl>(l1, l2, mode);
    impl->name = std::string(mode == UnionMode::paper ? "union" : "union-decimated") + "(" +
                 l1.name() + "," + l2.name() + ")";
    return Learner(impl);
}

// ---------------------------------------------------------------------------
// Staged martingales and the path-average witness

StagedMartingale StagedMartingale::capped(const Martingale& d) {
    return StagedMartingale(
        [d](const BitString& w, std::uint64_t k) {
            if (k > (1u << 20)) throw std::invalid_argument("StagedMartingale: stage too large");
            Ratio v = d.value(w);
            Ratio cap = Ratio::pow2(static_cast<long long>(k));
            return v > cap ? cap : v;
        },
        "capped(" + d.name() + ")");
}

Ratio avg_witness(const StagedMartingale& dk, const BitString& w, std::uint64_t k) {
    if (w.empty()) throw std::invalid_argument("avg_witness: |w| must be >= 1");
    long long best = 0; // clamped below at 0
    BitString node;
    for (std::size_t i = 0; i <= w.size(); ++i) {
        Ratio v = dk.at(node, k);
        if (v.sign() > 0) best = std::max(best, v.floor_log2());
        if (i < w.size()) node.push_back(w.bit(i));
    }
    return Ratio(Int(best), Int(w.size()));
}

// ---------------------------------------------------------------------------
// Detection traces

DensityTrace detection_report(const Learner& l, const SequenceSource& X, std::uint64_t horizon,
                              DetectionMode mode, double tail_fraction) {
    if (horizon < 1) throw std::invalid_argument("detection_report: horizon must be >= 1");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw std::invalid_argument("detection_report: tail fraction must lie in (0,1]");

    DensityTrace trace;
    trace.mode = mode;
    trace.horizon = horizon;
    trace.tail_fraction = tail_fraction;
    trace.yes_cum.reserve(horizon + 1);

    auto cur = l.cursor();
    std::uint64_t count = cur->answer() ? 1 : 0;
    if (count) trace.yes_positions.push_back(0);
    trace.yes_cum.push_back(count);
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        cur->advance(X.bit(n - 1));
        if (cur->answer()) {
            ++count;
            trace.yes_positions.push_back(n);
        }
        trace.yes_cum.push_back(count);
    }

    auto tail_len = static_cast<std::uint64_t>(static_cast<double>(horizon) * tail_fraction);
    tail_len = std::max<std::uint64_t>(1, std::min(tail_len, horizon));
    std::uint64_t start = horizon - tail_len + 1;
    bool first = true;
    for (std::uint64_t n = start; n <= horizon; ++n) {
        Ratio avg = trace.avg_at(n);
        if (first) {
            trace.tail_max = trace.tail_min = avg;
            first = false;
        } else {
            if (avg > trace.tail_max) trace.tail_max = avg;
            if (avg < trace.tail_min) trace.tail_min = avg;
        }
    }
    trace.s_weak = Ratio(1) - trace.tail_max;
    trace.s_strong = Ratio(1) - trace.tail_min;
    return trace;
}

} // namespace aldim
