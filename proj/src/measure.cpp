#include "aldim/measure.hpp"

#include <deque>

namespace aldim {

Measure Measure::lebesgue() {
    return Measure([](const BitString& w) { return Ratio::pow2(-static_cast<long long>(w.size())); },
                   "lebesgue");
}

Measure Measure::bernoulli(const Ratio& p) {
    if (p.sign() < 0 || p > Ratio(1))
        throw std::invalid_argument("Measure::bernoulli: p must lie in [0,1]");
    Ratio q = Ratio(1) - p;
    return Measure(
        [p, q](const BitString& w) {
            Ratio m(1);
            for (std::size_t i = 0; i < w.size(); ++i) m *= w.bit(i) ? p : q;
            return m;
        },
        "bernoulli(" + p.str() + ")");
}

MeasureValidation validate_measure(const Measure& mu, unsigned depth) {
    MeasureValidation report;
    BitString root;
    Ratio at_root = mu(root);
    ++report.nodes_checked;
    if (at_root != Ratio(1)) {
        report.ok = false;
        report.first = MeasureViolation{root, "mu(lambda) = " + at_root.str() + ", expected 1"};
        return report;
    }

    std::deque<std::pair<BitString, Ratio>> queue;
    queue.emplace_back(root, at_root);
    while (!queue.empty()) {
        auto [w, value] = queue.front();
        queue.pop_front();
        if (w.size() == depth) continue;
        Ratio v0 = mu(w.extended(0)), v1 = mu(w.extended(1));
        ++report.nodes_checked;
        if (v0 + v1 != value) {
            report.ok = false;
            report.first = MeasureViolation{
                w, "mu(w0)+mu(w1) = " + (v0 + v1).str() + ", expected mu(w) = " + value.str()};
            return report;
        }
        if (v0.sign() < 0 || v1.sign() < 0) {
            report.ok = false;
            report.first = MeasureViolation{w, "negative child measure"};
            return report;
        }
        queue.emplace_back(w.extended(0), v0);
        queue.emplace_back(w.extended(1), v1);
    }
    return report;
}

} // namespace aldim
