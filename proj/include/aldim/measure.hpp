#pragma once

#include "aldim/bitstring.hpp"
#include "aldim/ratio.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace aldim {

/// A finitely-evaluable Borel probability measure on Cantor space:
/// an evaluator w ↦ μ(C_w).
class Measure {
public:
    Measure(std::function<Ratio(const BitString&)> eval, std::string name)
        : eval_(std::move(eval)), name_(std::move(name)) {}

    /// μ(w) = 2^{-|w|}.
    static Measure lebesgue();
    /// Product measure, each bit is 1 with probability p ∈ [0,1].
    static Measure bernoulli(const Ratio& p);

    Ratio operator()(const BitString& w) const { return eval_(w); }
    const std::string& name() const { return name_; }

private:
    std::function<Ratio(const BitString&)> eval_;
    std::string name_;
};

/// μ(C_w), exactly.
inline Ratio cylinder_measure(const Measure& mu, const BitString& w) { return mu(w); }

struct MeasureViolation {
    BitString node;
    std::string detail;
};

struct MeasureValidation {
    bool ok = true;
    std::uint64_t nodes_checked = 0;
    std::optional<MeasureViolation> first; // breadth-first, then lexicographic
};

/// Checks μ(λ) = 1 and μ(w) = μ(w0) + μ(w1) at every node up to `depth`.
MeasureValidation validate_measure(const Measure& mu, unsigned depth);

} // namespace aldim
