#pragma once

#include "aldim/bitstring.hpp"

#include <memory>
#include <string>

namespace aldim {

/// A lossless binary coder. decode(encode(w), |w|) == w; the bit length of
/// the output is the complexity proxy.
class Coder {
public:
    virtual ~Coder() = default;
    virtual BitString encode(const BitString& w) const = 0;
    virtual BitString decode(const BitString& code, std::size_t n_bits) const = 0;
    virtual const std::string& name() const = 0;
};

/// Adaptive binary arithmetic coder with the add-half (Krichevsky-Trofimov)
/// estimator. Order 0 keeps one counter pair; order 1 conditions on the
/// previous bit (the first bit uses context 0).
class KtCoder final : public Coder {
public:
    explicit KtCoder(unsigned order = 0);
    BitString encode(const BitString& w) const override;
    BitString decode(const BitString& code, std::size_t n_bits) const override;
    const std::string& name() const override { return name_; }

    /// Ideal (unquantized) KT code length in bits: -log2 of the KT
    /// probability of w. Reference value for redundancy checks.
    double ideal_codelen(const BitString& w) const;

private:
    unsigned order_;
    std::string name_;
};

std::unique_ptr<Coder> make_coder(const std::string& method);

} // namespace aldim
