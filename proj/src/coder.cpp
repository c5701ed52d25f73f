#include "aldim/coder.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aldim {

namespace {

// 32-bit integer arithmetic coder (Witten-Neal-Cleary style) with
// bit-granular output, so code lengths are exact.
constexpr std::uint64_t kHalf = 0x80000000ull;
constexpr std::uint64_t kFirstQuarter = 0x40000000ull;
constexpr std::uint64_t kThirdQuarter = 0xC0000000ull;
constexpr std::uint64_t kTop = 0xFFFFFFFFull;
constexpr unsigned kProbBits = 16;

class BitEncoder {
public:
    void encode(int bit, std::uint32_t p1) {
        std::uint64_t range = high_ - low_ + 1;
        std::uint64_t r1 = (range * p1) >> kProbBits;
        if (r1 < 1) r1 = 1;
        if (r1 > range - 1) r1 = range - 1;
        if (bit)
            high_ = low_ + r1 - 1;
        else
            low_ = low_ + r1;

        while (true) {
            if (high_ < kHalf) {
                emit(0);
            } else if (low_ >= kHalf) {
                emit(1);
                low_ -= kHalf;
                high_ -= kHalf;
            } else if (low_ >= kFirstQuarter && high_ < kThirdQuarter) {
                ++pending_;
                low_ -= kFirstQuarter;
                high_ -= kFirstQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
        }
    }

    BitString finish() {
        ++pending_;
        emit(low_ >= kFirstQuarter ? 1 : 0);
        return out_;
    }

private:
    void emit(int bit) {
        out_.push_back(bit);
        for (; pending_; --pending_) out_.push_back(bit ^ 1);
    }

    std::uint64_t low_ = 0, high_ = kTop;
    std::uint64_t pending_ = 0;
    BitString out_;
};

class BitDecoder {
public:
    explicit BitDecoder(const BitString& code) : code_(&code) {
        for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | next();
    }

    int decode(std::uint32_t p1) {
        std::uint64_t range = high_ - low_ + 1;
        std::uint64_t r1 = (range * p1) >> kProbBits;
        if (r1 < 1) r1 = 1;
        if (r1 > range - 1) r1 = range - 1;
        int bit = value_ - low_ < r1 ? 1 : 0;
        if (bit)
            high_ = low_ + r1 - 1;
        else
            low_ = low_ + r1;

        while (true) {
            if (high_ < kHalf) {
                // nothing
            } else if (low_ >= kHalf) {
                low_ -= kHalf;
                high_ -= kHalf;
                value_ -= kHalf;
            } else if (low_ >= kFirstQuarter && high_ < kThirdQuarter) {
                low_ -= kFirstQuarter;
                high_ -= kFirstQuarter;
                value_ -= kFirstQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ = (high_ << 1) | 1;
            value_ = (value_ << 1) | next();
        }
        return bit;
    }

private:
    std::uint64_t next() {
        if (pos_ < code_->size()) return static_cast<std::uint64_t>(code_->bit(pos_++));
        return 0; // implicit zero padding past the code
    }

    const BitString* code_;
    std::size_t pos_ = 0;
    std::uint64_t low_ = 0, high_ = kTop, value_ = 0;
};

// Add-half estimator state: order 0 or order 1 (context = previous bit).
class KtModel {
public:
    explicit KtModel(unsigned order) : order_(order) {}

    std::uint32_t prob_one() const {
        const auto& c = counts_[ctx_];
        std::uint64_t num = (2 * c[1] + 1) << kProbBits;
        std::uint64_t den = 2 * (c[0] + c[1]) + 2;
        auto p = static_cast<std::uint32_t>(num / den);
        if (p < 1) p = 1;
        if (p > (1u << kProbBits) - 1) p = (1u << kProbBits) - 1;
        return p;
    }

    double prob_one_ideal() const {
        const auto& c = counts_[ctx_];
        return (2.0 * static_cast<double>(c[1]) + 1.0) /
               (2.0 * static_cast<double>(c[0] + c[1]) + 2.0);
    }

    void update(int bit) {
        ++counts_[ctx_][bit & 1];
        if (order_ == 1) ctx_ = bit & 1;
    }

private:
    unsigned order_;
    unsigned ctx_ = 0;
    std::uint64_t counts_[2][2] = {{0, 0}, {0, 0}};
};

} // namespace

KtCoder::KtCoder(unsigned order) : order_(order), name_(order ? "kt1" : "kt") {
    if (order > 1) throw std::invalid_argument("KtCoder: order must be 0 or 1");
}

BitString KtCoder::encode(const BitString& w) const {
    BitEncoder enc;
    KtModel model(order_);
    for (std::size_t i = 0; i < w.size(); ++i) {
        int bit = w.bit(i);
        enc.encode(bit, model.prob_one());
        model.update(bit);
    }
    return enc.finish();
}

BitString KtCoder::decode(const BitString& code, std::size_t n_bits) const {
    BitDecoder dec(code);
    KtModel model(order_);
    BitString out;
    for (std::size_t i = 0; i < n_bits; ++i) {
        int bit = dec.decode(model.prob_one());
        model.update(bit);
        out.push_back(bit);
    }
    return out;
}

double KtCoder::ideal_codelen(const BitString& w) const {
    KtModel model(order_);
    double bits = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        int bit = w.bit(i);
        double p1 = model.prob_one_ideal();
        bits -= std::log2(bit ? p1 : 1.0 - p1);
        model.update(bit);
    }
    return bits;
}

std::unique_ptr<Coder> make_coder(const std::string& method) {
    if (method == "kt") return std::make_unique<KtCoder>(0);
    if (method == "kt1") return std::make_unique<KtCoder>(1);
    throw std::invalid_argument("unknown coder '" + method + "' (expected kt or kt1)");
}

} // namespace aldim
