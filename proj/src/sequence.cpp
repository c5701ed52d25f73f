#include "aldim/sequence.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace aldim {

struct SequenceSource::Impl {
    virtual ~Impl() = default;
    virtual int bit(std::uint64_t i) const = 0;
    virtual std::optional<std::uint64_t> length() const = 0;
    std::string provenance;
};

int SequenceSource::bit(std::uint64_t i) const {
    if (auto len = impl_->length(); len && i >= *len)
        throw std::out_of_range("SequenceSource: index " + std::to_string(i) +
                                " beyond length " + std::to_string(*len));
    return impl_->bit(i);
}

std::optional<std::uint64_t> SequenceSource::length() const { return impl_->length(); }
const std::string& SequenceSource::provenance() const { return impl_->provenance; }

BitString SequenceSource::prefix(std::size_t n) const {
    BitString w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(bit(i));
    return w;
}

namespace {

struct PackedBits {
    std::vector<std::uint64_t> words;
    std::uint64_t n = 0;

    void push(int b) {
        std::uint64_t word = n / 64, off = n % 64;
        if (off == 0) words.push_back(0);
        if (b) words[word] |= std::uint64_t{1} << (63 - off);
        ++n;
    }
    int get(std::uint64_t i) const {
        return static_cast<int>((words[i / 64] >> (63 - i % 64)) & 1);
    }
};

struct PackedImpl final : SequenceSource::Impl {
    PackedBits bits;
    int bit(std::uint64_t i) const override { return bits.get(i); }
    std::optional<std::uint64_t> length() const override { return bits.n; }
};

struct PeriodicImpl final : SequenceSource::Impl {
    BitString pattern;
    int bit(std::uint64_t i) const override { return pattern.bit(i % pattern.size()); }
    std::optional<std::uint64_t> length() const override { return std::nullopt; }
};

struct DiluteImpl final : SequenceSource::Impl {
    std::shared_ptr<const SequenceSource> inner;
    std::uint64_t k = 1;
    int bit(std::uint64_t i) const override { return i % k == 0 ? inner->bit(i / k) : 0; }
    std::optional<std::uint64_t> length() const override {
        auto len = inner->length();
        if (!len) return std::nullopt;
        return *len * k;
    }
};

std::uint64_t xorshift64star(std::uint64_t& state) {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1Dull;
}

} // namespace

SequenceSource SequenceSource::bernoulli(const Ratio& p, std::uint64_t seed,
                                         std::uint64_t length) {
    if (p.sign() < 0 || p > Ratio(1))
        throw std::invalid_argument("SequenceSource::bernoulli: p must lie in [0,1]");
    auto impl = std::make_shared<PackedImpl>();
    impl->provenance = "bernoulli:p=" + p.str() + ",seed=" + std::to_string(seed) +
                       ",len=" + std::to_string(length);

    std::uint64_t state = seed ? seed : 0x9E3779B97F4A7C15ull;
    Int num = p.num(), den = p.den();
    bool small = den < (Int(1) << 64);
    Int num_shifted = num << 64;
    for (std::uint64_t i = 0; i < length; ++i) {
        std::uint64_t u = xorshift64star(state);
        bool one;
        if (small) {
            unsigned __int128 lhs =
                static_cast<unsigned __int128>(u) * den.convert_to<std::uint64_t>();
            unsigned __int128 rhs = num.is_zero()
                                        ? static_cast<unsigned __int128>(0)
                                        : (static_cast<unsigned __int128>(num.convert_to<std::uint64_t>()) << 64);
            one = lhs < rhs;
        } else {
            one = Int(u) * den < num_shifted;
        }
        impl->bits.push(one ? 1 : 0);
    }
    return SequenceSource(impl);
}

SequenceSource SequenceSource::periodic(const BitString& pattern) {
    if (pattern.empty()) throw std::invalid_argument("SequenceSource::periodic: empty pattern");
    auto impl = std::make_shared<PeriodicImpl>();
    impl->pattern = pattern;
    impl->provenance = "periodic:pattern=" + pattern.str();
    return SequenceSource(impl);
}

SequenceSource SequenceSource::dilute(SequenceSource inner, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("SequenceSource::dilute: k must be >= 1");
    auto impl = std::make_shared<DiluteImpl>();
    impl->provenance = "dilute:k=" + std::to_string(k) + ",of=(" + inner.provenance() + ")";
    impl->inner = std::make_shared<SequenceSource>(std::move(inner));
    impl->k = k;
    return SequenceSource(impl);
}

SequenceSource SequenceSource::from_bits(BitString bits, std::string provenance) {
    auto impl = std::make_shared<PackedImpl>();
    for (std::size_t i = 0; i < bits.size(); ++i) impl->bits.push(bits.bit(i));
    impl->provenance = std::move(provenance);
    return SequenceSource(impl);
}

SequenceSource read_sequence(std::istream& in, std::string provenance) {
    std::string first;
    if (!std::getline(in, first))
        throw std::runtime_error("sequence file: empty input");

    auto impl = std::make_shared<PackedImpl>();
    impl->provenance = std::move(provenance);

    if (first.rfind("bits ", 0) == 0) {
        std::uint64_t n = 0;
        try {
            n = std::stoull(first.substr(5));
        } catch (...) {
            throw std::runtime_error("sequence file: bad packed header '" + first + "'");
        }
        std::uint64_t bytes = (n + 7) / 8;
        std::vector<char> raw(bytes);
        in.read(raw.data(), static_cast<std::streamsize>(bytes));
        if (static_cast<std::uint64_t>(in.gcount()) != bytes)
            throw std::runtime_error("sequence file: truncated packed payload");
        for (std::uint64_t i = 0; i < n; ++i) {
            auto byte = static_cast<unsigned char>(raw[i / 8]);
            impl->bits.push((byte >> (7 - i % 8)) & 1);
        }
        return SequenceSource(impl);
    }

    std::uint64_t pos = 0;
    auto consume = [&](const std::string& chunk) {
        for (char c : chunk) {
            ++pos;
            if (c == '0' || c == '1')
                impl->bits.push(c - '0');
            else if (c == '\r' || c == ' ' || c == '\t')
                continue;
            else
                throw std::runtime_error("sequence file: bad character '" + std::string(1, c) +
                                         "' at offset " + std::to_string(pos));
        }
    };
    consume(first);
    std::string line;
    while (std::getline(in, line)) {
        ++pos; // the newline itself
        consume(line);
    }
    return SequenceSource(impl);
}

SequenceSource read_sequence_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    return read_sequence(in, "file:path=" + path);
}

void write_sequence(std::ostream& out, const SequenceSource& X, std::uint64_t n, bool packed) {
    if (packed) {
        out << "bits " << n << "\n";
        unsigned char byte = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            byte = static_cast<unsigned char>((byte << 1) | X.bit(i));
            if (i % 8 == 7) {
                out.put(static_cast<char>(byte));
                byte = 0;
            }
        }
        if (n % 8 != 0) {
            byte = static_cast<unsigned char>(byte << (8 - n % 8));
            out.put(static_cast<char>(byte));
        }
        return;
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        out.put(X.bit(i) ? '1' : '0');
        if (i % 64 == 63) out.put('\n');
    }
    if (n % 64 != 0) out.put('\n');
}

void write_sequence_file(const std::string& path, const SequenceSource& X, std::uint64_t n,
                         bool packed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open sequence file for writing: " + path);
    write_sequence(out, X, n, packed);
}

} // namespace aldim
