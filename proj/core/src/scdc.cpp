#include "gract/scdc.hpp"

#include "gract/error.hpp"

#include <limits>
#include <string>

namespace gract::scdc {

namespace {

// Only reachable with c = 1, where lengths grow linearly with the value.
constexpr std::size_t kMaxCodewordBytes = 1 << 16;

void check_s(unsigned s) {
    if (s < 1 || s > 255) throw ValidationError("SCDC stopper count must be in [1, 255]");
}

// Codeword length k and base(k) for v.
std::pair<std::size_t, std::uint64_t> locate(std::uint64_t v, unsigned s) {
    const std::uint64_t c = 256 - s;
    if (c == 1) return {static_cast<std::size_t>(v / s) + 1, v / s * s};
    std::uint64_t base = 0;
    std::uint64_t span = s;   // s * c^(k-1)
    std::size_t k = 1;
    while (v - base >= span) {
        base += span;
        ++k;
        span = span > std::numeric_limits<std::uint64_t>::max() / c ? std::numeric_limits<std::uint64_t>::max()
                                                                     : span * c;
    }
    return {k, base};
}

} // namespace

std::size_t codeword_length(std::uint64_t v, unsigned s) {
    check_s(s);
    return locate(v, s).first;
}

void encode_one(std::uint64_t v, unsigned s, std::vector<std::uint8_t>& out) {
    check_s(s);
    const std::uint64_t c = 256 - s;
    auto [k, base] = locate(v, s);
    if (k > kMaxCodewordBytes)
        throw ValidationError("value " + std::to_string(v) + " needs a " + std::to_string(k) +
                              "-byte SCDC codeword with s = " + std::to_string(s));
    const std::uint64_t x = v - base;
    std::uint64_t q = x / s;
    const std::size_t first = out.size();
    out.resize(first + k);
    out[first + k - 1] = static_cast<std::uint8_t>(x % s);
    for (std::size_t i = k - 1; i > 0; --i) {
        out[first + i - 1] = static_cast<std::uint8_t>(s + q % c);
        q /= c;
    }
}

std::vector<std::uint8_t> encode(std::span<const std::uint64_t> values, unsigned s) {
    std::vector<std::uint8_t> out;
    out.reserve(values.size());
    for (auto v : values) encode_one(v, s, out);
    return out;
}

std::uint64_t decode_next(std::span<const std::uint8_t> bytes, std::size_t& pos, unsigned s) {
    const std::uint64_t c = 256 - s;
    std::uint64_t q = 0;
    std::uint64_t base = 0;
    std::uint64_t span = s;
    for (;;) {
        if (pos >= bytes.size()) throw FormatError("SCDC stream ends inside a codeword");
        const std::uint8_t b = bytes[pos++];
        if (b < s) return base + q * s + b;
        q = q * c + (b - s);
        base += span;
        span *= c;
    }
}

std::uint64_t decode_prev(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t& end, unsigned s) {
    if (end <= begin || bytes[end - 1] >= s) throw FormatError("no SCDC codeword ends here");
    std::size_t start = end - 1;
    while (start > begin && bytes[start - 1] >= s) --start;
    std::size_t pos = start;
    std::uint64_t v = decode_next(bytes, pos, s);
    end = start;
    return v;
}

std::vector<std::uint64_t> decode_all(std::span<const std::uint8_t> bytes, unsigned s) {
    check_s(s);
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < bytes.size()) out.push_back(decode_next(bytes, pos, s));
    return out;
}

std::uint64_t encoded_size(const std::map<std::uint64_t, std::uint64_t>& histogram, unsigned s) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    for (const auto& [v, f] : histogram) {
        const std::uint64_t len = codeword_length(v, s);
        if (f != 0 && len > (kMax - total) / f) return kMax;   // saturate
        total += len * f;
    }
    return total;
}

unsigned choose_s(const std::map<std::uint64_t, std::uint64_t>& histogram) {
    if (histogram.empty()) throw ValidationError("SCDC histogram is empty");
    unsigned best = 1;
    std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
    for (unsigned s = 1; s <= 255; ++s) {
        auto size = encoded_size(histogram, s);
        if (size < best_size) {
            best_size = size;
            best = s;
        }
    }
    return best;
}

} // namespace gract::scdc
