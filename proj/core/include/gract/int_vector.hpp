#ifndef GRACT_INT_VECTOR_HPP
#define GRACT_INT_VECTOR_HPP

#include "gract/byte_io.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gract {

/// Number of bits needed to write v in binary (0 for v == 0).
inline unsigned bit_width_of(std::uint64_t v) {
    unsigned w = 0;
    while (v) {
        ++w;
        v >>= 1;
    }
    return w;
}

/// Fixed-width packed integer array, width in [0, 64].
class IntVector {
public:
    IntVector() = default;
    IntVector(std::size_t n, unsigned width);

    /// Packs `values` with the smallest width that fits the maximum.
    static IntVector from_values(std::span<const std::uint64_t> values);

    std::size_t size() const { return size_; }
    unsigned width() const { return width_; }

    std::uint64_t operator[](std::size_t i) const;
    void set(std::size_t i, std::uint64_t v);

    std::size_t size_in_bytes() const { return words_.size() * 8; }

    void save(ByteWriter& out) const;
    static IntVector load(ByteReader& in);

    friend bool operator==(const IntVector&, const IntVector&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
    unsigned width_ = 0;
};

/// Maps signed to unsigned so that small magnitudes stay small: 0,-1,1,-2,2 -> 0,1,2,3,4.
constexpr std::uint64_t zigzag(std::int64_t x) {
    return x >= 0 ? static_cast<std::uint64_t>(x) << 1
                  : (static_cast<std::uint64_t>(-(x + 1)) << 1) | 1U;
}

constexpr std::int64_t unzigzag(std::uint64_t n) {
    return (n & 1U) ? -static_cast<std::int64_t>(n >> 1) - 1 : static_cast<std::int64_t>(n >> 1);
}

} // namespace gract

#endif // GRACT_INT_VECTOR_HPP
