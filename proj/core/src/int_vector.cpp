#include "gract/int_vector.hpp"

#include "gract/error.hpp"

#include <algorithm>

namespace gract {

IntVector::IntVector(std::size_t n, unsigned width)
    : words_((n * width + 63) / 64, 0), size_(n), width_(width) {
    if (width > 64) throw ValidationError("IntVector width above 64");
}

IntVector IntVector::from_values(std::span<const std::uint64_t> values) {
    std::uint64_t mx = 0;
    for (auto v : values) mx = std::max(mx, v);
    IntVector iv(values.size(), bit_width_of(mx));
    for (std::size_t i = 0; i < values.size(); ++i) iv.set(i, values[i]);
    return iv;
}

std::uint64_t IntVector::operator[](std::size_t i) const {
    if (width_ == 0) return 0;
    std::size_t bit = i * width_;
    std::size_t w = bit >> 6;
    unsigned off = bit & 63;
    std::uint64_t v = words_[w] >> off;
    if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
    return width_ == 64 ? v : v & ((std::uint64_t{1} << width_) - 1);
}

void IntVector::set(std::size_t i, std::uint64_t v) {
    if (width_ == 0) return;
    std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
    v &= mask;
    std::size_t bit = i * width_;
    std::size_t w = bit >> 6;
    unsigned off = bit & 63;
    words_[w] = (words_[w] & ~(mask << off)) | (v << off);
    if (off + width_ > 64) {
        unsigned spill = 64 - off;
        words_[w + 1] = (words_[w + 1] & ~(mask >> spill)) | (v >> spill);
    }
}

void IntVector::save(ByteWriter& out) const {
    out.u64(size_);
    out.u8(static_cast<std::uint8_t>(width_));
    for (auto w : words_) out.u64(w);
}

IntVector IntVector::load(ByteReader& in) {
    auto n = in.u64();
    auto width = in.u8();
    if (width > 64) throw FormatError("IntVector width above 64");
    if (width != 0 && n > in.remaining() * 8 / width) throw FormatError("truncated int vector");
    IntVector iv(n, width);
    for (auto& w : iv.words_) w = in.u64();
    return iv;
}

} // namespace gract
