#include "gract/bit_vector.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace gract {

namespace {

// Position of the j-th (1-based) set bit of w; requires popcount(w) >= j.
unsigned select_in_word(std::uint64_t w, std::size_t j) {
    for (std::size_t k = 1; k < j; ++k) w &= w - 1;
    return static_cast<unsigned>(std::countr_zero(w));
}

} // namespace

BitBuilder::BitBuilder(std::size_t n, bool value)
    : words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(n) {
    if (value && (n & 63)) words_.back() &= (std::uint64_t{1} << (n & 63)) - 1;
}

void BitBuilder::push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
    ++size_;
}

void BitBuilder::set(std::size_t i, bool bit) {
    auto mask = std::uint64_t{1} << (i & 63);
    if (bit)
        words_[i >> 6] |= mask;
    else
        words_[i >> 6] &= ~mask;
}

BitVector::BitVector(BitBuilder&& builder)
    : words_(std::move(builder.words_)), size_(builder.size_) {
    build_directory();
}

BitVector::BitVector(std::vector<std::uint64_t> words, std::size_t size)
    : words_(std::move(words)), size_(size) {
    if (words_.size() != (size_ + 63) / 64) throw FormatError("bit vector word count mismatch");
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
    build_directory();
}

void BitVector::build_directory() {
    std::size_t nsuper = (words_.size() + kWordsPerSuper - 1) / kWordsPerSuper;
    super_.assign(nsuper + 1, 0);
    rel_.assign(words_.size(), 0);
    std::size_t total = 0;
    for (std::size_t s = 0; s < nsuper; ++s) {
        super_[s] = total;
        std::size_t rel = 0;
        for (std::size_t w = s * kWordsPerSuper; w < std::min(words_.size(), (s + 1) * kWordsPerSuper); ++w) {
            rel_[w] = static_cast<std::uint16_t>(rel);
            rel += static_cast<std::size_t>(std::popcount(words_[w]));
        }
        total += rel;
    }
    super_[nsuper] = total;
    ones_ = total;
}

bool BitVector::access(std::size_t i) const {
    if (i >= size_) throw RangeError("bit index " + std::to_string(i) + " out of range");
    return (*this)[i];
}

std::size_t BitVector::rank1(std::size_t i) const {
    if (i > size_) throw RangeError("rank position " + std::to_string(i) + " out of range");
    if (i == size_) return ones_;
    std::size_t w = i >> 6;
    std::size_t r = super_[w / kWordsPerSuper] + rel_[w];
    if (i & 63) r += static_cast<std::size_t>(std::popcount(words_[w] & ((std::uint64_t{1} << (i & 63)) - 1)));
    return r;
}

std::size_t BitVector::select1(std::size_t j) const {
    if (j == 0 || j > ones_) throw NotFoundError("select1 ordinal " + std::to_string(j) + " exceeds count");
    // Last superblock whose prefix count is < j.
    auto it = std::lower_bound(super_.begin(), super_.end() - 1, j);
    std::size_t s = static_cast<std::size_t>(it - super_.begin()) - 1;
    std::size_t remaining = j - super_[s];
    std::size_t w = s * kWordsPerSuper;
    for (;; ++w) {
        auto c = static_cast<std::size_t>(std::popcount(words_[w]));
        if (c >= remaining) break;
        remaining -= c;
    }
    return w * 64 + select_in_word(words_[w], remaining);
}

std::size_t BitVector::select0(std::size_t j) const {
    std::size_t zeros = size_ - ones_;
    if (j == 0 || j > zeros) throw NotFoundError("select0 ordinal " + std::to_string(j) + " exceeds count");
    // Binary search on zeros before each superblock: s*512 - super_[s].
    std::size_t lo = 0, hi = super_.size() - 1;   // invariant: zeros_before(lo) < j
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        std::size_t z = mid * kWordsPerSuper * 64 - super_[mid];
        if (z < j)
            lo = mid;
        else
            hi = mid;
    }
    std::size_t remaining = j - (lo * kWordsPerSuper * 64 - super_[lo]);
    std::size_t w = lo * kWordsPerSuper;
    for (;; ++w) {
        std::uint64_t inv = ~words_[w];
        auto c = static_cast<std::size_t>(std::popcount(inv));
        if (c >= remaining) return w * 64 + select_in_word(inv, remaining);
        remaining -= c;
    }
}

std::size_t BitVector::size_in_bytes() const {
    return words_.size() * 8 + super_.size() * 8 + rel_.size() * 2;
}

void BitVector::save(ByteWriter& out) const {
    out.u64(size_);
    for (auto w : words_) out.u64(w);
}

BitVector BitVector::load(ByteReader& in) {
    auto n = in.u64();
    std::size_t nwords = (n + 63) / 64;
    if (nwords > in.remaining() / 8) throw FormatError("truncated bit vector");
    std::vector<std::uint64_t> words(nwords);
    for (auto& w : words) w = in.u64();
    return BitVector(std::move(words), n);
}

} // namespace gract
