#ifndef GRACT_BIT_VECTOR_HPP
#define GRACT_BIT_VECTOR_HPP

#include "gract/byte_io.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gract {

/// Accumulates bits before freezing them into a BitVector.
class BitBuilder {
public:
    BitBuilder() = default;
    explicit BitBuilder(std::size_t n, bool value = false);

    void push_back(bool bit);
    void set(std::size_t i, bool bit);
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    std::size_t size() const { return size_; }

private:
    friend class BitVector;
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

/// Immutable bit vector with rank/select.
///
/// Conventions: rank1(i) counts the ones among the first i bits, i.e. positions
/// [0, i); select1(j) is the 0-based position of the j-th one, j counted from 1.
/// rank is a two-level directory (512-bit superblocks holding absolute counts,
/// 64-bit words holding counts relative to their superblock); select binary
/// searches the superblock samples and scans at most eight words.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(BitBuilder&& builder);
    BitVector(std::vector<std::uint64_t> words, std::size_t size);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::size_t count_ones() const { return ones_; }
    std::size_t count_zeros() const { return size_ - ones_; }

    bool operator[](std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    bool access(std::size_t i) const;

    std::size_t rank1(std::size_t i) const;
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    std::size_t rank(bool bit, std::size_t i) const { return bit ? rank1(i) : rank0(i); }

    std::size_t select1(std::size_t j) const;
    std::size_t select0(std::size_t j) const;
    std::size_t select(bool bit, std::size_t j) const { return bit ? select1(j) : select0(j); }

    /// Heap bytes including the rank directory.
    std::size_t size_in_bytes() const;

    /// Bits only; the directory is rebuilt on load.
    void save(ByteWriter& out) const;
    static BitVector load(ByteReader& in);

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    static constexpr std::size_t kWordsPerSuper = 8;

    void build_directory();
    std::size_t ones_before_super(std::size_t s) const { return super_[s]; }

    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> super_;   // ones before each superblock, plus a final total
    std::vector<std::uint16_t> rel_;     // ones before each word within its superblock
    std::size_t size_ = 0;
    std::size_t ones_ = 0;
};

} // namespace gract

#endif // GRACT_BIT_VECTOR_HPP
