#ifndef GRACT_DAC_VECTOR_HPP
#define GRACT_DAC_VECTOR_HPP

#include "gract/bit_vector.hpp"
#include "gract/int_vector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gract {

/// Directly Addressable Codes: each value is split into chunks of `chunk_bits`
/// bits; level l stores the l-th chunk of every value that has one, and a
/// continuation bitvector per level tells whether the value goes on. The index
/// at level l+1 of a value is rank1 of its continuation bit at level l.
class DacVector {
public:
    DacVector() = default;
    DacVector(std::span<const std::uint64_t> values, unsigned chunk_bits = 8);

    std::size_t size() const { return size_; }
    unsigned chunk_bits() const { return chunk_bits_; }
    std::size_t num_levels() const { return chunks_.size(); }

    std::uint64_t operator[](std::size_t i) const { return access(i); }
    std::uint64_t access(std::size_t i) const;

    /// Number of levels that hold a chunk of element i.
    std::size_t levels_of(std::size_t i) const;

    std::vector<std::uint64_t> decode_all() const;

    void save(ByteWriter& out) const;
    static DacVector load(ByteReader& in);

private:
    std::vector<IntVector> chunks_;
    std::vector<BitVector> more_;   // one per level except the last
    std::size_t size_ = 0;
    unsigned chunk_bits_ = 8;
};

} // namespace gract

#endif // GRACT_DAC_VECTOR_HPP
