#ifndef GRACT_SCDC_HPP
#define GRACT_SCDC_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace gract::scdc {

// (s,c)-Dense Codes over bytes: values [0, s) are stoppers, [s, 256) continuers,
// c = 256 - s. Codewords of k bytes cover the values [base(k), base(k+1)) with
// base(1) = 0 and base(k+1) = base(k) + s * c^(k-1); smaller values never get
// longer codewords. No model is stored: only s.

/// Bytes used by the codeword of v.
std::size_t codeword_length(std::uint64_t v, unsigned s);

void encode_one(std::uint64_t v, unsigned s, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> encode(std::span<const std::uint64_t> values, unsigned s);

/// Decodes the codeword starting at `pos` and moves `pos` past it.
/// Throws FormatError if the data ends inside the codeword.
std::uint64_t decode_next(std::span<const std::uint8_t> bytes, std::size_t& pos, unsigned s);

/// Decodes the codeword ending right before `end` and moves `end` to its first byte.
/// `begin` bounds the search (the start of the enclosing stream).
std::uint64_t decode_prev(std::span<const std::uint8_t> bytes, std::size_t begin, std::size_t& end, unsigned s);

std::vector<std::uint64_t> decode_all(std::span<const std::uint8_t> bytes, unsigned s);

/// The s in [1, 255] minimizing the total encoded size of the histogram
/// (value -> frequency); the smallest such s on ties.
unsigned choose_s(const std::map<std::uint64_t, std::uint64_t>& histogram);

/// Total encoded bytes of a histogram under s.
std::uint64_t encoded_size(const std::map<std::uint64_t, std::uint64_t>& histogram, unsigned s);

} // namespace gract::scdc

#endif // GRACT_SCDC_HPP
