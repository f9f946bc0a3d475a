#include "gract/dac_vector.hpp"

#include "gract/error.hpp"

namespace gract {

DacVector::DacVector(std::span<const std::uint64_t> values, unsigned chunk_bits)
    : size_(values.size()), chunk_bits_(chunk_bits) {
    if (chunk_bits == 0 || chunk_bits > 64) throw ValidationError("DAC chunk width must be in [1, 64]");
    const std::uint64_t mask = chunk_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << chunk_bits) - 1;

    std::vector<std::uint64_t> cur(values.begin(), values.end());
    do {
        IntVector chunk(cur.size(), chunk_bits);
        BitBuilder more;
        std::vector<std::uint64_t> next;
        bool any = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            chunk.set(i, cur[i] & mask);
            std::uint64_t rest = chunk_bits == 64 ? 0 : cur[i] >> chunk_bits;
            more.push_back(rest != 0);
            if (rest != 0) {
                next.push_back(rest);
                any = true;
            }
        }
        chunks_.push_back(std::move(chunk));
        if (!any) break;
        more_.emplace_back(std::move(more));
        cur = std::move(next);
    } while (true);
}

std::uint64_t DacVector::access(std::size_t i) const {
    if (i >= size_) throw RangeError("DAC index out of range");
    std::uint64_t v = 0;
    unsigned shift = 0;
    for (std::size_t l = 0;; ++l) {
        v |= chunks_[l][i] << shift;
        if (l == more_.size() || !more_[l][i]) return v;
        i = more_[l].rank1(i);
        shift += chunk_bits_;
    }
}

std::size_t DacVector::levels_of(std::size_t i) const {
    if (i >= size_) throw RangeError("DAC index out of range");
    std::size_t l = 0;
    while (l < more_.size() && more_[l][i]) {
        i = more_[l].rank1(i);
        ++l;
    }
    return l + 1;
}

// Sequential decode: walks every level with its own cursor, no rank calls.
std::vector<std::uint64_t> DacVector::decode_all() const {
    std::vector<std::uint64_t> out(size_, 0);
    // owner[l][j] = index in `out` of the j-th element stored at level l.
    std::vector<std::size_t> owner(size_);
    for (std::size_t i = 0; i < size_; ++i) owner[i] = i;
    unsigned shift = 0;
    for (std::size_t l = 0; l < chunks_.size(); ++l) {
        std::vector<std::size_t> next_owner;
        for (std::size_t j = 0; j < owner.size(); ++j) {
            out[owner[j]] |= chunks_[l][j] << shift;
            if (l < more_.size() && more_[l][j]) next_owner.push_back(owner[j]);
        }
        owner = std::move(next_owner);
        shift += chunk_bits_;
    }
    return out;
}

void DacVector::save(ByteWriter& out) const {
    out.u64(size_);
    out.u8(static_cast<std::uint8_t>(chunk_bits_));
    out.u8(static_cast<std::uint8_t>(chunks_.size()));
    for (std::size_t l = 0; l < chunks_.size(); ++l) {
        chunks_[l].save(out);
        if (l < more_.size()) more_[l].save(out);
    }
}

DacVector DacVector::load(ByteReader& in) {
    DacVector d;
    d.size_ = in.u64();
    d.chunk_bits_ = in.u8();
    if (d.chunk_bits_ == 0 || d.chunk_bits_ > 64) throw FormatError("bad DAC chunk width");
    auto levels = in.u8();
    if (levels == 0) throw FormatError("DAC without levels");
    for (unsigned l = 0; l < levels; ++l) {
        d.chunks_.push_back(IntVector::load(in));
        if (l + 1 < levels) d.more_.push_back(BitVector::load(in));
    }
    if (d.chunks_[0].size() != d.size_) throw FormatError("DAC level size mismatch");
    for (std::size_t l = 0; l < d.more_.size(); ++l) {
        if (d.more_[l].size() != d.chunks_[l].size() || d.more_[l].count_ones() != d.chunks_[l + 1].size())
            throw FormatError("DAC level size mismatch");
    }
    return d;
}

} // namespace gract
