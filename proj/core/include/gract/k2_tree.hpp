#ifndef GRACT_K2_TREE_HPP
#define GRACT_K2_TREE_HPP

#include "gract/bit_vector.hpp"
#include "gract/byte_io.hpp"
#include "gract/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gract {

/// One occupied cell found by a region report. `leaf_ordinal` is 1-based among the ones of L.
struct RegionHit {
    Cell cell;
    std::size_t leaf_ordinal = 0;

    friend bool operator==(const RegionHit&, const RegionHit&) = default;
};

/// Result of climbing one level from a position of T:L.
struct ParentLink {
    std::size_t parent_bit = 0;     ///< position in T of the parent's 1-bit
    std::size_t block_start = 0;    ///< first position of the k^2 block holding parent_bit
    std::size_t child_ordinal = 0;  ///< parent_bit mod k^2: its submatrix within its own parent
};

/// Binary matrix stored as a k^2-tree.
///
/// The matrix is padded to side = k^h >= max(width, height). Children of a node
/// are ordered left to right, then top to bottom: the child holding column digit
/// dx and row digit dy has ordinal dy * k + dx. T holds every level but the last,
/// levelwise; L holds the last level (individual cells). Positions below are
/// 0-based offsets into the concatenation T:L, with the root's children at
/// [0, k^2).
class K2Tree {
public:
    K2Tree() = default;

    static K2Tree build(std::span<const Cell> points, std::uint32_t width, std::uint32_t height,
                        std::uint32_t k = 2);

    std::uint32_t k() const { return k_; }
    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }
    std::uint64_t side() const { return side_; }
    std::uint32_t height_levels() const { return levels_; }
    const BitVector& T() const { return t_; }
    const BitVector& L() const { return l_; }
    std::size_t num_points() const { return l_.count_ones(); }

    /// Bit at position p of T:L.
    bool bit(std::size_t p) const { return p < t_.size() ? t_[p] : l_[p - t_.size()]; }

    /// First position of the children of the 1-bit at T position p.
    std::size_t child(std::size_t p) const;

    /// Parent of position p of T:L; empty for the root block.
    std::optional<ParentLink> parent(std::size_t p) const;

    bool contains(std::int64_t x, std::int64_t y) const;

    /// 1-based ordinal of the cell among the ones of L, empty if the cell is 0.
    std::optional<std::size_t> leaf_ordinal(std::int64_t x, std::int64_t y) const;

    /// Inverse of leaf_ordinal: climbs from the leaf to the root.
    Cell cell_of_leaf(std::size_t ordinal) const;

    /// Occupied cells inside `rect` (clipped to the logical matrix), in leaf order.
    std::vector<RegionHit> report_region(const Rect& rect) const;

    void save(ByteWriter& out) const;
    static K2Tree load(ByteReader& in);

private:
    void check_cell(std::int64_t x, std::int64_t y) const;
    std::optional<std::size_t> leaf_position(std::int64_t x, std::int64_t y) const;
    void report(const Rect& r, std::size_t block, std::uint64_t x0, std::uint64_t y0,
                std::uint64_t sub, std::vector<RegionHit>& out) const;

    BitVector t_;
    BitVector l_;
    std::uint32_t k_ = 2;
    std::uint32_t k2_ = 4;
    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::uint32_t levels_ = 1;
    std::uint64_t side_ = 2;
};

} // namespace gract

#endif // GRACT_K2_TREE_HPP
