#ifndef GRACT_SNAPSHOT_HPP
#define GRACT_SNAPSHOT_HPP

#include "gract/bit_vector.hpp"
#include "gract/byte_io.hpp"
#include "gract/geometry.hpp"
#include "gract/int_vector.hpp"
#include "gract/k2_tree.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace gract {

struct PresentEntry {
    ObjectId object = 0;
    Cell cell;
};

/// Last known state of an object missing at a snapshot instant.
struct AbsentInfo {
    static constexpr std::int64_t kNeverSeen = -1;

    Cell last_cell;
    std::int64_t last_instant = kNeverSeen;   ///< kNeverSeen if the object has not appeared yet

    bool never_seen() const { return last_instant == kNeverSeen; }
    friend bool operator==(const AbsentInfo&, const AbsentInfo&) = default;
};

struct AbsentEntry {
    ObjectId object = 0;
    AbsentInfo info;
};

struct ObjectAt {
    ObjectId object = 0;
    Cell cell;

    friend bool operator==(const ObjectAt&, const ObjectAt&) = default;
    friend auto operator<=>(const ObjectAt&, const ObjectAt&) = default;
};

/// Absolute positions of every object at one instant.
///
/// The k^2-tree marks occupied cells. `perm` lists object ids grouped by leaf in
/// L order (ascending ids within a leaf); Q[i] = 1 when perm[i+1] belongs to the
/// same leaf, 0 when perm[i] closes its leaf. Objects missing at this instant live
/// in the absent table, sorted by id, so the object universe [0, num_objects) is
/// partitioned between perm and the table. Position lookups invert perm by
/// following its cycles, with a back-pointer every `inverse_sample` steps.
class Snapshot {
public:
    Snapshot() = default;

    static Snapshot build(Instant instant, std::uint32_t num_objects, std::span<const PresentEntry> present,
                          std::span<const AbsentEntry> absent, std::uint32_t grid_width,
                          std::uint32_t grid_height, std::uint32_t k = 2, std::uint32_t inverse_sample = 32);

    Instant instant() const { return instant_; }
    std::uint32_t num_objects() const { return static_cast<std::uint32_t>(present_.size()); }
    std::size_t num_present() const { return perm_.size(); }
    const K2Tree& tree() const { return tree_; }
    const BitVector& Q() const { return q_; }
    ObjectId perm_at(std::size_t i) const { return static_cast<ObjectId>(perm_[i]); }

    bool is_present(ObjectId o) const;

    std::vector<ObjectId> objects_in_cell(std::int64_t x, std::int64_t y) const;

    /// Cell of a present object, empty if the object is absent here.
    std::optional<Cell> position_of(ObjectId o) const;

    /// Present objects inside `rect`, ordered by leaf then id.
    std::vector<ObjectAt> objects_in_region(const Rect& rect) const;

    /// Last known state of an absent object, empty if it is present.
    std::optional<AbsentInfo> absent_info(ObjectId o) const;

    std::span<const AbsentEntry> absent_entries() const { return absent_; }

    /// Position in perm of a present object (the inverse permutation).
    std::size_t perm_position(ObjectId o) const;

    void save(ByteWriter& out) const;
    static Snapshot load(ByteReader& in);

private:
    void check_object(ObjectId o) const;
    std::uint64_t dense(std::size_t perm_pos) const { return present_.rank1(perm_[perm_pos]); }
    void build_inverse();
    void group_at(std::size_t leaf_ordinal, std::vector<ObjectId>& out) const;

    K2Tree tree_;
    IntVector perm_;
    BitVector q_;
    BitVector present_;        // over object ids
    BitVector inv_marked_;     // over perm positions
    IntVector inv_back_;       // back-pointers of marked positions, by rank
    std::vector<AbsentEntry> absent_;
    Instant instant_ = 0;
    std::uint32_t inverse_sample_ = 32;
};

} // namespace gract

#endif // GRACT_SNAPSHOT_HPP
