#include "gract/snapshot.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <string>

namespace gract {

Snapshot Snapshot::build(Instant instant, std::uint32_t num_objects, std::span<const PresentEntry> present,
                         std::span<const AbsentEntry> absent, std::uint32_t grid_width, std::uint32_t grid_height,
                         std::uint32_t k, std::uint32_t inverse_sample) {
    if (inverse_sample == 0) throw ValidationError("inverse sample step must be positive");
    if (present.size() + absent.size() != num_objects)
        throw ValidationError("present and absent objects must partition the object universe");

    std::vector<std::uint8_t> seen(num_objects, 0);
    auto mark = [&](ObjectId o) {
        if (o >= num_objects) throw ValidationError("object id " + std::to_string(o) + " outside universe");
        if (seen[o]) throw ValidationError("object " + std::to_string(o) + " listed twice");
        seen[o] = 1;
    };
    for (const auto& p : present) mark(p.object);
    for (const auto& a : absent) mark(a.object);

    Snapshot s;
    s.instant_ = instant;
    s.inverse_sample_ = inverse_sample;

    std::vector<Cell> cells;
    cells.reserve(present.size());
    for (const auto& p : present) cells.push_back(p.cell);
    s.tree_ = K2Tree::build(cells, grid_width, grid_height, k);

    std::vector<std::pair<std::size_t, ObjectId>> order;
    order.reserve(present.size());
    for (const auto& p : present) order.emplace_back(*s.tree_.leaf_ordinal(p.cell.x, p.cell.y), p.object);
    std::sort(order.begin(), order.end());

    s.perm_ = IntVector(order.size(), bit_width_of(num_objects > 0 ? num_objects - 1 : 0));
    BitBuilder q;
    for (std::size_t i = 0; i < order.size(); ++i) {
        s.perm_.set(i, order[i].second);
        q.push_back(i + 1 < order.size() && order[i + 1].first == order[i].first);
    }
    s.q_ = BitVector(std::move(q));

    BitBuilder pres(num_objects);
    for (const auto& p : present) pres.set(p.object, true);
    s.present_ = BitVector(std::move(pres));

    s.absent_.assign(absent.begin(), absent.end());
    std::sort(s.absent_.begin(), s.absent_.end(),
              [](const AbsentEntry& a, const AbsentEntry& b) { return a.object < b.object; });

    s.build_inverse();
    return s;
}

// pi(j) = dense rank of perm[j] among present ids is a permutation of [0, m).
// On every cycle longer than the sample step, every t-th element (starting from
// the smallest position seen) is marked and stores pi^{-t} of itself.
void Snapshot::build_inverse() {
    const std::size_t m = perm_.size();
    const std::size_t t = inverse_sample_;
    std::vector<std::uint8_t> visited(m, 0);
    std::vector<std::pair<std::size_t, std::size_t>> backs;   // (marked position, target)
    std::vector<std::size_t> cycle;
    for (std::size_t start = 0; start < m; ++start) {
        if (visited[start]) continue;
        cycle.clear();
        for (std::size_t j = start; !visited[j]; j = dense(j)) {
            visited[j] = 1;
            cycle.push_back(j);
        }
        if (cycle.size() <= t) continue;
        const std::size_t len = cycle.size();
        for (std::size_t i = 0; i < len; i += t) backs.emplace_back(cycle[i], cycle[(i + len - t % len) % len]);
    }
    std::sort(backs.begin(), backs.end());
    BitBuilder marked(m);
    std::vector<std::uint64_t> targets;
    targets.reserve(backs.size());
    for (const auto& [pos, target] : backs) {
        marked.set(pos, true);
        targets.push_back(target);
    }
    inv_marked_ = BitVector(std::move(marked));
    inv_back_ = IntVector::from_values(targets);
}

void Snapshot::check_object(ObjectId o) const {
    if (o >= present_.size()) throw NotFoundError("unknown object " + std::to_string(o));
}

bool Snapshot::is_present(ObjectId o) const {
    check_object(o);
    return present_[o];
}

std::size_t Snapshot::perm_position(ObjectId o) const {
    check_object(o);
    if (!present_[o]) throw NotFoundError("object " + std::to_string(o) + " absent at this snapshot");
    const std::uint64_t target = present_.rank1(o);
    std::size_t j = static_cast<std::size_t>(target);
    bool jumped = false;
    for (;;) {
        std::uint64_t next = dense(j);
        if (next == target) return j;
        if (!jumped && inv_marked_[j]) {
            j = static_cast<std::size_t>(inv_back_[inv_marked_.rank1(j)]);
            jumped = true;
        } else {
            j = static_cast<std::size_t>(next);
        }
    }
}

void Snapshot::group_at(std::size_t leaf_ordinal, std::vector<ObjectId>& out) const {
    std::size_t p = leaf_ordinal == 1 ? 0 : q_.select0(leaf_ordinal - 1) + 1;
    for (;; ++p) {
        out.push_back(static_cast<ObjectId>(perm_[p]));
        if (!q_[p]) break;
    }
}

std::vector<ObjectId> Snapshot::objects_in_cell(std::int64_t x, std::int64_t y) const {
    std::vector<ObjectId> out;
    if (auto ord = tree_.leaf_ordinal(x, y)) group_at(*ord, out);
    return out;
}

std::optional<Cell> Snapshot::position_of(ObjectId o) const {
    check_object(o);
    if (!present_[o]) return std::nullopt;
    std::size_t kpos = perm_position(o);
    return tree_.cell_of_leaf(q_.rank0(kpos) + 1);
}

std::vector<ObjectAt> Snapshot::objects_in_region(const Rect& rect) const {
    std::vector<ObjectAt> out;
    std::vector<ObjectId> group;
    for (const auto& hit : tree_.report_region(rect)) {
        group.clear();
        group_at(hit.leaf_ordinal, group);
        for (auto o : group) out.push_back({o, hit.cell});
    }
    return out;
}

std::optional<AbsentInfo> Snapshot::absent_info(ObjectId o) const {
    check_object(o);
    if (present_[o]) return std::nullopt;
    return absent_[present_.rank0(o)].info;
}

void Snapshot::save(ByteWriter& out) const {
    out.u32(instant_);
    out.u32(inverse_sample_);
    tree_.save(out);
    present_.save(out);
    perm_.save(out);
    q_.save(out);
    out.u64(absent_.size());
    for (const auto& a : absent_) {
        out.u32(a.object);
        out.i32(a.info.last_cell.x);
        out.i32(a.info.last_cell.y);
        out.u64(static_cast<std::uint64_t>(a.info.last_instant));
    }
}

Snapshot Snapshot::load(ByteReader& in) {
    Snapshot s;
    s.instant_ = in.u32();
    s.inverse_sample_ = in.u32();
    if (s.inverse_sample_ == 0) throw FormatError("bad inverse sample step");
    s.tree_ = K2Tree::load(in);
    s.present_ = BitVector::load(in);
    s.perm_ = IntVector::load(in);
    s.q_ = BitVector::load(in);
    auto n = in.u64();
    if (n != s.present_.count_zeros() || s.perm_.size() != s.present_.count_ones() || s.q_.size() != s.perm_.size() ||
        s.q_.count_zeros() != s.tree_.num_points())
        throw FormatError("inconsistent snapshot sizes");
    s.absent_.resize(n);
    for (auto& a : s.absent_) {
        a.object = in.u32();
        a.info.last_cell.x = in.i32();
        a.info.last_cell.y = in.i32();
        a.info.last_instant = static_cast<std::int64_t>(in.u64());
    }
    for (std::size_t i = 0; i < s.perm_.size(); ++i)
        if (s.perm_[i] >= s.present_.size() || !s.present_[s.perm_[i]]) throw FormatError("perm entry not present");
    s.build_inverse();
    return s;
}

} // namespace gract
