#include "gract/k2_tree.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <string>

namespace gract {

K2Tree K2Tree::build(std::span<const Cell> points, std::uint32_t width, std::uint32_t height, std::uint32_t k) {
    if (k < 2) throw ValidationError("k2-tree arity must be at least 2");
    if (width == 0 || height == 0) throw ValidationError("k2-tree matrix must be non-empty");

    K2Tree t;
    t.k_ = k;
    t.k2_ = k * k;
    t.width_ = width;
    t.height_ = height;
    t.side_ = k;
    t.levels_ = 1;
    const std::uint64_t need = std::max(width, height);
    while (t.side_ < need) {
        t.side_ *= k;
        ++t.levels_;
    }
    if (t.side_ > (std::uint64_t{1} << 31)) throw ValidationError("k2-tree side exceeds 2^31");

    // Path key: the sequence of child ordinals from the root, as a base-k^2 number.
    // Sorting by key gives levelwise (BFS) order at every level.
    std::vector<std::uint64_t> keys;
    keys.reserve(points.size());
    for (const auto& p : points) {
        if (p.x < 0 || p.y < 0 || static_cast<std::uint32_t>(p.x) >= width ||
            static_cast<std::uint32_t>(p.y) >= height)
            throw ValidationError("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                                  ") outside the matrix");
        std::uint64_t key = 0;
        for (std::uint64_t sub = t.side_ / k; sub >= 1; sub /= k) {
            std::uint64_t dx = (static_cast<std::uint64_t>(p.x) / sub) % k;
            std::uint64_t dy = (static_cast<std::uint64_t>(p.y) / sub) % k;
            key = key * t.k2_ + dy * k + dx;
            if (sub == 1) break;
        }
        keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    BitBuilder tb;
    BitBuilder lb;
    // weight[l] = (k^2)^(levels - 1 - l): the value of the digit chosen at level l.
    std::vector<std::uint64_t> weight(t.levels_);
    weight[t.levels_ - 1] = 1;
    for (std::uint32_t l = t.levels_ - 1; l > 0; --l) weight[l - 1] = weight[l] * t.k2_;

    for (std::uint32_t l = 0; l < t.levels_; ++l) {
        BitBuilder& out = (l + 1 == t.levels_) ? lb : tb;
        const std::uint64_t group_div = weight[l] * t.k2_;
        if (keys.empty()) {
            if (l == 0)
                for (std::uint32_t d = 0; d < t.k2_; ++d) out.push_back(false);
            continue;
        }
        std::size_t i = 0;
        while (i < keys.size()) {
            // Prefix of length l identifies the node; its children are the next digits.
            std::uint64_t prefix = l == 0 ? 0 : keys[i] / group_div;
            std::size_t base = out.size();
            for (std::uint32_t d = 0; d < t.k2_; ++d) out.push_back(false);
            while (i < keys.size() && (l == 0 ? 0 : keys[i] / group_div) == prefix) {
                out.set(base + (keys[i] / weight[l]) % t.k2_, true);
                ++i;
            }
        }
    }
    t.t_ = BitVector(std::move(tb));
    t.l_ = BitVector(std::move(lb));
    return t;
}

std::size_t K2Tree::child(std::size_t p) const {
    if (p >= t_.size() || !t_[p]) throw ValidationError("child() requires a 1-bit of T");
    return t_.rank1(p + 1) * k2_;
}

std::optional<ParentLink> K2Tree::parent(std::size_t p) const {
    if (p >= t_.size() + l_.size()) throw RangeError("position outside T:L");
    if (p < k2_) return std::nullopt;
    std::size_t q = t_.select1(p / k2_);
    return ParentLink{q, q - q % k2_, q % k2_};
}

void K2Tree::check_cell(std::int64_t x, std::int64_t y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_)
        throw RangeError("cell (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
}

std::optional<std::size_t> K2Tree::leaf_position(std::int64_t x, std::int64_t y) const {
    check_cell(x, y);
    std::size_t block = 0;
    std::uint64_t sub = side_;
    for (std::uint32_t l = 0; l < levels_; ++l) {
        sub /= k_;
        std::size_t p = block + (static_cast<std::uint64_t>(y) / sub % k_) * k_ +
                        static_cast<std::uint64_t>(x) / sub % k_;
        if (!bit(p)) return std::nullopt;
        if (l + 1 == levels_) return p - t_.size();
        block = t_.rank1(p + 1) * k2_;
    }
    return std::nullopt;
}

bool K2Tree::contains(std::int64_t x, std::int64_t y) const { return leaf_position(x, y).has_value(); }

std::optional<std::size_t> K2Tree::leaf_ordinal(std::int64_t x, std::int64_t y) const {
    auto lp = leaf_position(x, y);
    if (!lp) return std::nullopt;
    return l_.rank1(*lp + 1);
}

Cell K2Tree::cell_of_leaf(std::size_t ordinal) const {
    if (ordinal == 0 || ordinal > l_.count_ones())
        throw RangeError("leaf ordinal " + std::to_string(ordinal) + " out of range");
    std::size_t p = t_.size() + l_.select1(ordinal);
    std::uint64_t x = 0, y = 0, sub = 1;
    for (;;) {
        std::size_t d = p % k2_;
        x += (d % k_) * sub;
        y += (d / k_) * sub;
        if (p < k2_) break;
        p = t_.select1(p / k2_);
        sub *= k_;
    }
    return {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)};
}

std::vector<RegionHit> K2Tree::report_region(const Rect& rect) const {
    std::vector<RegionHit> out;
    Rect r = rect.clipped(width_, height_);
    if (r.empty()) return out;
    report(r, 0, 0, 0, side_ / k_, out);
    return out;
}

void K2Tree::report(const Rect& r, std::size_t block, std::uint64_t x0, std::uint64_t y0, std::uint64_t sub,
                    std::vector<RegionHit>& out) const {
    for (std::uint32_t dy = 0; dy < k_; ++dy) {
        std::int64_t cy0 = static_cast<std::int64_t>(y0 + dy * sub);
        std::int64_t cy1 = cy0 + static_cast<std::int64_t>(sub) - 1;
        if (cy1 < r.y1 || cy0 > r.y2) continue;
        for (std::uint32_t dx = 0; dx < k_; ++dx) {
            std::int64_t cx0 = static_cast<std::int64_t>(x0 + dx * sub);
            std::int64_t cx1 = cx0 + static_cast<std::int64_t>(sub) - 1;
            if (cx1 < r.x1 || cx0 > r.x2) continue;
            std::size_t p = block + dy * k_ + dx;
            if (!bit(p)) continue;
            if (sub == 1) {
                out.push_back({{static_cast<std::int32_t>(cx0), static_cast<std::int32_t>(cy0)},
                               l_.rank1(p - t_.size() + 1)});
            } else {
                report(r, t_.rank1(p + 1) * k2_, static_cast<std::uint64_t>(cx0),
                       static_cast<std::uint64_t>(cy0), sub / k_, out);
            }
        }
    }
}

void K2Tree::save(ByteWriter& out) const {
    out.u32(k_);
    out.u32(width_);
    out.u32(height_);
    out.u64(side_);
    t_.save(out);
    l_.save(out);
}

K2Tree K2Tree::load(ByteReader& in) {
    K2Tree t;
    t.k_ = in.u32();
    t.width_ = in.u32();
    t.height_ = in.u32();
    t.side_ = in.u64();
    if (t.k_ < 2 || t.k_ > 1024) throw FormatError("bad k2-tree arity");
    t.k2_ = t.k_ * t.k_;
    std::uint64_t s = t.k_;
    t.levels_ = 1;
    while (s < t.side_) {
        s *= t.k_;
        ++t.levels_;
    }
    if (s != t.side_ || t.side_ < std::max(t.width_, t.height_)) throw FormatError("bad k2-tree side");
    t.t_ = BitVector::load(in);
    t.l_ = BitVector::load(in);
    if ((t.t_.size() + t.l_.size()) % t.k2_ != 0) throw FormatError("k2-tree bitmaps misaligned");
    return t;
}

} // namespace gract
