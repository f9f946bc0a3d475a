#ifndef GRACT_GEOMETRY_HPP
#define GRACT_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <ostream>

namespace gract {

using ObjectId = std::uint32_t;
using Instant = std::uint32_t;

/// A grid cell: x is the column (grows East), y is the row (grows North).
struct Cell {
    std::int32_t x = 0;
    std::int32_t y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::ostream& operator<<(std::ostream& o, const Cell& c) {
    return o << "(" << c.x << "," << c.y << ")";
}

/// Signed displacement between two cells.
struct Offset {
    std::int64_t dx = 0;
    std::int64_t dy = 0;

    friend bool operator==(const Offset&, const Offset&) = default;

    Offset& operator+=(const Offset& o) {
        dx += o.dx;
        dy += o.dy;
        return *this;
    }
};

inline Offset operator+(Offset a, const Offset& b) { return a += b; }
inline Offset operator-(const Offset& a) { return {-a.dx, -a.dy}; }

inline std::ostream& operator<<(std::ostream& o, const Offset& d) {
    return o << "(" << d.dx << "," << d.dy << ")";
}

/// Closed cell rectangle [x1, x2] x [y1, y2]. Empty when x1 > x2 or y1 > y2.
struct Rect {
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;
    std::int64_t x2 = -1;
    std::int64_t y2 = -1;

    friend bool operator==(const Rect&, const Rect&) = default;

    bool empty() const { return x1 > x2 || y1 > y2; }

    bool contains(std::int64_t x, std::int64_t y) const {
        return x >= x1 && x <= x2 && y >= y1 && y <= y2;
    }
    bool contains(const Cell& c) const { return contains(c.x, c.y); }

    bool intersects(const Rect& o) const {
        return !empty() && !o.empty() && x1 <= o.x2 && o.x1 <= x2 && y1 <= o.y2 && o.y1 <= y2;
    }

    Rect translated(std::int64_t dx, std::int64_t dy) const {
        return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
    }

    Rect clipped(std::int64_t width, std::int64_t height) const {
        return {std::max<std::int64_t>(x1, 0), std::max<std::int64_t>(y1, 0),
                std::min<std::int64_t>(x2, width - 1), std::min<std::int64_t>(y2, height - 1)};
    }

    /// Chebyshev distance from a point to the rectangle (0 if inside).
    std::int64_t chebyshev_to(std::int64_t x, std::int64_t y) const {
        std::int64_t dx = x < x1 ? x1 - x : (x > x2 ? x - x2 : 0);
        std::int64_t dy = y < y1 ? y1 - y : (y > y2 ? y - y2 : 0);
        return std::max(dx, dy);
    }
};

inline std::ostream& operator<<(std::ostream& o, const Rect& r) {
    return o << "[" << r.x1 << "," << r.x2 << "]x[" << r.y1 << "," << r.y2 << "]";
}

inline std::int64_t chebyshev(const Offset& d) {
    return std::max(d.dx < 0 ? -d.dx : d.dx, d.dy < 0 ? -d.dy : d.dy);
}

} // namespace gract

#endif // GRACT_GEOMETRY_HPP
