#ifndef GRACT_TESTS_STREAM_ORACLE_HPP
#define GRACT_TESTS_STREAM_ORACLE_HPP

#include "gract/dataset.hpp"
#include "gract/geometry.hpp"
#include "gract/grammar.hpp"
#include "gract/movement.hpp"

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace gract::test_support {

// Spiral code by walking the rings cell by cell; independent of the library's closed form.
inline std::uint64_t walk_spiral(std::int64_t dx, std::int64_t dy) {
    if (dx == 0 && dy == 0) return 0;
    const std::int64_t r = std::max(std::llabs(dx), std::llabs(dy));
    std::uint64_t code = static_cast<std::uint64_t>((2 * r - 1) * (2 * r - 1));
    std::int64_t x = r, y = r - 1;
    // East side down, South side west, West side up, North side east.
    const int steps[4][2] = {{0, -1}, {-1, 0}, {0, 1}, {1, 0}};
    int leg = 0;
    while (!(x == dx && y == dy)) {
        const std::int64_t nx = x + steps[leg][0], ny = y + steps[leg][1];
        if (std::llabs(nx) > r || std::llabs(ny) > r) {
            ++leg;
            continue;
        }
        x = nx;
        y = ny;
        ++code;
    }
    return code;
}

// Log integers of object o for instants (a, b], written straight from the table.
inline std::vector<std::uint64_t> expected_log(const RegularDataset& ds, ObjectId o, Instant a, Instant b) {
    std::vector<std::uint64_t> out;
    std::int64_t last_t = -1;
    Cell last{};
    for (Instant t = 0; t <= a; ++t) {
        if (auto c = ds.at(o, t)) {
            last = *c;
            last_t = t;
        }
    }
    for (Instant t = a + 1; t <= b; ++t) {
        auto c = ds.at(o, t);
        if (!c) continue;
        if (last_t == static_cast<std::int64_t>(t) - 1) {
            out.push_back(walk_spiral(c->x - last.x, c->y - last.y) + 2);
        } else if (last_t >= static_cast<std::int64_t>(a)) {
            out.insert(out.end(), {0, static_cast<std::uint64_t>(t - last_t - 1),
                                   walk_spiral(c->x - last.x, c->y - last.y) + 2});
        } else {
            out.insert(out.end(), {1, static_cast<std::uint64_t>(t - last_t - 1), static_cast<std::uint64_t>(c->x),
                                   static_cast<std::uint64_t>(c->y)});
        }
        last = *c;
        last_t = t;
    }
    return out;
}

// Metadata recomputed by walking the full expansion cell by cell.
inline RuleMeta meta_by_expansion(const Grammar& g, Symbol s) {
    RuleMeta m;
    m.mbr = {0, 0, 0, 0};
    std::int64_t x = 0, y = 0;
    for (Symbol t : g.expand(s)) {
        const Offset d = spiral_decode(t - 2);
        x += d.dx;
        y += d.dy;
        ++m.span;
        m.mbr = {std::min(m.mbr.x1, x), std::min(m.mbr.y1, y), std::max(m.mbr.x2, x), std::max(m.mbr.y2, y)};
    }
    m.disp = {x, y};
    return m;
}

} // namespace gract::test_support

#endif
