#include "gract/movement.hpp"

#include "gract/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace gract {

std::uint64_t spiral_encode(std::int64_t dx, std::int64_t dy) {
    const std::int64_t r = std::max(std::llabs(dx), std::llabs(dy));
    if (r == 0) return 0;
    const auto base = static_cast<std::uint64_t>((2 * r - 1) * (2 * r - 1));
    std::int64_t off;
    if (dx == r && dy < r)
        off = (r - 1) - dy;                 // East side, going South
    else if (dy == -r)
        off = 2 * r + (r - 1) - dx;         // South side, going West
    else if (dx == -r)
        off = 4 * r + dy + r - 1;           // West side, going North
    else
        off = 6 * r + dx + r - 1;           // North side, going East
    return base + static_cast<std::uint64_t>(off);
}

Offset spiral_decode(std::uint64_t code) {
    if (code == 0) return {0, 0};
    // Ring r holds codes [(2r-1)^2, (2r+1)^2).
    auto r = static_cast<std::int64_t>((std::sqrt(static_cast<long double>(code)) + 1) / 2);
    while ((2 * r - 1) * (2 * r - 1) > static_cast<std::int64_t>(code)) --r;
    while ((2 * r + 1) * (2 * r + 1) <= static_cast<std::int64_t>(code)) ++r;
    const std::int64_t off = static_cast<std::int64_t>(code) - (2 * r - 1) * (2 * r - 1);
    const std::int64_t side = off / (2 * r);
    const std::int64_t k = off % (2 * r);
    switch (side) {
    case 0: return {r, r - 1 - k};
    case 1: return {r - 1 - k, -r};
    case 2: return {-r, -r + 1 + k};
    default: return {-r + 1 + k, r};
    }
}

void append_event_ints(const LogEvent& e, std::vector<std::uint64_t>& ints, std::vector<bool>* is_event_part) {
    auto push = [&](std::uint64_t v, bool part) {
        ints.push_back(v);
        if (is_event_part) is_event_part->push_back(part);
    };
    if (const auto* m = std::get_if<Move>(&e)) {
        push(m->code + kCodeShift, false);
    } else if (const auto* r = std::get_if<RelReappear>(&e)) {
        push(kRelReappearMark, true);
        push(r->gap, true);
        push(r->code + kCodeShift, true);
    } else {
        const auto& a = std::get<AbsReappear>(e);
        if (a.x < 0 || a.y < 0) throw ValidationError("absolute reappearance at negative coordinates");
        push(kAbsReappearMark, true);
        push(a.gap, true);
        push(static_cast<std::uint64_t>(a.x), true);
        push(static_cast<std::uint64_t>(a.y), true);
    }
}

std::vector<std::uint64_t> events_to_ints(std::span<const LogEvent> events) {
    std::vector<std::uint64_t> ints;
    ints.reserve(events.size());
    for (const auto& e : events) append_event_ints(e, ints, nullptr);
    return ints;
}

std::vector<LogEvent> ints_to_events(std::span<const std::uint64_t> ints) {
    std::vector<LogEvent> out;
    std::size_t i = 0;
    auto need = [&](std::size_t n) {
        if (i + n > ints.size())
            throw FormatError("truncated reappearance payload at integer " + std::to_string(i));
    };
    while (i < ints.size()) {
        const std::uint64_t v = ints[i];
        if (v == kRelReappearMark) {
            need(3);
            if (ints[i + 2] < kCodeShift) throw FormatError("reserved codeword as spiral payload");
            out.emplace_back(RelReappear{ints[i + 1], ints[i + 2] - kCodeShift});
            i += 3;
        } else if (v == kAbsReappearMark) {
            need(4);
            out.emplace_back(AbsReappear{ints[i + 1], static_cast<std::int32_t>(ints[i + 2]),
                                         static_cast<std::int32_t>(ints[i + 3])});
            i += 4;
        } else {
            out.emplace_back(Move{v - kCodeShift});
            ++i;
        }
    }
    return out;
}

std::uint64_t event_duration(const LogEvent& e) {
    if (std::holds_alternative<Move>(e)) return 1;
    if (const auto* r = std::get_if<RelReappear>(&e)) return r->gap + 1;
    return std::get<AbsReappear>(e).gap + 1;
}

TrackState apply_event(const TrackState& s, const LogEvent& e, std::uint32_t width, std::uint32_t height) {
    std::int64_t x, y;
    if (const auto* m = std::get_if<Move>(&e)) {
        auto d = spiral_decode(m->code);
        x = s.cell.x + d.dx;
        y = s.cell.y + d.dy;
    } else if (const auto* r = std::get_if<RelReappear>(&e)) {
        auto d = spiral_decode(r->code);
        x = s.cell.x + d.dx;
        y = s.cell.y + d.dy;
    } else {
        const auto& a = std::get<AbsReappear>(e);
        x = a.x;
        y = a.y;
    }
    if (width != 0 && height != 0 && (x < 0 || y < 0 || x >= width || y >= height))
        throw CorruptionError("event moves object outside the grid to (" + std::to_string(x) + "," +
                              std::to_string(y) + ")");
    return {{static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)},
            s.instant + static_cast<std::int64_t>(event_duration(e))};
}

} // namespace gract
