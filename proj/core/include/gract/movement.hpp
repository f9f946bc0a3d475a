#ifndef GRACT_MOVEMENT_HPP
#define GRACT_MOVEMENT_HPP

#include "gract/geometry.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace gract {

// Spiral enumeration of relative moves. Code 0 is no movement. Ring r (the
// cells at Chebyshev distance r) takes codes [(2r-1)^2, (2r+1)^2): it starts at
// (r, r-1) and winds clockwise (x East, y North) down the East side, West along
// the South side, up the West side and East along the North side, ending at
// (r, r). Ring 1 is (1,0),(1,-1),(0,-1),(-1,-1),(-1,0),(-1,1),(0,1),(1,1).
std::uint64_t spiral_encode(std::int64_t dx, std::int64_t dy);
inline std::uint64_t spiral_encode(const Offset& d) { return spiral_encode(d.dx, d.dy); }
Offset spiral_decode(std::uint64_t code);

struct Move {
    std::uint64_t code = 0;
    friend bool operator==(const Move&, const Move&) = default;
};

/// Reappearance within the same inter-snapshot period, relative to the last known cell.
struct RelReappear {
    std::uint64_t gap = 0;    ///< instants the object was missing
    std::uint64_t code = 0;   ///< spiral code of the displacement from the last known cell
    friend bool operator==(const RelReappear&, const RelReappear&) = default;
};

/// Reappearance at absolute coordinates.
struct AbsReappear {
    std::uint64_t gap = 0;
    std::int32_t x = 0;
    std::int32_t y = 0;
    friend bool operator==(const AbsReappear&, const AbsReappear&) = default;
};

using LogEvent = std::variant<Move, RelReappear, AbsReappear>;

/// Reserved stream codewords; spiral codes are stored shifted by kCodeShift.
inline constexpr std::uint64_t kRelReappearMark = 0;
inline constexpr std::uint64_t kAbsReappearMark = 1;
inline constexpr std::uint64_t kCodeShift = 2;

/// Move(c) -> [c+2]; RelReappear(g,c) -> [0, g, c+2]; AbsReappear(g,x,y) -> [1, g, x, y].
std::vector<std::uint64_t> events_to_ints(std::span<const LogEvent> events);

/// Same as events_to_ints, also reporting which integers belong to reappearance events.
void append_event_ints(const LogEvent& e, std::vector<std::uint64_t>& ints, std::vector<bool>* is_event_part);

/// Inverse of events_to_ints. Throws FormatError on a truncated payload.
std::vector<LogEvent> ints_to_events(std::span<const std::uint64_t> ints);

/// Position of an object and the instant it refers to.
struct TrackState {
    Cell cell;
    std::int64_t instant = 0;
    friend bool operator==(const TrackState&, const TrackState&) = default;
};

/// Advances `s` by one event; throws CorruptionError if the result leaves the
/// width x height grid (a zero dimension disables the check).
TrackState apply_event(const TrackState& s, const LogEvent& e, std::uint32_t width = 0, std::uint32_t height = 0);

/// Instants advanced by an event.
std::uint64_t event_duration(const LogEvent& e);

} // namespace gract

#endif // GRACT_MOVEMENT_HPP
