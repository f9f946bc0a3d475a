#include "gract/error.hpp"
#include "gract/movement.hpp"

#include "support/stream_oracle.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gract;

TEST(Spiral, Anchors) {
    EXPECT_EQ(spiral_encode(0, 0), 0u);
    EXPECT_EQ(spiral_encode(0, 1), 7u);
    EXPECT_EQ(spiral_encode(1, 1), 8u);
    EXPECT_EQ(spiral_encode(2, 1), 9u);
    EXPECT_EQ(spiral_decode(7), (Offset{0, 1}));
    EXPECT_EQ(spiral_decode(8), (Offset{1, 1}));
    EXPECT_EQ(spiral_decode(9), (Offset{2, 1}));
}

TEST(Spiral, ExhaustiveRoundtripRadius64) {
    std::set<std::uint64_t> seen;
    for (std::int64_t dy = -64; dy <= 64; ++dy) {
        for (std::int64_t dx = -64; dx <= 64; ++dx) {
            const auto c = spiral_encode(dx, dy);
            ASSERT_EQ(spiral_decode(c), (Offset{dx, dy}));
            ASSERT_EQ(c, test_support::walk_spiral(dx, dy)) << dx << "," << dy;
            seen.insert(c);
        }
    }
    // Radius <= 64 fills the codes [0, 129^2) exactly.
    EXPECT_EQ(seen.size(), 129u * 129u);
    EXPECT_EQ(*seen.rbegin(), 129u * 129u - 1);
}

TEST(Spiral, RingsGrowWithDistance) {
    for (std::int64_t r = 1; r <= 20; ++r) {
        EXPECT_EQ(spiral_encode(r, r - 1), static_cast<std::uint64_t>((2 * r - 1) * (2 * r - 1)));
        EXPECT_EQ(spiral_encode(r, r), static_cast<std::uint64_t>((2 * r + 1) * (2 * r + 1) - 1));
    }
    EXPECT_EQ(spiral_decode(spiral_encode(-100000, 77777)), (Offset{-100000, 77777}));
}

TEST(Events, IntegerLayout) {
    std::vector<LogEvent> ev = {Move{8}, RelReappear{3, 1}, AbsReappear{12, 40, 7}, Move{0}};
    const auto ints = events_to_ints(ev);
    EXPECT_EQ(ints, (std::vector<std::uint64_t>{10, 0, 3, 3, 1, 12, 40, 7, 2}));
    EXPECT_EQ(ints_to_events(ints), ev);

    std::vector<std::uint64_t> out;
    std::vector<bool> part;
    for (const auto& e : ev) append_event_ints(e, out, &part);
    EXPECT_EQ(part, (std::vector<bool>{false, true, true, true, true, true, true, true, false}));
}

TEST(Events, TruncatedPayloadsFail) {
    EXPECT_THROW(ints_to_events(std::vector<std::uint64_t>{0, 3}), FormatError);
    EXPECT_THROW(ints_to_events(std::vector<std::uint64_t>{1, 3, 4}), FormatError);
    EXPECT_THROW(ints_to_events(std::vector<std::uint64_t>{0, 3, 1}), FormatError);
}

TEST(Events, ApplyAndDuration) {
    TrackState s{{5, 5}, 10};
    s = apply_event(s, Move{8}, 20, 20);
    EXPECT_EQ(s, (TrackState{{6, 6}, 11}));
    s = apply_event(s, RelReappear{4, 3}, 20, 20);   // code 3 = (0,-1)
    EXPECT_EQ(s, (TrackState{{6, 5}, 16}));
    s = apply_event(s, AbsReappear{0, 1, 2}, 20, 20);
    EXPECT_EQ(s, (TrackState{{1, 2}, 17}));
    EXPECT_EQ(event_duration(RelReappear{4, 3}), 5u);
    EXPECT_EQ(event_duration(Move{0}), 1u);
    EXPECT_THROW(apply_event(TrackState{{0, 0}, 0}, Move{5}, 20, 20), CorruptionError);   // (-1,0)
}
