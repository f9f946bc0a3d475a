#include "gract/error.hpp"
#include "gract/snapshot.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace gract;

namespace {

struct Fixture {
    std::vector<PresentEntry> present;
    std::vector<AbsentEntry> absent;
};

// Objects crowd into a few cells so that leaves hold several ids.
Fixture random_fixture(std::uint32_t n, std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Fixture f;
    for (ObjectId o = 0; o < n; ++o) {
        if (rng() % 5 == 0) {
            const bool seen = rng() & 1;
            f.absent.push_back({o, {Cell{static_cast<std::int32_t>(rng() % w), static_cast<std::int32_t>(rng() % h)},
                                    seen ? static_cast<std::int64_t>(rng() % 100) : AbsentInfo::kNeverSeen}});
        } else {
            const std::int32_t x = static_cast<std::int32_t>(rng() % (w / 4)) * 4;
            f.present.push_back({o, {x, static_cast<std::int32_t>(rng() % h)}});
        }
    }
    return f;
}

} // namespace

TEST(Snapshot, PositionAndCellQueriesAgree) {
    const std::uint32_t n = 3000, w = 64, h = 64;
    auto f = random_fixture(n, w, h, 1);
    const Snapshot s = Snapshot::build(240, n, f.present, f.absent, w, h, 2, 8);
    EXPECT_EQ(s.instant(), 240u);
    EXPECT_EQ(s.num_present(), f.present.size());

    std::map<Cell, std::vector<ObjectId>> by_cell;
    for (const auto& p : f.present) by_cell[p.cell].push_back(p.object);
    for (const auto& p : f.present) {
        ASSERT_TRUE(s.is_present(p.object));
        ASSERT_EQ(s.position_of(p.object), std::optional<Cell>(p.cell));
        ASSERT_FALSE(s.absent_info(p.object).has_value());
        ASSERT_EQ(s.perm_at(s.perm_position(p.object)), p.object);
    }
    for (const auto& [cell, ids] : by_cell) {
        auto got = s.objects_in_cell(cell.x, cell.y);
        ASSERT_EQ(got, ids) << cell;   // ascending within a leaf
        for (ObjectId o : got) ASSERT_EQ(s.position_of(o), std::optional<Cell>(cell));
    }
    for (const auto& a : f.absent) {
        ASSERT_FALSE(s.is_present(a.object));
        ASSERT_FALSE(s.position_of(a.object).has_value());
        ASSERT_EQ(s.absent_info(a.object), std::optional<AbsentInfo>(a.info));
    }
    EXPECT_TRUE(s.objects_in_cell(1, 1).empty());
}

TEST(Snapshot, RegionMatchesScan) {
    const std::uint32_t n = 800, w = 128, h = 96;
    auto f = random_fixture(n, w, h, 2);
    const Snapshot s = Snapshot::build(0, n, f.present, f.absent, w, h, 2, 32);
    std::mt19937_64 rng(3);
    for (int q = 0; q < 100; ++q) {
        std::int64_t x1 = rng() % w, x2 = rng() % w, y1 = rng() % h, y2 = rng() % h;
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        const Rect r{x1, y1, x2, y2};
        std::vector<ObjectAt> expect;
        for (const auto& p : f.present)
            if (r.contains(p.cell)) expect.push_back({p.object, p.cell});
        std::sort(expect.begin(), expect.end());
        auto got = s.objects_in_region(r);
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, expect);
    }
}

TEST(Snapshot, InverseSamplingDoesNotChangeAnswers) {
    const std::uint32_t n = 500;
    auto f = random_fixture(n, 32, 32, 4);
    for (std::uint32_t step : {1u, 2u, 7u, 32u, 1000u}) {
        const Snapshot s = Snapshot::build(0, n, f.present, f.absent, 32, 32, 2, step);
        for (const auto& p : f.present) ASSERT_EQ(s.position_of(p.object), std::optional<Cell>(p.cell));
    }
}

TEST(Snapshot, AllAbsentAndEmptyUniverse) {
    std::vector<AbsentEntry> absent = {{0, {}}, {1, {{3, 4}, 17}}};
    const Snapshot s = Snapshot::build(0, 2, {}, absent, 8, 8);
    EXPECT_EQ(s.num_present(), 0u);
    EXPECT_TRUE(s.objects_in_region({0, 0, 7, 7}).empty());
    EXPECT_TRUE(s.absent_info(0)->never_seen());
    EXPECT_EQ(s.absent_info(1)->last_cell, (Cell{3, 4}));

    const Snapshot none = Snapshot::build(0, 0, {}, {}, 8, 8);
    EXPECT_EQ(none.num_objects(), 0u);
}

TEST(Snapshot, RejectsBadPartitions) {
    std::vector<PresentEntry> present = {{0, {1, 1}}, {1, {2, 2}}};
    std::vector<AbsentEntry> absent = {{1, {}}};
    EXPECT_THROW(Snapshot::build(0, 2, present, absent, 8, 8), ValidationError);
    EXPECT_THROW(Snapshot::build(0, 3, present, {}, 8, 8), ValidationError);
    const Snapshot s = Snapshot::build(0, 2, present, {}, 8, 8);
    EXPECT_THROW(s.position_of(2), NotFoundError);
}

TEST(Snapshot, SaveLoadRoundtrip) {
    const std::uint32_t n = 400;
    auto f = random_fixture(n, 64, 64, 5);
    const Snapshot s = Snapshot::build(120, n, f.present, f.absent, 64, 64, 2, 16);
    ByteWriter w;
    s.save(w);
    ByteReader r(w.data());
    const Snapshot back = Snapshot::load(r);
    EXPECT_TRUE(r.at_end());
    EXPECT_EQ(back.instant(), 120u);
    for (ObjectId o = 0; o < n; ++o) {
        ASSERT_EQ(back.position_of(o), s.position_of(o));
        ASSERT_EQ(back.absent_info(o), s.absent_info(o));
    }
}
