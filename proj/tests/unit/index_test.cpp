#include "gract/error.hpp"
#include "gract/oracle.hpp"
#include "gract/trajectory_index.hpp"

#include "support/stream_oracle.hpp"
#include "support/workload.hpp"

#include <gtest/gtest.h>

using namespace gract;
using gract::test_support::compare_with_oracle;
using gract::test_support::make_workload;

namespace {

// The NE mover: start (0,2), moves 8,9,8,9,8,7,9,8,7,9.
RegularDataset ship_example_dataset() {
    GridConfig g;
    g.width = 16;
    g.height = 16;
    RegularDataset ds(g, 11, {"ship"});
    const Offset moves[] = {{1, 1}, {2, 1}, {1, 1}, {2, 1}, {1, 1}, {0, 1}, {2, 1}, {1, 1}, {0, 1}, {2, 1}};
    Cell c{0, 2};
    ds.set(0, 0, c);
    for (Instant t = 1; t <= 10; ++t) {
        c = {static_cast<std::int32_t>(c.x + moves[t - 1].dx), static_cast<std::int32_t>(c.y + moves[t - 1].dy)};
        ds.set(0, t, c);
    }
    return ds;
}

BuildConfig config(CompressionMode mode, std::uint32_t period) {
    BuildConfig c;
    c.mode = mode;
    c.period = period;
    return c;
}

class IndexModes : public ::testing::TestWithParam<CompressionMode> {};

} // namespace

TEST(ExpandRegion, Arithmetic) {
    EXPECT_EQ(expand_region({10, 10, 20, 20}, 0, 2, 100, 100), (Rect{10, 10, 20, 20}));
    EXPECT_EQ(expand_region({10, 10, 20, 20}, 3, 2, 100, 100), (Rect{4, 4, 26, 26}));
    EXPECT_EQ(expand_region({1, 2, 97, 98}, 5, 1, 100, 100), (Rect{0, 0, 99, 99}));
}

TEST(ReplayPosition, WorkedExampleExpandsOnlyC) {
    const std::vector<RulePair> rules = {{10, 11}, {11, 11}, {10, 9}, {12, 12}};
    const Grammar g = Grammar::enrich(12, rules);
    const std::vector<Symbol> C = {15, 14, 11, 14, 11};   // D C 9 C 9
    QueryStats st;
    EXPECT_EQ(replay_position(g, C, {0, 2}, 5, &st), std::optional<Cell>(Cell{7, 7}));
    EXPECT_EQ(st.rules_expanded, 1u);
    EXPECT_EQ(replay_position(g, C, {0, 2}, 4), std::optional<Cell>(Cell{6, 6}));
    EXPECT_EQ(replay_position(g, C, {0, 2}, 10), std::optional<Cell>(Cell{12, 12}));
    EXPECT_FALSE(replay_position(g, C, {0, 2}, 11).has_value());
}

TEST_P(IndexModes, ShipExampleObject) {
    const auto ds = ship_example_dataset();
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 20));
    EXPECT_EQ(idx.position(0, 5), std::optional<Cell>(Cell{7, 7}));
    EXPECT_EQ(idx.position(0, 0), std::optional<Cell>(Cell{0, 2}));
    EXPECT_EQ(idx.log_ints(0, 0), (std::vector<std::uint64_t>{10, 11, 10, 11, 10, 9, 11, 10, 9, 11}));
    const auto traj = idx.trajectory(0, 0, 10);
    ASSERT_EQ(traj.size(), 11u);
    EXPECT_EQ(traj[10].cell, std::optional<Cell>(Cell{12, 12}));
    EXPECT_EQ(idx.header().v_max, 2u);
}

TEST_P(IndexModes, StationaryObjectLogIsConstant) {
    GridConfig g;
    g.width = 8;
    g.height = 8;
    RegularDataset ds(g, 500, {"buoy"});
    for (Instant t = 0; t < 500; ++t) ds.set(0, t, {3, 4});
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 240));
    for (std::uint32_t i = 0; i < idx.num_periods(); ++i)
        for (auto v : idx.log_ints(0, i)) ASSERT_EQ(v, 2u);
    if (GetParam() == CompressionMode::GraCT) EXPECT_LE(idx.log_symbols(0, 0).size(), 4u);
    EXPECT_EQ(idx.position(0, 333), std::optional<Cell>(Cell{3, 4}));
    EXPECT_EQ(idx.header().v_max, 0u);
}

TEST_P(IndexModes, TimeSliceCandidatePruning) {
    // Region r = [5,6]x[5,6] at t = 2 with vMax 1; candidates at instant 0 are 1, 4, 5, 8.
    GridConfig g;
    g.width = 12;
    g.height = 12;
    std::vector<std::string> names;
    for (int o = 0; o < 9; ++o) names.push_back("o" + std::to_string(o));
    RegularDataset ds(g, 3, names);
    const std::vector<std::vector<Cell>> paths = {
        {{0, 0}, {0, 0}, {0, 0}},   {{3, 3}, {4, 4}, {5, 5}},      {{11, 11}, {11, 11}, {11, 11}},
        {{0, 11}, {0, 11}, {0, 11}}, {{8, 3}, {9, 3}, {10, 3}},   {{6, 8}, {6, 7}, {6, 6}},
        {{11, 0}, {11, 0}, {11, 0}}, {{1, 1}, {1, 1}, {1, 1}},    {{4, 7}, {4, 7}, {4, 7}}};
    for (ObjectId o = 0; o < 9; ++o)
        for (Instant t = 0; t < 3; ++t) ds.set(o, t, paths[o][t]);
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 3));
    const Rect r{5, 5, 6, 6};

    std::vector<ObjectId> candidates;
    for (const auto& c : idx.snapshot(0).objects_in_region(expand_region(r, 2, idx.header().v_max, 12, 12)))
        candidates.push_back(c.object);
    std::sort(candidates.begin(), candidates.end());
    EXPECT_EQ(candidates, (std::vector<ObjectId>{1, 4, 5, 8}));

    QueryStats pruned, full;
    const auto got = idx.time_slice(r, 2, &pruned);
    EXPECT_EQ(got, (std::vector<ObjectAt>{{1, {5, 5}}, {5, {6, 6}}}));
    QueryOptions no_reach;
    no_reach.reach_pruning = false;
    EXPECT_EQ(idx.time_slice(r, 2, &full, no_reach), got);
    // Object 4 is dropped after its first move instead of being followed to t.
    EXPECT_EQ(pruned.symbols_processed + 1, full.symbols_processed);
}

TEST_P(IndexModes, GapsAndReappearances) {
    GridConfig g;
    g.width = 64;
    g.height = 64;
    RegularDataset ds(g, 60, {"a", "b", "c", "late"});
    for (Instant t = 0; t < 60; ++t) {
        const auto x = static_cast<std::int32_t>(t);
        if (t < 5 || t > 14) ds.set(0, t, {x, 10});            // relative reappearance inside period 0
        if (t < 18 || t > 25) ds.set(1, t, {x, 20});           // absolute reappearance after a snapshot
        if (t % 7 != 3) ds.set(2, t, {63 - x, 30});            // many one-instant gaps
        if (t >= 33) ds.set(3, t, {5, 5 + (x % 4)});           // never seen before instant 33
    }
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 20));
    EXPECT_TRUE(idx.log_has_reappearance(0, 0));
    EXPECT_TRUE(idx.log_has_reappearance(1, 1));
    EXPECT_TRUE(idx.log_has_reappearance(3, 1));
    EXPECT_FALSE(idx.log_has_reappearance(0, 2));
    EXPECT_EQ(idx.log_ints(0, 0)[4], 0u);   // relative marker
    EXPECT_EQ(idx.log_ints(1, 1)[0], 1u);   // absolute marker
    for (ObjectId o = 0; o < 4; ++o)
        for (std::uint32_t i = 0; i < idx.num_periods(); ++i) {
            const Instant a = i * 20, b = std::min<Instant>(a + 20, 59);
            ASSERT_EQ(idx.log_ints(o, i), gract::test_support::expected_log(ds, o, a, b)) << o << " " << i;
        }
    const Oracle oracle(ds);
    std::vector<gract::test_support::Query> qs;
    for (Instant t = 0; t < 60; ++t)
        for (ObjectId o = 0; o < 4; ++o) qs.push_back({o, t, t / 2, std::min<Instant>(59, t + 9), Rect{0, 0, 40, 25}});
    EXPECT_EQ(compare_with_oracle(idx, oracle, qs).total(), 0u);
    QueryOptions forward;
    forward.traversal = Traversal::Forward;
    EXPECT_EQ(compare_with_oracle(idx, oracle, qs, forward).total(), 0u);
}

TEST_P(IndexModes, RandomDatasetsMatchOracle) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        BehaviorMix mix;
        mix.gap_fraction = 0.5;
        const auto ds = gen_synthetic(60, 700, 200, 150, mix, seed);
        const Oracle oracle(ds);
        const auto qs = make_workload(ds, 150, seed);
        for (std::uint32_t period : {2u, 7u, 120u, 1000u}) {
            const auto idx = TrajectoryIndex::build(ds, config(GetParam(), period));
            const auto m = compare_with_oracle(idx, oracle, qs);
            ASSERT_EQ(m.total(), 0u) << "seed " << seed << " period " << period << ": " << m.position << " "
                                     << m.trajectory << " " << m.slice << " " << m.interval;
        }
    }
}

TEST_P(IndexModes, PruningAndDirectionDoNotChangeAnswers) {
    const auto ds = gen_synthetic(80, 900, 300, 300, {}, 17);
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 120));
    const auto qs = make_workload(ds, 200, 5);
    for (const auto& q : qs) {
        QueryOptions off;
        off.mbr_pruning = off.reach_pruning = false;
        off.traversal = Traversal::Forward;
        ASSERT_EQ(idx.time_slice(q.rect, q.t), idx.time_slice(q.rect, q.t, nullptr, off));
        ASSERT_EQ(idx.time_interval(q.rect, q.ts, q.te), idx.time_interval(q.rect, q.ts, q.te, nullptr, off));
        ASSERT_EQ(idx.position(q.object, q.t), idx.position(q.object, q.t, nullptr, off));
    }
}

TEST_P(IndexModes, DegenerateIntervalsAndSnapshotInstants) {
    const auto ds = gen_synthetic(40, 400, 100, 100, {}, 23);
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 50));
    const Rect all{0, 0, 99, 99};
    for (Instant t : {0u, 50u, 123u, 399u}) {
        const auto slice = idx.time_slice(all, t);
        std::vector<ObjectId> ids;
        for (const auto& s : slice) ids.push_back(s.object);
        EXPECT_EQ(idx.time_interval(all, t, t), ids);
        for (ObjectId o = 0; o < 40; ++o) {
            const auto tr = idx.trajectory(o, t, t);
            ASSERT_EQ(tr.size(), 1u);
            EXPECT_EQ(tr[0].cell, idx.position(o, t));
        }
    }
    EXPECT_EQ(idx.time_slice(all, 100), Oracle(ds).time_slice(all, 100));
}

TEST_P(IndexModes, DomainErrors) {
    const auto ds = gen_synthetic(5, 50, 20, 20, {}, 1);
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 10));
    EXPECT_THROW(idx.position(5, 0), NotFoundError);
    EXPECT_THROW(idx.position(0, 50), RangeError);
    EXPECT_THROW(idx.trajectory(0, 10, 5), RangeError);
    EXPECT_THROW(idx.time_interval({0, 0, 5, 5}, 10, 5), RangeError);
    EXPECT_THROW(idx.object_id("nobody"), NotFoundError);
    EXPECT_EQ(idx.object_id("obj3"), 3u);
    EXPECT_TRUE(idx.time_slice({30, 30, 40, 40}, 5).empty());   // outside the grid
    EXPECT_THROW(TrajectoryIndex::build(ds, config(GetParam(), 1)), ValidationError);
}

TEST_P(IndexModes, SerializationRoundtrip) {
    const auto ds = gen_synthetic(50, 600, 128, 128, {}, 4);
    const auto idx = TrajectoryIndex::build(ds, config(GetParam(), 120));
    const auto bytes = idx.serialize();
    EXPECT_EQ(bytes.size(), idx.stats().total_bytes);
    const auto back = TrajectoryIndex::load(bytes);
    EXPECT_EQ(back.header(), idx.header());
    EXPECT_EQ(back.serialize(), bytes);
    EXPECT_EQ(compare_with_oracle(back, Oracle(ds), make_workload(ds, 100, 8)).total(), 0u);

    auto bad = bytes;
    bad[0] = 'X';
    EXPECT_THROW(TrajectoryIndex::load(bad), FormatError);
    bad = bytes;
    bad[4] = 9;
    EXPECT_THROW(TrajectoryIndex::load(bad), FormatError);
    for (std::size_t cut : {std::size_t{3}, std::size_t{40}, bytes.size() / 2, bytes.size() - 1}) {
        std::vector<std::uint8_t> trunc(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_ANY_THROW(TrajectoryIndex::load(trunc));
    }
}

INSTANTIATE_TEST_SUITE_P(Modes, IndexModes, ::testing::Values(CompressionMode::Scdc, CompressionMode::GraCT),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Index, ModesGiveIdenticalAnswers) {
    const auto ds = gen_synthetic(70, 800, 256, 256, {}, 31);
    const auto a = TrajectoryIndex::build(ds, config(CompressionMode::Scdc, 120));
    const auto b = TrajectoryIndex::build(ds, config(CompressionMode::GraCT, 120));
    for (ObjectId o = 0; o < 70; ++o)
        for (std::uint32_t i = 0; i < a.num_periods(); ++i) ASSERT_EQ(a.log_ints(o, i), b.log_ints(o, i));
    for (const auto& q : make_workload(ds, 150, 2)) {
        ASSERT_EQ(a.position(q.object, q.t), b.position(q.object, q.t));
        ASSERT_EQ(a.time_slice(q.rect, q.t), b.time_slice(q.rect, q.t));
        ASSERT_EQ(a.time_interval(q.rect, q.ts, q.te), b.time_interval(q.rect, q.ts, q.te));
    }
}

TEST(Index, SizeReportTrends) {
    const auto ds = gen_synthetic(150, 1440, 2048, 2048, gract::test_support::straight_mix(), 12);
    const auto s120 = TrajectoryIndex::build(ds, config(CompressionMode::GraCT, 120)).stats();
    const auto s240 = TrajectoryIndex::build(ds, config(CompressionMode::GraCT, 240)).stats();
    const auto scdc = TrajectoryIndex::build(ds, config(CompressionMode::Scdc, 120)).stats();
    const double halving = static_cast<double>(s240.snapshot_bytes) / static_cast<double>(s120.snapshot_bytes);
    EXPECT_NEAR(halving, 0.5, 0.1);
    EXPECT_GT(scdc.log_bytes, scdc.snapshot_bytes);
    EXPECT_LT(s120.total_bytes, scdc.total_bytes);
    EXPECT_EQ(s120.plain_bytes, ds.present_records() * 8);
}
