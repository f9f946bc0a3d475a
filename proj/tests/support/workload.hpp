#ifndef GRACT_TESTS_WORKLOAD_HPP
#define GRACT_TESTS_WORKLOAD_HPP

#include "gract/dataset.hpp"
#include "gract/oracle.hpp"
#include "gract/trajectory_index.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gract::test_support {

struct Query {
    ObjectId object = 0;
    Instant t = 0;
    Instant ts = 0;
    Instant te = 0;
    Rect rect;
};

// Random queries; half of the rectangles are centered on a present object so
// that answers are rarely empty.
inline std::vector<Query> make_workload(const RegularDataset& ds, std::size_t count, std::uint64_t seed,
                                        std::uint32_t max_interval = 400) {
    std::mt19937_64 rng(seed);
    auto uni = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    const std::uint32_t T = ds.num_instants();
    const std::int64_t W = ds.width(), H = ds.height();
    std::vector<Query> out;
    for (std::size_t i = 0; i < count; ++i) {
        Query q;
        q.object = static_cast<ObjectId>(uni(0, ds.num_objects() - 1));
        q.t = static_cast<Instant>(uni(0, T - 1));
        q.ts = static_cast<Instant>(uni(0, T - 1));
        q.te = static_cast<Instant>(std::min<std::uint64_t>(T - 1, q.ts + uni(0, max_interval)));
        const std::int64_t half_w = static_cast<std::int64_t>(uni(0, std::max<std::int64_t>(1, W / 16)));
        const std::int64_t half_h = static_cast<std::int64_t>(uni(0, std::max<std::int64_t>(1, H / 16)));
        std::int64_t cx = static_cast<std::int64_t>(uni(0, W - 1)), cy = static_cast<std::int64_t>(uni(0, H - 1));
        if (i % 2 == 0) {
            for (int tries = 0; tries < 20; ++tries) {
                const auto o = static_cast<ObjectId>(uni(0, ds.num_objects() - 1));
                if (auto c = ds.at(o, q.t)) {
                    cx = c->x;
                    cy = c->y;
                    break;
                }
            }
        }
        q.rect = Rect{cx - half_w, cy - half_h, cx + half_w, cy + half_h}.clipped(W, H);
        out.push_back(q);
    }
    return out;
}

struct Mismatches {
    std::size_t position = 0;
    std::size_t trajectory = 0;
    std::size_t slice = 0;
    std::size_t interval = 0;
    std::size_t total() const { return position + trajectory + slice + interval; }
};

inline Mismatches compare_with_oracle(const TrajectoryIndex& idx, const Oracle& oracle, const std::vector<Query>& qs,
                                      const QueryOptions& opts = {}) {
    Mismatches m;
    for (const auto& q : qs) {
        if (idx.position(q.object, q.t, nullptr, opts) != oracle.position(q.object, q.t)) ++m.position;
        if (idx.trajectory(q.object, q.ts, q.te) != oracle.trajectory(q.object, q.ts, q.te)) ++m.trajectory;
        if (idx.time_slice(q.rect, q.t, nullptr, opts) != oracle.time_slice(q.rect, q.t)) ++m.slice;
        if (idx.time_interval(q.rect, q.ts, q.te, nullptr, opts) != oracle.time_interval(q.rect, q.ts, q.te))
            ++m.interval;
    }
    return m;
}

inline BehaviorMix straight_mix() {
    BehaviorMix mix;
    mix.stationary = 0.05;
    mix.straight = 0.9;
    mix.random_walk = 0.05;
    mix.gap_fraction = 0.1;
    return mix;
}

} // namespace gract::test_support

#endif
