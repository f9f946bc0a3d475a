#include "gract/dataset.hpp"
#include "gract/trajectory_index.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace gract;

namespace {

constexpr std::uint32_t kObjects = 200;
constexpr std::uint32_t kInstants = 1500;
constexpr std::uint32_t kSide = 1024;

const RegularDataset& dataset() {
    static const RegularDataset ds = gen_synthetic(kObjects, kInstants, kSide, kSide, BehaviorMix{}, 42);
    return ds;
}

const TrajectoryIndex& index_for(CompressionMode mode) {
    static const TrajectoryIndex gract = [] {
        BuildConfig c;
        c.mode = CompressionMode::GraCT;
        return TrajectoryIndex::build(dataset(), c);
    }();
    static const TrajectoryIndex scdc = [] {
        BuildConfig c;
        c.mode = CompressionMode::Scdc;
        return TrajectoryIndex::build(dataset(), c);
    }();
    return mode == CompressionMode::GraCT ? gract : scdc;
}

struct Query {
    ObjectId object;
    Instant t, ts, te;
    Rect rect;
};

const std::vector<Query>& queries() {
    static const std::vector<Query> qs = [] {
        std::mt19937_64 rng(7);
        auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
        std::vector<Query> out(4096);
        for (auto& q : out) {
            q.object = static_cast<ObjectId>(uni(0, kObjects - 1));
            q.t = static_cast<Instant>(uni(0, kInstants - 1));
            q.ts = static_cast<Instant>(uni(0, kInstants - 1));
            q.te = static_cast<Instant>(std::min<std::int64_t>(kInstants - 1, q.ts + uni(0, 240)));
            const std::int64_t x = uni(0, kSide - 1), y = uni(0, kSide - 1), h = uni(4, 64);
            q.rect = Rect{x - h, y - h, x + h, y + h}.clipped(kSide, kSide);
        }
        return out;
    }();
    return qs;
}

template <typename Fn>
void run(benchmark::State& state, Fn&& fn) {
    const auto mode = static_cast<CompressionMode>(state.range(0));
    const auto& idx = index_for(mode);
    const auto& qs = queries();
    QueryStats stats;
    std::size_t i = 0;
    for (auto _ : state) {
        fn(idx, qs[i], stats);
        i = (i + 1) % qs.size();
    }
    state.SetLabel(std::string(to_string(mode)));
    state.counters["symbols_processed"] =
        benchmark::Counter(static_cast<double>(stats.symbols_processed), benchmark::Counter::kAvgIterations);
    state.counters["rules_expanded"] =
        benchmark::Counter(static_cast<double>(stats.rules_expanded), benchmark::Counter::kAvgIterations);
}

void BM_Position(benchmark::State& state) {
    run(state, [](const TrajectoryIndex& idx, const Query& q, QueryStats& s) {
        benchmark::DoNotOptimize(idx.position(q.object, q.t, &s));
    });
}

void BM_Trajectory(benchmark::State& state) {
    run(state, [](const TrajectoryIndex& idx, const Query& q, QueryStats& s) {
        benchmark::DoNotOptimize(idx.trajectory(q.object, q.ts, q.te, &s));
    });
}

void BM_TimeSlice(benchmark::State& state) {
    run(state, [](const TrajectoryIndex& idx, const Query& q, QueryStats& s) {
        benchmark::DoNotOptimize(idx.time_slice(q.rect, q.t, &s));
    });
}

void BM_TimeInterval(benchmark::State& state) {
    run(state, [](const TrajectoryIndex& idx, const Query& q, QueryStats& s) {
        benchmark::DoNotOptimize(idx.time_interval(q.rect, q.ts, q.te, &s));
    });
}

#define MODES Arg(static_cast<int>(CompressionMode::GraCT))->Arg(static_cast<int>(CompressionMode::Scdc))
BENCHMARK(BM_Position)->MODES;
BENCHMARK(BM_Trajectory)->MODES;
BENCHMARK(BM_TimeSlice)->MODES;
BENCHMARK(BM_TimeInterval)->MODES;

void BM_Build(benchmark::State& state) {
    BuildConfig c;
    c.mode = static_cast<CompressionMode>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(TrajectoryIndex::build(dataset(), c));
}
BENCHMARK(BM_Build)->MODES->Unit(benchmark::kMillisecond)->Iterations(3);

} // namespace

BENCHMARK_MAIN();
