#include "gract/bit_vector.hpp"
#include "gract/k2_tree.hpp"
#include "gract/repair.hpp"
#include "gract/scdc.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace gract;

namespace {

BitVector random_bits(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution one(density);
    BitBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(one(rng));
    return BitVector(std::move(b));
}

void BM_Rank1(benchmark::State& state) {
    const auto bv = random_bits(1 << 22, 0.5, 1);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> pos(0, bv.size());
    for (auto _ : state) benchmark::DoNotOptimize(bv.rank1(pos(rng)));
}
BENCHMARK(BM_Rank1);

void BM_Select1(benchmark::State& state) {
    const auto bv = random_bits(1 << 22, static_cast<double>(state.range(0)) / 100.0, 1);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> j(1, bv.count_ones());
    for (auto _ : state) benchmark::DoNotOptimize(bv.select1(j(rng)));
}
BENCHMARK(BM_Select1)->Arg(5)->Arg(50);

void BM_K2RegionReport(benchmark::State& state) {
    const std::uint32_t side = 4096;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int32_t> coord(0, side - 1);
    std::vector<Cell> pts(20000);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto tree = K2Tree::build(pts, side, side, static_cast<std::uint32_t>(state.range(0)));
    const std::int64_t half = state.range(1);
    std::size_t hits = 0;
    for (auto _ : state) {
        const std::int64_t x = coord(rng), y = coord(rng);
        auto r = tree.report_region({x - half, y - half, x + half, y + half});
        hits += r.size();
        benchmark::DoNotOptimize(r.data());
    }
    state.counters["hits_per_query"] = benchmark::Counter(static_cast<double>(hits), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_K2RegionReport)->Args({2, 16})->Args({2, 128})->Args({4, 16})->Args({4, 128});

std::vector<std::uint64_t> skewed_values(std::size_t n) {
    std::mt19937_64 rng(4);
    std::geometric_distribution<std::uint64_t> geo(0.3);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = geo(rng);
    return v;
}

void BM_ScdcEncode(benchmark::State& state) {
    const auto values = skewed_values(1 << 16);
    for (auto _ : state) benchmark::DoNotOptimize(scdc::encode(values, 200));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(values.size()));
}
BENCHMARK(BM_ScdcEncode);

void BM_ScdcDecode(benchmark::State& state) {
    const auto bytes = scdc::encode(skewed_values(1 << 16), 200);
    for (auto _ : state) benchmark::DoNotOptimize(scdc::decode_all(bytes, 200));
    state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_ScdcDecode);

void BM_RepairCompress(benchmark::State& state) {
    // Mostly repetitive streams, like logs of objects on steady courses.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Symbol> code(2, 10);
    std::bernoulli_distribution change(0.05);
    std::vector<std::vector<Symbol>> streams(static_cast<std::size_t>(state.range(0)));
    for (auto& s : streams) {
        Symbol c = code(rng);
        for (int i = 0; i < 200; ++i) {
            if (change(rng)) c = code(rng);
            s.push_back(c);
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(repair_compress(streams));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_RepairCompress)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
