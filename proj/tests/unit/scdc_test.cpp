#include "gract/error.hpp"
#include "gract/scdc.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace gract;

namespace {

// Codeword length by counting how many values each length covers.
std::size_t length_by_counting(std::uint64_t v, unsigned s) {
    const unsigned c = 256 - s;
    std::uint64_t covered = 0, block = s;
    for (std::size_t k = 1;; ++k) {
        if (block > ~0ULL - covered || v - covered < block) return k;
        covered += block;
        block = block > ~0ULL / c ? ~0ULL : block * c;
    }
}

// With s = 255 codewords grow linearly, so values stay below 10^5 there.
std::vector<std::uint64_t> skewed_values(std::size_t n, std::uint64_t seed, bool bounded = false) {
    std::mt19937_64 rng(seed);
    std::geometric_distribution<std::uint64_t> geo(0.02);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) {
        switch (rng() % 10) {
        case 0: x = bounded ? rng() % 100000 : rng() >> (rng() % 64); break;
        case 1: x = rng() % 100000; break;
        default: x = geo(rng);
        }
    }
    return v;
}

} // namespace

TEST(Scdc, RoundtripAllRequiredS) {
    for (unsigned s : {1u, 64u, 128u, 230u, 255u}) {
        const auto values = skewed_values(100000, s, s == 255);
        const auto bytes = scdc::encode(values, s);
        ASSERT_EQ(scdc::decode_all(bytes, s), values) << "s=" << s;
        std::size_t expected = 0;
        for (auto v : values) expected += length_by_counting(v, s);
        EXPECT_EQ(bytes.size(), expected);
    }
}

TEST(Scdc, CodewordBoundaries) {
    for (unsigned s : {1u, 2u, 100u, 255u}) {
        const std::uint64_t c = 256 - s;
        EXPECT_EQ(scdc::codeword_length(0, s), 1u);
        EXPECT_EQ(scdc::codeword_length(s - 1, s), 1u);
        EXPECT_EQ(scdc::codeword_length(s, s), 2u);
        EXPECT_EQ(scdc::codeword_length(s + s * c - 1, s), 2u);
        EXPECT_EQ(scdc::codeword_length(s + s * c, s), 3u);
        const std::uint64_t top = s == 255 ? 1000000 : ~0ULL;
        for (std::uint64_t v : {std::uint64_t{0}, std::uint64_t{s - 1}, std::uint64_t{s}, s + s * c, top}) {
            std::vector<std::uint8_t> out;
            scdc::encode_one(v, s, out);
            ASSERT_EQ(out.size(), scdc::codeword_length(v, s));
            std::size_t pos = 0;
            ASSERT_EQ(scdc::decode_next(out, pos, s), v);
            ASSERT_EQ(pos, out.size());
        }
    }
}

TEST(Scdc, BackwardDecodingMatchesForward) {
    const auto values = skewed_values(5000, 2);
    for (unsigned s : {1u, 64u, 200u}) {
        const auto bytes = scdc::encode(values, s);
        std::size_t end = bytes.size();
        for (std::size_t i = values.size(); i-- > 0;) ASSERT_EQ(scdc::decode_prev(bytes, 0, end, s), values[i]);
        EXPECT_EQ(end, 0u);
    }
}

TEST(Scdc, ChooseSIsExhaustiveOptimum) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::uint64_t, std::uint64_t> hist;
        const std::uint64_t spread = 1 + rng() % 5000;
        for (int i = 0; i < 2000; ++i) ++hist[std::min(rng() % spread, rng() % spread)];
        std::uint64_t best = ~0ULL;
        unsigned best_s = 0;
        for (unsigned s = 1; s <= 255; ++s) {
            std::uint64_t size = 0;
            for (auto [v, f] : hist) size += f * length_by_counting(v, s);
            ASSERT_EQ(scdc::encoded_size(hist, s), size);
            if (size < best) {
                best = size;
                best_s = s;
            }
        }
        ASSERT_EQ(scdc::choose_s(hist), best_s);
    }
}

TEST(Scdc, Errors) {
    EXPECT_THROW(scdc::encode(std::vector<std::uint64_t>{1}, 0), ValidationError);
    EXPECT_THROW(scdc::encode(std::vector<std::uint64_t>{1}, 256), ValidationError);
    const std::vector<std::uint8_t> dangling = {200};
    std::size_t pos = 0;
    EXPECT_THROW(scdc::decode_next(dangling, pos, 128), FormatError);
    EXPECT_THROW(scdc::choose_s({}), ValidationError);
    std::vector<std::uint8_t> out;
    EXPECT_THROW(scdc::encode_one(~0ULL, 255, out), ValidationError);
    const std::map<std::uint64_t, std::uint64_t> huge = {{~0ULL, 1000}, {3, 5}};
    EXPECT_EQ(scdc::encoded_size(huge, 255), ~0ULL);
    EXPECT_NE(scdc::choose_s(huge), 255u);
}
