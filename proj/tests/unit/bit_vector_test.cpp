#include "gract/bit_vector.hpp"
#include "gract/error.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace gract;

namespace {

BitVector from_bools(const std::vector<bool>& bits) {
    BitBuilder b;
    for (bool x : bits) b.push_back(x);
    return BitVector(std::move(b));
}

// Naive rank/select against the stored bits, over every position.
void check_against_naive(const std::vector<bool>& bits) {
    const BitVector bv = from_bools(bits);
    ASSERT_EQ(bv.size(), bits.size());
    std::size_t ones = 0;
    std::vector<std::size_t> one_pos, zero_pos;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        ASSERT_EQ(bv.rank1(i), ones) << "i=" << i;
        ASSERT_EQ(bv.access(i), bits[i]);
        (bits[i] ? one_pos : zero_pos).push_back(i);
        ones += bits[i];
    }
    ASSERT_EQ(bv.rank1(bits.size()), ones);
    ASSERT_EQ(bv.count_ones(), ones);
    for (std::size_t j = 0; j < one_pos.size(); ++j) ASSERT_EQ(bv.select1(j + 1), one_pos[j]);
    for (std::size_t j = 0; j < zero_pos.size(); ++j) ASSERT_EQ(bv.select0(j + 1), zero_pos[j]);
}

} // namespace

TEST(BitVector, EmptyVector) {
    const BitVector bv = from_bools({});
    EXPECT_EQ(bv.rank1(0), 0u);
    EXPECT_THROW(bv.select1(1), NotFoundError);
    EXPECT_THROW(bv.rank1(1), RangeError);
}

TEST(BitVector, SmallExample) {
    const BitVector bv = from_bools({true, false, true, true, false});
    EXPECT_EQ(bv.rank1(3), 2u);
    EXPECT_EQ(bv.rank0(5), 2u);
    EXPECT_EQ(bv.select1(3), 3u);
    EXPECT_EQ(bv.select0(2), 4u);
    EXPECT_THROW(bv.select1(4), NotFoundError);
    EXPECT_THROW(bv.select1(0), NotFoundError);
    EXPECT_THROW(bv.access(5), RangeError);
}

TEST(BitVector, UniformVectorsAroundBlockBoundaries) {
    for (std::size_t n : {1u, 63u, 64u, 65u, 511u, 512u, 513u, 1024u, 4097u}) {
        check_against_naive(std::vector<bool>(n, true));
        check_against_naive(std::vector<bool>(n, false));
    }
}

TEST(BitVector, RandomDensitiesMatchNaive) {
    std::mt19937_64 rng(11);
    for (double density : {0.01, 0.3, 0.5, 0.97}) {
        for (std::size_t n : {100u, 777u, 5000u, 70000u}) {
            std::bernoulli_distribution coin(density);
            std::vector<bool> bits(n);
            for (std::size_t i = 0; i < n; ++i) bits[i] = coin(rng);
            check_against_naive(bits);
        }
    }
}

TEST(BitVector, RankSelectInverseProperty) {
    std::mt19937_64 rng(5);
    std::vector<bool> bits(20000);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() % 3 == 0;
    const BitVector bv = from_bools(bits);
    for (std::size_t j = 1; j <= bv.count_ones(); ++j) ASSERT_EQ(bv.rank1(bv.select1(j)), j - 1);
    for (std::size_t j = 1; j <= bv.count_zeros(); ++j) ASSERT_EQ(bv.rank0(bv.select0(j)), j - 1);
}

TEST(BitVector, SaveLoadRoundtrip) {
    std::mt19937_64 rng(3);
    BitBuilder b;
    for (int i = 0; i < 3000; ++i) b.push_back(rng() & 1);
    const BitVector bv(std::move(b));
    ByteWriter w;
    bv.save(w);
    ByteReader r(w.data());
    const BitVector back = BitVector::load(r);
    EXPECT_TRUE(r.at_end());
    EXPECT_EQ(back, bv);
    for (std::size_t i = 0; i <= bv.size(); i += 7) EXPECT_EQ(back.rank1(i), bv.rank1(i));
}

TEST(BitVector, TruncatedLoadFails) {
    BitBuilder b(1000, true);
    const BitVector bv(std::move(b));
    ByteWriter w;
    bv.save(w);
    auto bytes = w.take();
    bytes.resize(bytes.size() - 3);
    ByteReader r(bytes);
    EXPECT_THROW(BitVector::load(r), FormatError);
}
