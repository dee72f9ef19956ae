#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "cannonball/cache.hpp"
#include "cannonball/exact.hpp"

using namespace cannonball;

TEST(Pyramidal, Examples) {
    EXPECT_EQ(pyramidal(u64(0)), 0);
    EXPECT_EQ(pyramidal(u64(4)), 30);  // 1 + 4 + 9 + 16
    EXPECT_EQ(pyramidal(u64(24)), 4900);
    EXPECT_EQ(Int(70) * 70, pyramidal(u64(24)));
}

TEST(Pyramidal, MatchesPartialSumsOfSquares) {
    Int sum = 0;
    for (u64 n = 0; n <= 500; ++n) {
        if (n > 0) sum += Int(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
        EXPECT_EQ(pyramidal(n), sum) << "n=" << n;
    }
}

TEST(Isqrt, Examples) {
    EXPECT_EQ(isqrt(Int(0)), 0);
    EXPECT_EQ(isqrt(Int(4899)), 69);
    EXPECT_EQ(isqrt(Int(4900)), 70);
    EXPECT_THROW(isqrt(Int(-1)), ParameterError);
}

TEST(Isqrt, ExtremeInputs) {
    // roots clamp correctly at the top of each width; the fix-up squares
    // must not wrap
    EXPECT_EQ(isqrt_u64(~u64(0)), 0xFFFFFFFFull);
    EXPECT_EQ(isqrt_u64(u64(0xFFFFFFFF) * 0xFFFFFFFF), 0xFFFFFFFFull);
    EXPECT_EQ(isqrt_u64(u64(0xFFFFFFFF) * 0xFFFFFFFF - 1), 0xFFFFFFFEull);
    const u128 max_root = ~u64(0);
    EXPECT_TRUE(isqrt_u128(~u128(0)) == max_root);
    EXPECT_TRUE(isqrt_u128(max_root * max_root) == max_root);
    EXPECT_TRUE(isqrt_u128(max_root * max_root - 1) == max_root - 1);
}

TEST(Isqrt, FloorPropertyAcrossWidths) {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 2000; ++i) {
        const u64 n = rng() >> (rng() % 40);
        const u64 r = isqrt_u64(n);
        EXPECT_LE(static_cast<u128>(r) * r, static_cast<u128>(n));
        EXPECT_GT(static_cast<u128>(r + 1) * (r + 1), static_cast<u128>(n));

        const u128 big = (static_cast<u128>(rng()) << 60) ^ rng();
        const u128 rb = isqrt_u128(big);
        EXPECT_LE(rb * rb, big);
        EXPECT_GT((rb + 1) * (rb + 1), big);

        Int z = int_from_u128(big);
        EXPECT_EQ(isqrt(z), int_from_u128(rb));
    }
}

TEST(NearestSquare, Examples) {
    auto r5 = nearest_square_distance(Int(5));
    EXPECT_EQ(r5.distance, 1);
    EXPECT_EQ(r5.nearest_root, 2);
    auto r14 = nearest_square_distance(Int(14));
    EXPECT_EQ(r14.distance, 2);
    EXPECT_EQ(r14.nearest_root, 4);
    auto r4900 = nearest_square_distance(Int(4900));
    EXPECT_EQ(r4900.distance, 0);
    EXPECT_EQ(r4900.nearest_root, 70);
}

TEST(NearestSquare, BruteForceOracle) {
    // Scan all squares near N and confirm the reported minimum.
    for (u64 N = 0; N <= 3000; ++N) {
        auto res = nearest_square_distance(Int(static_cast<unsigned long>(N)));
        u64 best = ~u64(0);
        for (u64 r = 0; r * r <= 4 * N + 4; ++r) {
            const u64 d = r * r > N ? r * r - N : N - r * r;
            best = std::min(best, d);
        }
        EXPECT_EQ(res.distance, int_from_u128(best)) << "N=" << N;
    }
}

TEST(SequenceA, Examples) {
    EXPECT_EQ(a(1), 0);
    EXPECT_EQ(a(2), 1);
    EXPECT_EQ(a(24), 0);
    EXPECT_EQ(a_u64(3), 2u);
    EXPECT_EQ(a_u64(4), 5u);
    EXPECT_EQ(a_u64(7), 4u);
}

TEST(SequenceA, TieNeverHappensAndBounds) {
    // a_n <= floor(sqrt(P_n)): the two candidate distances sum to 2r+1.
    for (u64 n = 0; n <= 1000000; ++n) {
        const u128 P = pyramidal_u128(n);
        const u128 r = isqrt_u128(P);
        const u128 below = P - r * r;
        const u128 above = (r + 1) * (r + 1) - P;
        ASSERT_NE(below, above) << "n=" << n;
        const u128 dist = below < above ? below : above;
        ASSERT_LE(dist, r) << "n=" << n;
        ASSERT_LE(dist, 2 * r + 1) << "n=" << n;
    }
}

TEST(SequenceRange, IncrementalAgreesWithClosedForm) {
    SequenceRange range(0, 1000000);
    u64 n = 0;
    while (range.has_next()) {
        const SequenceRecord rec = range.next();
        ASSERT_EQ(rec.n, n);
        ASSERT_EQ(rec.P, pyramidal(n)) << "n=" << n;
        ASSERT_EQ(rec.a, int_from_u128(a_u64(n))) << "n=" << n;
        if (n % 1009 == 0) {
            const SequenceRecord closed = make_record(n);
            ASSERT_EQ(closed.root, rec.root);
            ASSERT_EQ(closed.a, rec.a);
        }
        ++n;
    }
    EXPECT_EQ(n, 1000001u);
}

TEST(SequenceRange, ExamplesAndErrors) {
    auto recs = sequence_range(0, 2);
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].a, 0);
    EXPECT_EQ(recs[1].a, 0);
    EXPECT_EQ(recs[2].a, 1);

    auto single = sequence_range(24, 24);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].a, 0);
    EXPECT_EQ(single[0].root, 70);

    EXPECT_THROW(sequence_range(5, 4), ParameterError);
}

TEST(AValues, MatchesPerIndexAndBudget) {
    auto vals = a_values(5000, 3);
    for (u64 n = 0; n <= 5000; ++n) ASSERT_EQ(vals[n], a_u64(n));
    EXPECT_THROW(a_values(1000000, 1, 1024), ResourceError);
    try {
        a_values(1000000, 1, 1024);
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("1024"), std::string::npos);
    }
}

TEST(ResidualC, FrozenValues) {
    // c_1 = -1/(2 sqrt 3), c_2 = 1 - sqrt(2/3), c_24 = -24 sqrt 2.
    EXPECT_NEAR(static_cast<double>(residual_c(1)), -0.2886751345948128822, 1e-15);
    EXPECT_NEAR(static_cast<double>(residual_c(2)), 0.1835034190722739673, 1e-15);
    EXPECT_NEAR(static_cast<double>(residual_c(24)), -33.94112549695428117, 1e-12);
    EXPECT_THROW(residual_c(0), ParameterError);
}

TEST(BSieve, ExamplesAndOracle) {
    auto b1 = b_sieve(1);
    EXPECT_EQ(b1[1], 0u);

    auto b = b_sieve(10000);
    EXPECT_EQ(b[4], 6u);   // a_1 + a_2 + a_4 = 0 + 1 + 5
    EXPECT_EQ(b[6], 12u);  // a_1 + a_2 + a_3 + a_6 = 0 + 1 + 2 + 9

    // Independent divisor enumeration for every n <= 10^4.
    auto avals = a_values(10000);
    for (u64 n = 1; n <= 10000; ++n) {
        u64 brute = 0;
        for (u64 d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            brute += avals[d];
            if (d != n / d) brute += avals[n / d];
        }
        ASSERT_EQ(b[n], brute) << "n=" << n;
    }
}

TEST(BSieve, BudgetError) {
    try {
        b_sieve(1000000, 4096);
        FAIL() << "expected ResourceError";
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("4096"), std::string::npos);
    }
}

TEST(FracSqrt, ExamplesAndScaling) {
    EXPECT_EQ(frac_sqrt_pyramidal(24).value, 0);

    const auto f2 = frac_sqrt_pyramidal(2);
    EXPECT_NEAR(f2.to_double(), 0.23606797749978969641, 1e-15);
    const auto f3 = frac_sqrt_pyramidal(3);
    EXPECT_NEAR(f3.to_double(), 0.74165738677394138558, 1e-15);

    EXPECT_THROW(frac_sqrt_pyramidal(0), ParameterError);
    EXPECT_THROW(frac_sqrt_pyramidal(5, 8), ParameterError);
    EXPECT_THROW(frac_sqrt_pyramidal(5, 500), ParameterError);
}

TEST(FracSqrt, PrecisionLevelsAgree) {
    for (u64 n : {u64(2), u64(3), u64(17), u64(1000), u64(999983)}) {
        for (unsigned B : {16u, 64u, 96u, 224u}) {
            const auto lo = frac_sqrt_pyramidal(n, B);
            const auto hi = frac_sqrt_pyramidal(n, B + 32);
            EXPECT_EQ(lo.scale_bits, B);
            EXPECT_GE(lo.value, 0);
            EXPECT_LT(lo.value, Int(1) << B);
            EXPECT_NEAR(lo.to_double(), hi.to_double(), ldexp(1.0, 1 - static_cast<int>(B)));
            EXPECT_DOUBLE_EQ(static_cast<double>(lo.error_bound),
                             ldexp(1.0, 1 - static_cast<int>(B)));
        }
    }
}

// ---------------------------------------------------------------------------
// Binary cache format.
// ---------------------------------------------------------------------------

TEST(Cache, RoundTrip) {
    const std::string path = ::testing::TempDir() + "pyrseq_roundtrip.bin";
    auto avals = a_values(1000);
    std::vector<CacheRecord> records;
    for (u64 n = 0; n <= 1000; ++n) records.push_back({n, avals[n]});
    cache_write(path, records);
    const auto back = cache_read(path);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(back[i].n, records[i].n);
        EXPECT_EQ(back[i].a, records[i].a);
    }
    std::remove(path.c_str());
}

TEST(Cache, CorruptMagic) {
    const std::string path = ::testing::TempDir() + "pyrseq_badmagic.bin";
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOTMAGIC" << std::string(8, '\0');
    }
    try {
        cache_read(path);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset, 0u);
    }
    std::remove(path.c_str());
}

TEST(Cache, Truncated) {
    const std::string path = ::testing::TempDir() + "pyrseq_trunc.bin";
    std::vector<CacheRecord> records{{1, 0}, {2, 1}};
    cache_write(path, records);
    {
        // chop the final record in half
        std::ifstream is(path, std::ios::binary);
        std::string data((std::istreambuf_iterator<char>(is)), {});
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os.write(data.data(), static_cast<std::streamsize>(data.size() - 8));
    }
    try {
        cache_read(path);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset, 32u);  // second record starts at 16 + 16
    }
    std::remove(path.c_str());
}

TEST(Cache, HugeDeclaredCountRejectedBeforeAllocation) {
    const std::string path = ::testing::TempDir() + "pyrseq_hugecount.bin";
    {
        std::ofstream os(path, std::ios::binary);
        os.write(kCacheMagic, 8);
        unsigned char cnt[8];
        for (int i = 0; i < 8; ++i) cnt[i] = 0xFF;  // count = 2^64 - 1
        os.write(reinterpret_cast<const char*>(cnt), 8);
    }
    try {
        cache_read(path);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset, 16u);
    }
    std::remove(path.c_str());
}

TEST(Cache, RefusesOutOfRangeIndex) {
    const std::string path = ::testing::TempDir() + "pyrseq_range.bin";
    std::vector<CacheRecord> records{{kCacheMaxIndex, 7}};
    EXPECT_THROW(cache_write(path, records), FormatError);
    EXPECT_THROW(cache_read(::testing::TempDir() + "no_such_file.bin"), ResourceError);
}
