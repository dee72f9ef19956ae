#include <gtest/gtest.h>

#include <random>

#include "cannonball/equidist.hpp"

using namespace cannonball;

TEST(StarDiscrepancy, Examples) {
    EXPECT_DOUBLE_EQ(star_discrepancy(make_sample({0.5})), 0.5);

    const int N = 8;
    std::vector<double> lattice;
    for (int i = 1; i <= N; ++i) lattice.push_back((2.0 * i - 1) / (2.0 * N));
    EXPECT_NEAR(star_discrepancy(make_sample(lattice)), 1.0 / (2 * N), 1e-15);

    EXPECT_DOUBLE_EQ(star_discrepancy(make_sample({0.0, 0.0})), 1.0);
}

TEST(ExtremeDiscrepancy, ExamplesUnderSupSemantics) {
    // The sup over [alpha, beta) reaches 1 for any single point: the interval
    // [x, x+eps) captures the full mass with vanishing length.
    EXPECT_DOUBLE_EQ(extreme_discrepancy(make_sample({0.5})), 1.0);

    const int N = 8;
    std::vector<double> lattice;
    for (int i = 0; i < N; ++i) lattice.push_back(static_cast<double>(i) / N);
    EXPECT_NEAR(extreme_discrepancy(make_sample(lattice)), 1.0 / N, 1e-15);

    // Empty middle interval (0.2, 0.9) dominates.
    EXPECT_NEAR(extreme_discrepancy(make_sample({0.2, 0.9})), 0.7, 1e-15);
}

TEST(ExtremeDiscrepancy, BracketsStarDiscrepancy) {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> pts;
        const int n = 1 + static_cast<int>(rng() % 200);
        for (int i = 0; i < n; ++i) pts.push_back(uni(rng));
        const auto s = make_sample(pts);
        const double dstar = star_discrepancy(s);
        const double d = extreme_discrepancy(s);
        ASSERT_GE(d, dstar - 1e-12);
        ASSERT_LE(d, 2 * dstar + 1e-12);
    }
    for (u64 q : {u64(1), u64(5)}) {
        const auto fam = frac_family(1, q, 0, 2000);
        const double dstar = star_discrepancy(fam);
        const double d = extreme_discrepancy(fam);
        EXPECT_GE(d, dstar - 1e-12);
        EXPECT_LE(d, 2 * dstar + 1e-12);
    }
}

TEST(ExtremeDiscrepancy, BruteForceIntervalOracle) {
    // Evaluate the sup directly over all interval endpoints (one-sided limits
    // included) for small random samples.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        std::vector<double> pts;
        for (int i = 0; i < n; ++i) pts.push_back(uni(rng));
        std::vector<double> xs = pts;
        std::sort(xs.begin(), xs.end());
        const double N = n;
        double best = 0;
        std::vector<double> grid{0.0, 1.0};
        for (double x : xs) grid.push_back(x);
        std::sort(grid.begin(), grid.end());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = i; j < grid.size(); ++j) {
                const double alpha = grid[i], beta = grid[j];
                // closed and open counts cover the one-sided limits
                int closed = 0, open = 0;
                for (double x : xs) {
                    if (x >= alpha && x <= beta) ++closed;
                    if (x > alpha && x < beta) ++open;
                }
                best = std::max(best, closed / N - (beta - alpha));
                best = std::max(best, (beta - alpha) - open / N);
            }
        }
        const double d = extreme_discrepancy(make_sample(pts));
        ASSERT_NEAR(d, best, 1e-12) << "trial " << trial;
    }
}

TEST(FracFamily, Examples) {
    const auto perfect = frac_family(24, 1, 0, 1);
    ASSERT_EQ(perfect.size(), 1u);
    EXPECT_DOUBLE_EQ(perfect.points[0], 0.0);

    const auto first3 = frac_family(1, 1, 0, 3);
    ASSERT_EQ(first3.size(), 3u);
    EXPECT_DOUBLE_EQ(first3.points[0], 0.0);
    EXPECT_NEAR(first3.points[1], 0.23606797749978969641, 1e-15);
    EXPECT_NEAR(first3.points[2], 0.74165738677394138558, 1e-15);

    const auto odd = frac_family(1, 2, 1, 2);  // n = 1, 3
    EXPECT_DOUBLE_EQ(odd.points[0], 0.0);
    EXPECT_NEAR(odd.points[1], 0.74165738677394138558, 1e-15);

    EXPECT_THROW(frac_family(1, 0, 0, 1), ParameterError);
    EXPECT_THROW(frac_family(1, 1, 0, 0), ParameterError);
}

TEST(ExpSum, Examples) {
    EXPECT_NEAR(std::abs(exp_sum(make_sample({0.0}), 7) - std::complex<double>(1, 0)), 0.0,
                1e-15);
    EXPECT_NEAR(std::abs(exp_sum(make_sample({0.0, 0.5}), 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(exp_sum(make_sample({0.25}), 2) - std::complex<double>(-1, 0)), 0.0,
                1e-12);
    EXPECT_THROW(exp_sum(make_sample({0.5}), 0), ParameterError);
}

TEST(ExpSum, MagnitudeBoundedByN) {
    for (u64 q : {u64(1), u64(7)}) {
        const auto fam = frac_family(1, q, 3, 500);
        for (u64 m : {u64(1), u64(13), u64(407)}) {
            EXPECT_LE(std::abs(exp_sum(fam, m)), 500.0 + 1e-9);
        }
    }
}

TEST(ExpSum, FixedPointMatchesDoublePath) {
    // Same sample with and without exact numerators; frequencies small enough
    // that the double path is still accurate.
    const auto fam = frac_family(1, 3, 1, 300);
    const auto plain = make_sample(fam.points);
    for (u64 m : {u64(1), u64(9), u64(57)}) {
        EXPECT_NEAR(std::abs(exp_sum(fam, m) - exp_sum(plain, m)), 0.0, 1e-7);
    }
}

TEST(ErdosTuran, HoldsOnTestedFamilies) {
    const auto single = erdos_turan_bound(make_sample({0.37}), 1);
    EXPECT_TRUE(single.satisfied);
    EXPECT_GE(single.bound, single.measured);

    for (u64 K : {u64(10), u64(100)}) {
        const auto cmp = erdos_turan_bound(frac_family(1, 1, 0, 1000), K);
        EXPECT_TRUE(cmp.satisfied) << "K=" << K;
    }
    EXPECT_TRUE(erdos_turan_bound(frac_family(1, 7, 3, 1000), 100).satisfied);

    // Any sample whatsoever: the inequality is a theorem.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> pts;
        const int n = 1 + static_cast<int>(rng() % 400);
        for (int i = 0; i < n; ++i) pts.push_back(uni(rng) * uni(rng));
        ASSERT_TRUE(erdos_turan_bound(make_sample(pts), 1 + rng() % 200).satisfied);
    }
}

TEST(PhaseDerivatives, ClosedFormsAndMonotonicity) {
    const auto d1 = pyramid_sqrt_derivatives(1.0L);
    EXPECT_NEAR(static_cast<double>(d1.h), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(d1.h1), 13.0 / 12.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(d1.h2), 47.0 / 144.0, 1e-15);

    EXPECT_NEAR(static_cast<double>(pyramid_sqrt_derivatives(24.0L).h), 70.0, 1e-12);

    EXPECT_LT(pyramid_sqrt_derivatives(10.0L).h1, pyramid_sqrt_derivatives(100.0L).h1);
    EXPECT_GT(pyramid_sqrt_derivatives(10.0L).h2, pyramid_sqrt_derivatives(100.0L).h2);

    EXPECT_THROW(pyramid_sqrt_derivatives(0.5L), std::domain_error);
}

TEST(PhaseDerivatives, FiniteDifferenceOracle) {
    for (long double t : {2.0L, 10.0L, 100.0L, 1000.0L}) {
        const long double eps = t * 1e-4L;
        const auto mid = pyramid_sqrt_derivatives(t);
        const auto lo = pyramid_sqrt_derivatives(t - eps);
        const auto hi = pyramid_sqrt_derivatives(t + eps);
        const long double fd1 = (hi.h - lo.h) / (2 * eps);
        const long double fd2 = (hi.h - 2 * mid.h + lo.h) / (eps * eps);
        EXPECT_NEAR(static_cast<double>(fd1 / mid.h1), 1.0, 1e-6) << "t=" << (double)t;
        EXPECT_NEAR(static_cast<double>(fd2 / mid.h2), 1.0, 1e-4) << "t=" << (double)t;
    }
}

TEST(KnBound, SinglePointAndBlocks) {
    // One-point block: measured <= 1, bound >= 2*3 = 6.
    const auto single = kn_bound(1000, 1001, 5, 1);
    EXPECT_LE(single.measured, 1.0 + 1e-12);
    EXPECT_GE(single.bound, 6.0);
    EXPECT_TRUE(single.satisfied);

    for (u64 m : {u64(1), u64(2), u64(5)}) {
        EXPECT_TRUE(kn_bound(1000, 2000, 1, m).satisfied) << "m=" << m;
    }
    EXPECT_TRUE(kn_bound(10000, 11000, 3, 10).satisfied);

    EXPECT_THROW(kn_bound(2000, 1000, 1, 1), ParameterError);
    EXPECT_THROW(kn_bound(1000, 2000, 1, 0), ParameterError);
}

TEST(Equidistribution, DiscrepancyDecreasesWithN) {
    const double d3 = extreme_discrepancy(frac_family(1, 1, 0, 1000));
    const double d5 = extreme_discrepancy(frac_family(1, 1, 0, 100000));
    EXPECT_LT(d5, d3);
}

TEST(UnitSample, Validation) {
    EXPECT_THROW(make_sample({}), ParameterError);
    EXPECT_THROW(make_sample({1.0}), ParameterError);
    EXPECT_THROW(make_sample({-0.1}), ParameterError);
}
