#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cannonball/characters.hpp"

using namespace cannonball;

namespace {

u64 phi_of(u64 q) {
    u64 phi = 0;
    for (u64 n = 1; n <= q; ++n)
        if (std::gcd(n % q, q) == 1 || (q == 1 && n == 1)) ++phi;
    return q == 1 ? 1 : phi;
}

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % m);
        b = static_cast<u64>(static_cast<u128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

}  // namespace

TEST(UnitGroup, SmallModuli) {
    const auto g1 = unit_group_structure(1);
    EXPECT_EQ(g1->phi, 1u);
    EXPECT_TRUE(g1->generators.empty());

    const auto g4 = unit_group_structure(4);
    ASSERT_EQ(g4->generators.size(), 1u);
    EXPECT_EQ(g4->generators[0].g, 3u);
    EXPECT_EQ(g4->generators[0].order, 2u);

    const auto g8 = unit_group_structure(8);
    ASSERT_EQ(g8->generators.size(), 2u);
    EXPECT_EQ(g8->generators[0].g, 7u);  // -1 mod 8
    EXPECT_EQ(g8->generators[0].order, 2u);
    EXPECT_EQ(g8->generators[1].g, 5u);
    EXPECT_EQ(g8->generators[1].order, 2u);
}

TEST(UnitGroup, OrdersMultiplyToPhiAndDlogReconstructs) {
    for (u64 q = 1; q <= 60; ++q) {
        const auto G = unit_group_structure(q);
        u64 prod = 1;
        for (const auto& gen : G->generators) prod *= gen.order;
        ASSERT_EQ(prod, G->phi) << "q=" << q;
        ASSERT_EQ(G->phi, phi_of(q)) << "q=" << q;

        u64 units = 0;
        for (u64 r = 0; r < q; ++r) {
            if (!G->is_unit[r]) continue;
            ++units;
            u64 rebuilt = 1 % q;
            const auto exps = G->exponents(r);
            for (std::size_t i = 0; i < exps.size(); ++i) {
                rebuilt = static_cast<u64>(static_cast<u128>(rebuilt) *
                                           powmod(G->generators[i].g, exps[i], q) % q);
            }
            ASSERT_EQ(rebuilt, r) << "q=" << q << " r=" << r;
        }
        ASSERT_EQ(units, G->phi) << "q=" << q;
    }
}

TEST(Characters, CountAndPrincipalFirst) {
    for (u64 q = 1; q <= 24; ++q) {
        const auto chars = characters(q);
        ASSERT_EQ(chars.size(), phi_of(q)) << "q=" << q;
        EXPECT_TRUE(chars.front().principal);
        for (std::size_t i = 1; i < chars.size(); ++i) EXPECT_FALSE(chars[i].principal);
    }
}

TEST(Characters, ExamplesMod4Mod5) {
    const auto c4 = characters(4);
    ASSERT_EQ(c4.size(), 2u);
    EXPECT_NEAR(c4[1](3).real(), -1.0, 1e-15);
    EXPECT_NEAR(c4[1](3).imag(), 0.0, 1e-15);

    const auto c5 = characters(5);
    ASSERT_EQ(c5.size(), 4u);
    bool found_i = false;
    for (const auto& chi : c5) {
        const auto v = chi(2);
        if (std::abs(v - std::complex<double>(0, 1)) < 1e-12 ||
            std::abs(v - std::complex<double>(0, -1)) < 1e-12) {
            found_i = true;
        }
    }
    EXPECT_TRUE(found_i) << "2 is a primitive root mod 5; an order-4 character maps it to +-i";
}

TEST(Characters, IdSerialization) {
    EXPECT_EQ(characters(4)[1].id(), "4:1/2");
    const auto c8 = characters(8);
    EXPECT_EQ(c8[0].id(), "8:0/2,0/2");
    EXPECT_EQ(c8[1].id(), "8:0/2,1/2");
    EXPECT_EQ(c8[2].id(), "8:1/2,0/2");
    EXPECT_EQ(characters(1)[0].id(), "1:");
}

TEST(EvalChar, ZeroOnNonUnitsOneAtOne) {
    const auto c6 = characters(6);
    EXPECT_EQ(c6[0](4), std::complex<double>(0, 0));  // gcd(4,6) = 2
    for (u64 q = 1; q <= 12; ++q) {
        for (const auto& chi : characters(q)) {
            EXPECT_NEAR(std::abs(chi(1) - std::complex<double>(1, 0)), 0.0, 1e-15);
        }
    }
    // periodicity pins chi(7) = chi(3) = -1 mod 4
    EXPECT_NEAR(characters(4)[1](7).real(), -1.0, 1e-15);
}

TEST(EvalChar, PeriodicityExactAsRationals) {
    for (u64 q = 1; q <= 12; ++q) {
        for (const auto& chi : characters(q)) {
            for (u64 n = 0; n < 3 * q; ++n) {
                const auto a1 = chi.angle(n);
                const auto a2 = chi.angle(n + q);
                ASSERT_EQ(a1.has_value(), a2.has_value());
                if (a1) {
                    ASSERT_EQ(*a1, *a2) << "q=" << q << " n=" << n;
                }
            }
        }
    }
}

TEST(EvalChar, Multiplicativity) {
    std::mt19937_64 rng(777);
    for (u64 q = 1; q <= 24; ++q) {
        const auto chars = characters(q);
        for (int trial = 0; trial < 1000; ++trial) {
            const u64 m = rng() % 10000;
            const u64 n = rng() % 10000;
            const auto& chi = chars[rng() % chars.size()];
            const auto lhs = chi(m * n);
            const auto rhs = chi(m) * chi(n);
            ASSERT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12) << "q=" << q << " m=" << m << " n=" << n;
        }
    }
}

TEST(EvalChar, OrthogonalityAllPairs) {
    for (u64 q = 1; q <= 24; ++q) {
        const auto chars = characters(q);
        const u64 phi = chars.front().group->phi;
        for (std::size_t i = 0; i < chars.size(); ++i) {
            for (std::size_t j = 0; j < chars.size(); ++j) {
                std::complex<double> s{0, 0};
                for (u64 n = 0; n < q; ++n) s += chars[i](n) * std::conj(chars[j](n));
                const double expect = i == j ? static_cast<double>(phi) : 0.0;
                ASSERT_LT(std::abs(s - std::complex<double>(expect, 0)), 1e-9)
                    << "q=" << q << " i=" << i << " j=" << j;
            }
        }
    }
}

TEST(CharacterResidueSum, Dichotomy) {
    const auto s1 = character_residue_sum(1);
    ASSERT_EQ(s1.size(), 1u);
    EXPECT_NEAR(std::abs(s1[0] - std::complex<double>(1, 0)), 0.0, 1e-10);

    const auto s4 = character_residue_sum(4);
    ASSERT_EQ(s4.size(), 2u);
    EXPECT_NEAR(std::abs(s4[0] - std::complex<double>(2, 0)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(s4[1]), 0.0, 1e-10);

    for (u64 q = 1; q <= 24; ++q) {
        const auto chars = characters(q);
        const auto sums = character_residue_sum(q);
        for (std::size_t i = 0; i < sums.size(); ++i) {
            const double expect =
                chars[i].principal ? static_cast<double>(chars[i].group->phi) : 0.0;
            ASSERT_LT(std::abs(sums[i] - std::complex<double>(expect, 0)), 1e-10);
        }
    }
}

TEST(TwistedSum, TrivialCharacterIsPlainSum) {
    auto a = a_values(10000);
    const auto chars = characters(1);
    const auto rep = twisted_sum(chars[0], a, 1000);
    EXPECT_DOUBLE_EQ(rep.value.real(), 3685625.0);
    EXPECT_DOUBLE_EQ(rep.value.imag(), 0.0);
    EXPECT_EQ(rep.character_id, "1:");
}

TEST(TwistedSum, PrincipalEqualsCoprimeFilteredSum) {
    auto a = a_values(2000);
    for (u64 q : {u64(3), u64(6), u64(8)}) {
        const auto chi0 = characters(q)[0];
        const auto rep = twisted_sum(chi0, a, 2000);
        u128 filtered = 0;
        for (u64 n = 1; n <= 2000; ++n)
            if (std::gcd(n % q, q) == 1) filtered += a[n];
        EXPECT_NEAR(rep.value.real(), static_cast<double>(ld_from_u128(filtered)),
                    1e-6 * static_cast<double>(ld_from_u128(filtered)));
        EXPECT_DOUBLE_EQ(rep.value.imag(), 0.0);
        EXPECT_GT(rep.main_term, 0.0);
    }
}

TEST(TwistedSum, NonPrincipalMainTermIsZero) {
    auto a = a_values(1000);
    const auto chars = characters(3);
    const auto rep = twisted_sum(chars[1], a, 1000);
    EXPECT_DOUBLE_EQ(rep.main_term, 0.0);
    EXPECT_DOUBLE_EQ(rep.residual_abs, std::abs(rep.value));
}

TEST(ApReconstruct, MatchesDirectCoprimeSum) {
    auto a = a_values(10000);
    struct Case {
        u64 b, q, x;
    };
    for (const Case c : {Case{0, 1, 1000}, Case{1, 3, 1000}, Case{5, 8, 10000}}) {
        const auto recon = ap_reconstruct(c.b, c.q, c.x, a);
        const Int direct = sum_a_ap(a, APQuery(c.b, c.q, c.x));
        const double d = static_cast<double>(ld_from_int(direct));
        EXPECT_NEAR(recon.real(), d, 1e-6 * d) << "q=" << c.q;
        EXPECT_NEAR(recon.imag(), 0.0, 1e-6 * d);
    }
    EXPECT_THROW(ap_reconstruct(2, 4, 100, a), ParameterError);
    EXPECT_THROW(ap_reconstruct(0, 3, 100, a), ParameterError);
}
