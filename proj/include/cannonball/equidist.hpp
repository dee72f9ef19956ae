#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cannonball/exact.hpp"

namespace cannonball {

// Fractional-part families of sqrt(P_n) over AP blocks, exact discrepancy of
// finite point sets, exponential sums, and the two inequalities they feed:
// the Erdos-Turan bound and the second-derivative (van der Corput style)
// bound with phase h(x) = sqrt(P_x).  Both inequalities are theorems; a
// violated bound in tests means an implementation bug, not bad luck.

struct UnitSample {
    std::vector<double> points;  // in [0,1)
    struct Meta {
        u64 start = 0;
        u64 q = 1;
        u64 b = 0;
        u64 count = 0;
    } meta;
    // Fixed-point numerators of the points when built from frac_sqrt_pyramidal
    // (empty for hand-built samples).  Kept so that m * x mod 1 can be reduced
    // exactly before any trig call.
    std::vector<Int> fixed;
    unsigned scale_bits = 0;

    std::size_t size() const { return points.size(); }
};

inline UnitSample make_sample(std::vector<double> pts) {
    if (pts.empty()) throw ParameterError("make_sample: empty sample");
    for (double p : pts) {
        if (!(p >= 0.0 && p < 1.0)) throw ParameterError("make_sample: point outside [0,1)");
    }
    UnitSample s;
    s.meta.count = pts.size();
    s.points = std::move(pts);
    return s;
}

// Points {sqrt(P_{n_i})} for the first `count` indices n_i >= start with
// n_i = b (mod q).
inline UnitSample frac_family(u64 start, u64 q, u64 b, u64 count,
                              unsigned scale_bits = kDefaultScaleBits) {
    if (q < 1) throw ParameterError("frac_family: q must be >= 1");
    if (count < 1) throw ParameterError("frac_family: count must be >= 1");
    UnitSample s;
    s.meta = {start, q, b % q, count};
    s.scale_bits = scale_bits;
    s.points.reserve(count);
    s.fixed.reserve(count);
    u64 n = std::max<u64>(start, 1);  // index 0 has no fractional part to take
    while (n % q != b % q) ++n;
    for (u64 i = 0; i < count; ++i, n += q) {
        FixedPointFraction f = frac_sqrt_pyramidal(n, scale_bits);
        s.points.push_back(f.to_double());
        s.fixed.push_back(std::move(f.value));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Discrepancy.  With sorted points x_(1..N):
//   D*_N = max_i max( i/N - x_(i), x_(i) - (i-1)/N )
//   D_N  = sup over [alpha,beta) of |count/N - (beta-alpha)|, reached in the
//          limit at point coordinates; with g+(j) = j/N - x_(j) and
//          g-(i) = x_(i) - (i-1)/N the overfull side is max_{i<=j} g+(j)+g-(i)
//          and the underfull side is max_{i<j} g+(i)+g-(j) with sentinels
//          x_(0) = 0, x_(N+1) = 1.  Both scans are O(N) after sorting.
// ---------------------------------------------------------------------------

inline double star_discrepancy(const UnitSample& sample) {
    if (sample.points.empty()) throw ParameterError("star_discrepancy: empty sample");
    std::vector<double> xs = sample.points;
    std::sort(xs.begin(), xs.end());
    const double N = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max(d, (static_cast<double>(i) + 1) / N - xs[i]);
        d = std::max(d, xs[i] - static_cast<double>(i) / N);
    }
    return d;
}

inline double extreme_discrepancy(const UnitSample& sample) {
    if (sample.points.empty()) throw ParameterError("extreme_discrepancy: empty sample");
    std::vector<double> xs = sample.points;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const double N = static_cast<double>(n);

    auto gp = [&](std::size_t j) {  // j in [1, N]
        return static_cast<double>(j) / N - xs[j - 1];
    };
    auto gm = [&](std::size_t i) {  // i in [1, N]
        return xs[i - 1] - (static_cast<double>(i) - 1) / N;
    };

    double d_over = -1e300, pref = -1e300;
    for (std::size_t j = 1; j <= n; ++j) {
        pref = std::max(pref, gm(j));
        d_over = std::max(d_over, gp(j) + pref);
    }

    // Sentinels: g+(0) = 0 (alpha = 0), g-(N+1) = 0 (beta = 1).
    double d_under = -1e300;
    pref = 0.0;  // g+(0)
    for (std::size_t j = 1; j <= n + 1; ++j) {
        const double gmj = (j <= n) ? gm(j) : 0.0;
        d_under = std::max(d_under, pref + gmj);
        if (j <= n) pref = std::max(pref, gp(j));
    }

    return std::max(d_over, d_under);
}

// ---------------------------------------------------------------------------
// Exponential sums sum_i e(m x_i).  e(m sqrt(P_n)) = e(m {sqrt(P_n)}), so
// sample points suffice.  m*x is reduced mod 1 in fixed point when the
// sample carries exact numerators (argument error < 2^-40 for m <= 2^20).
// ---------------------------------------------------------------------------

inline std::complex<double> exp_sum(const UnitSample& sample, u64 m) {
    if (m < 1) throw ParameterError("exp_sum: m must be >= 1");
    const std::size_t n = sample.size();
    const bool have_fixed = sample.fixed.size() == n && sample.scale_bits > 0;
    // m * value stays below 2^127, so the reduction runs in u128.
    const bool narrow = have_fixed && sample.scale_bits <= 112 && m < (u64(1) << 15);

    auto fixed_u128 = [&](std::size_t i) {
        const mpz_srcptr z = sample.fixed[i].get_mpz_t();
        u128 v = mpz_size(z) > 1 ? (static_cast<u128>(mpz_getlimbn(z, 1)) << 64) : 0;
        if (mpz_size(z) > 0) v |= mpz_getlimbn(z, 0);
        return v;
    };

    std::vector<std::complex<double>> partial;
    partial.reserve((n + kBlockSize - 1) / kBlockSize);
    for (std::size_t lo = 0; lo < n; lo += kBlockSize) {
        const std::size_t hi = std::min(n, lo + static_cast<std::size_t>(kBlockSize));
        std::complex<double> acc{0, 0};
        for (std::size_t i = lo; i < hi; ++i) {
            long double frac;
            if (narrow) {
                const u128 mask = (static_cast<u128>(1) << sample.scale_bits) - 1;
                const u128 t = (fixed_u128(i) * m) & mask;
                frac = ldexpl(ld_from_u128(t), -static_cast<int>(sample.scale_bits));
            } else if (have_fixed) {
                Int t = sample.fixed[i] * static_cast<unsigned long>(m);
                mpz_fdiv_r_2exp(t.get_mpz_t(), t.get_mpz_t(), sample.scale_bits);
                frac = static_cast<long double>(
                    ldexp(mpz_get_d(t.get_mpz_t()), -static_cast<int>(sample.scale_bits)));
            } else {
                frac = fmodl(static_cast<long double>(m) *
                                 static_cast<long double>(sample.points[i]),
                             1.0L);
            }
            const long double theta = kTwoPi * frac;
            acc += std::complex<double>(static_cast<double>(cosl(theta)),
                                        static_cast<double>(sinl(theta)));
        }
        partial.push_back(acc);
    }
    while (partial.size() > 1) {
        std::size_t out = 0;
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2)
            partial[out++] = partial[i] + partial[i + 1];
        if (partial.size() % 2 == 1) partial[out++] = partial.back();
        partial.resize(out);
    }
    return partial.empty() ? std::complex<double>{0, 0} : partial.front();
}

// ---------------------------------------------------------------------------
// Bound comparisons.
// ---------------------------------------------------------------------------

struct BoundComparison {
    double measured = 0;
    double bound = 0;
    u64 parameter = 0;  // K for Erdos-Turan, m for the derivative bound
    bool satisfied = false;
};

// Unnormalized count convention: the discrepancy side is N * D_N and the
// bound is N/(K+1) + 3 sum_{m<=K} |S_m|/m.
inline BoundComparison erdos_turan_bound(const UnitSample& sample, u64 K) {
    if (K < 1) throw ParameterError("erdos_turan_bound: K must be >= 1");
    const double N = static_cast<double>(sample.size());
    double bound = N / (static_cast<double>(K) + 1);
    for (u64 m = 1; m <= K; ++m) {
        bound += 3.0 * std::abs(exp_sum(sample, m)) / static_cast<double>(m);
    }
    BoundComparison cmp;
    cmp.parameter = K;
    cmp.measured = N * extreme_discrepancy(sample);
    cmp.bound = bound;
    cmp.satisfied = cmp.measured <= cmp.bound + 1e-9;
    return cmp;
}

// h(t) = sqrt(P_t) with P extended to real t; P' = t^2 + t + 1/6, P'' = 2t+1.
struct PhaseDerivatives {
    long double h;
    long double h1;
    long double h2;
};

inline PhaseDerivatives pyramid_sqrt_derivatives(long double t) {
    if (!(t >= 1.0L)) throw std::domain_error("pyramid_sqrt_derivatives: t must be >= 1");
    const long double P = (2.0L * t * t * t + 3.0L * t * t + t) / 6.0L;
    const long double P1 = t * t + t + 1.0L / 6.0L;
    const long double P2 = 2.0L * t + 1.0L;
    const long double h = sqrtl(P);
    PhaseDerivatives d;
    d.h = h;
    d.h1 = P1 / (2.0L * h);
    d.h2 = (2.0L * P2 * P - P1 * P1) / (4.0L * P * h);
    return d;
}

// Second-derivative bound over the AP block {n = start (mod q)} in
// [start, end]:  |sum e(m h(n))| <= (m|h'(end)-h'(start)| + 2) *
// (4 (m h''(end))^{-1/2} + 3).
inline BoundComparison kn_bound(u64 block_start, u64 block_end, u64 q, u64 m,
                                unsigned scale_bits = kDefaultScaleBits) {
    if (block_start < 1 || block_end <= block_start)
        throw ParameterError("kn_bound: need block_end > block_start >= 1");
    if (q < 1 || m < 1) throw ParameterError("kn_bound: q and m must be >= 1");

    const u64 count = (block_end - block_start) / q + 1;
    UnitSample pts = frac_family(block_start, q, block_start % q, count, scale_bits);

    const auto da = pyramid_sqrt_derivatives(static_cast<long double>(block_start));
    const auto db = pyramid_sqrt_derivatives(static_cast<long double>(block_end));
    // P'' > 0 for t >= 1, so h'' stays positive on the block.
    assert(db.h2 > 0.0L);
    const long double md = static_cast<long double>(m);
    const long double factor1 = md * fabsl(db.h1 - da.h1) + 2.0L;
    const long double factor2 = 4.0L / sqrtl(md * db.h2) + 3.0L;

    BoundComparison cmp;
    cmp.parameter = m;
    cmp.measured = std::abs(exp_sum(pts, m));
    cmp.bound = static_cast<double>(factor1 * factor2);
    cmp.satisfied = cmp.measured <= cmp.bound + 1e-9;
    return cmp;
}

}  // namespace cannonball
