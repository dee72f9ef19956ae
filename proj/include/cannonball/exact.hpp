#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cannonball/bigint.hpp"
#include "cannonball/errors.hpp"
#include "cannonball/parallel.hpp"

namespace cannonball {

// ---------------------------------------------------------------------------
// Square pyramidal numbers P_n = n(n+1)(2n+1)/6 and the distance a_n from
// P_n to the nearest perfect square.  a_n = 0 exactly for n in {0, 1, 24}
// (P_24 = 4900 = 70^2).  Everything here is exact integer arithmetic; the
// u64/u128 fast path covers n <= 10^12 and the mpz path covers the rest.
// ---------------------------------------------------------------------------

// Largest n routed through the u128 fast path: P_n < 2^120 for n <= 10^12,
// which keeps every intermediate product clear of u128 overflow.
inline constexpr u64 kFastPathMaxN = 1000000000000ull;

inline u128 pyramidal_u128(u64 n) {
    assert(n <= kFastPathMaxN);
    // Divide exactly before multiplying: 2 | n(n+1), then 3 | [n(n+1)/2](2n+1).
    u128 t = (static_cast<u128>(n) * (n + 1)) / 2;
    return (t * (2 * static_cast<u128>(n) + 1)) / 3;
}

inline Int pyramidal(const Int& n) {
    if (n < 0) throw ParameterError("pyramidal: negative index");
    Int t = n * (n + 1) / 2;
    return t * (2 * n + 1) / 3;
}

inline Int pyramidal(u64 n) {
    if (n <= kFastPathMaxN) return int_from_u128(pyramidal_u128(n));
    return pyramidal(Int(static_cast<unsigned long>(n)));
}

struct NearestSquare {
    Int distance;
    Int nearest_root;
};

inline NearestSquare nearest_square_distance(const Int& N) {
    if (N < 0) throw ParameterError("nearest_square_distance: negative argument");
    Int r = isqrt(N);
    Int below = N - r * r;
    Int above = (r + 1) * (r + 1) - N;
    // A tie would need 2N = 2r^2 + 2r + 1, which is odd.
    assert(below != above);
    if (below < above) return {below, r};
    return {above, r + 1};
}

inline u64 a_u64(u64 n) {
    assert(n <= kFastPathMaxN);
    const u128 P = pyramidal_u128(n);
    const u128 r = isqrt_u128(P);
    const u128 below = P - r * r;
    const u128 above = (r + 1) * (r + 1) - P;
    assert(below != above);
    return static_cast<u64>(below < above ? below : above);
}

inline Int a(u64 n) {
    if (n <= kFastPathMaxN) return int_from_u128(a_u64(n));
    return nearest_square_distance(pyramidal(Int(static_cast<unsigned long>(n)))).distance;
}

// Bulk generation of a_0..a_x as u64 (a_n <= floor(sqrt(P_n)) < 2^64 on the
// fast-path domain).  Disjoint blocks fill disjoint slots, so this
// parallelizes freely.
inline std::vector<u64> a_values(u64 x, unsigned workers = 1,
                                 u64 memory_budget_bytes = u64(2) << 30) {
    if (x > kFastPathMaxN) throw ParameterError("a_values: index beyond fast-path domain");
    const u64 need = (x + 1) * sizeof(u64);
    if (need > memory_budget_bytes) {
        throw ResourceError("a_values: " + std::to_string(need) +
                            " bytes needed, budget is " +
                            std::to_string(memory_budget_bytes) + " bytes");
    }
    std::vector<u64> out(static_cast<std::size_t>(x) + 1);
    parallel_block_for(0, x + 1, workers, [&](u64 lo, u64 hi) {
        for (u64 n = lo; n < hi; ++n) out[static_cast<std::size_t>(n)] = a_u64(n);
    });
    return out;
}

// ---------------------------------------------------------------------------
// SequenceRecord and range generation.
// ---------------------------------------------------------------------------

struct SequenceRecord {
    u64 n;
    Int P;     // pyramidal number
    Int root;  // floor(sqrt(P))
    Int a;     // distance to nearest square
};

inline SequenceRecord make_record(u64 n) {
    SequenceRecord rec;
    rec.n = n;
    rec.P = pyramidal(n);
    rec.root = isqrt(rec.P);
    Int below = rec.P - rec.root * rec.root;
    Int above = (rec.root + 1) * (rec.root + 1) - rec.P;
    assert(below != above);
    rec.a = below < above ? below : above;
    return rec;
}

// Streams records for n in [lo, hi], updating P incrementally via
// P_{n+1} = P_n + (n+1)^2.  The closed form is the independent second route;
// tests assert both agree.
class SequenceRange {
public:
    SequenceRange(u64 lo, u64 hi) : n_(lo), hi_(hi), P_(pyramidal(lo)) {
        if (lo > hi) throw ParameterError("sequence_range: lo > hi");
    }

    bool has_next() const { return n_ <= hi_; }

    SequenceRecord next() {
        if (!has_next()) throw ParameterError("sequence_range: exhausted");
        SequenceRecord rec;
        rec.n = n_;
        rec.P = P_;
        rec.root = isqrt(P_);
        Int below = P_ - rec.root * rec.root;
        Int above = (rec.root + 1) * (rec.root + 1) - P_;
        assert(below != above);
        rec.a = below < above ? below : above;
        if (n_ < hi_) {
            Int step(static_cast<unsigned long>(n_ + 1));
            P_ += step * step;
        }
        ++n_;
        return rec;
    }

private:
    u64 n_, hi_;
    Int P_;
};

inline std::vector<SequenceRecord> sequence_range(u64 lo, u64 hi) {
    SequenceRange range(lo, hi);
    std::vector<SequenceRecord> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    while (range.has_next()) out.push_back(range.next());
    return out;
}

// ---------------------------------------------------------------------------
// Residual c_n = a_n - n^{3/2}/(2 sqrt 3).  The n^{3/2} term comes from the
// square root of n^3, keeping ~19 significant digits in long double.
// ---------------------------------------------------------------------------

inline constexpr long double kSqrt3 = 1.7320508075688772935274463415058724L;
inline constexpr long double kTwoPi = 6.2831853071795864769252867665590058L;

inline long double n_pow_3_2(u64 n) {
    const u128 cube = static_cast<u128>(n) * n * n;
    return sqrtl(ld_from_u128(cube));
}

inline long double residual_c(u64 n) {
    if (n < 1) throw ParameterError("residual_c: n must be >= 1");
    const long double an = (n <= kFastPathMaxN)
                               ? static_cast<long double>(a_u64(n))
                               : ld_from_int(a(n));
    return an - n_pow_3_2(n) / (2.0L * kSqrt3);
}

// ---------------------------------------------------------------------------
// Divisor-convolution sieve: b_n = sum_{d | n} a_d, built in O(x log x)
// additions by streaming a_d onto every multiple of d.  The array is owned by
// this single writer; accumulation is overflow-checked.
// ---------------------------------------------------------------------------

inline std::vector<u64> b_sieve(u64 x, u64 memory_budget_bytes = u64(2) << 30,
                                std::span<const u64> a_vals = {},
                                unsigned workers = 1) {
    if (x < 1) throw ParameterError("b_sieve: x must be >= 1");
    const bool have_a = a_vals.size() > x;
    const u64 need = (x + 1) * sizeof(u64) * (have_a ? 1 : 2);
    if (need > memory_budget_bytes) {
        throw ResourceError("b_sieve: " + std::to_string(need) +
                            " bytes needed, budget is " +
                            std::to_string(memory_budget_bytes) + " bytes");
    }
    std::vector<u64> own;
    if (!have_a) {
        own = a_values(x, workers, memory_budget_bytes - (x + 1) * sizeof(u64));
        a_vals = own;
    }
    std::vector<u64> b(static_cast<std::size_t>(x) + 1, 0);
    for (u64 d = 1; d <= x; ++d) {
        const u64 ad = a_vals[static_cast<std::size_t>(d)];
        if (ad == 0) continue;
        for (u64 m = d; m <= x; m += d) {
            if (__builtin_add_overflow(b[static_cast<std::size_t>(m)], ad,
                                       &b[static_cast<std::size_t>(m)])) {
                throw ResourceError("b_sieve: accumulator overflow at n=" + std::to_string(m));
            }
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// Fractional part of sqrt(P_n) as an exact scaled integer:
//   value = isqrt(P_n * 4^B) - floor(sqrt(P_n)) * 2^B,  in [0, 2^B),
// so value / 2^B approximates {sqrt(P_n)} with error < 2^-B.  Deterministic
// and platform independent, unlike a floating square root.
// ---------------------------------------------------------------------------

struct FixedPointFraction {
    Int value;
    unsigned scale_bits;
    long double error_bound;

    double to_double() const {
        return std::ldexp(mpz_get_d(value.get_mpz_t()), -static_cast<int>(scale_bits));
    }
};

inline constexpr unsigned kDefaultScaleBits = 96;

inline FixedPointFraction frac_sqrt_pyramidal(u64 n, unsigned scale_bits = kDefaultScaleBits) {
    if (n < 1) throw ParameterError("frac_sqrt_pyramidal: n must be >= 1");
    if (scale_bits < 16 || scale_bits > 256) {
        throw ParameterError("frac_sqrt_pyramidal: scale_bits must be in [16, 256]");
    }
    const Int P = pyramidal(n);
    Int scaled = P << (2 * scale_bits);
    Int s = isqrt(scaled);
    Int r = isqrt(P);
    FixedPointFraction f;
    f.value = s - (r << scale_bits);
    f.scale_bits = scale_bits;
    f.error_bound = ldexpl(1.0L, 1 - static_cast<int>(scale_bits));
    assert(f.value >= 0 && f.value < (Int(1) << scale_bits));
    return f;
}

}  // namespace cannonball
