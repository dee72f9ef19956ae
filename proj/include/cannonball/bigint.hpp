#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <gmpxx.h>

#include "cannonball/errors.hpp"

namespace cannonball {

using Int  = mpz_class;
using u64  = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// ---------------------------------------------------------------------------
// Integer square roots.  All sequence arithmetic routes through these; the
// u64/u128 paths are exact (floor) and the mpz path delegates to GMP.
// ---------------------------------------------------------------------------

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    // sqrtl seed is within a few ulps; clamp to the largest valid root so the
    // fix-up squares cannot wrap, then adjust in both directions.
    constexpr u64 max_root = 0xFFFFFFFFull;
    u64 r = std::min<u64>(static_cast<u64>(sqrtl(static_cast<long double>(n))), max_root);
    while (r > 0 && r * r > n) --r;
    while (r < max_root && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline u128 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    constexpr u64 max_root = ~static_cast<u64>(0);
    long double seed = sqrtl(static_cast<long double>(n));
    u128 r = seed >= static_cast<long double>(max_root) ? static_cast<u128>(max_root)
                                                        : static_cast<u128>(seed);
    while (r > 0 && r * r > n) --r;
    while (r < max_root && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline Int isqrt(const Int& n) {
    if (n < 0) throw ParameterError("isqrt: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// Conversions.  long double keeps a 64-bit mantissa on x86-64, so splitting
// into 64-bit chunks preserves ~19 significant digits.
// ---------------------------------------------------------------------------

inline Int int_from_u128(u128 v) {
    Int z(static_cast<unsigned long>(v >> 64));
    z <<= 64;
    z += static_cast<unsigned long>(v & ~static_cast<u64>(0));
    return z;
}

inline Int int_from_i128(i128 v) {
    if (v < 0) {
        Int z = int_from_u128(static_cast<u128>(-v));
        return -z;
    }
    return int_from_u128(static_cast<u128>(v));
}

inline long double ld_from_u128(u128 v) {
    u64 hi = static_cast<u64>(v >> 64);
    u64 lo = static_cast<u64>(v);
    return static_cast<long double>(hi) * 18446744073709551616.0L +
           static_cast<long double>(lo);
}

inline long double ld_from_i128(i128 v) {
    return v < 0 ? -ld_from_u128(static_cast<u128>(-v)) : ld_from_u128(static_cast<u128>(v));
}

inline long double ld_from_int(const Int& v) {
    // mpz_get_d truncates to 53 bits; walk the limbs instead.
    const mpz_srcptr z = v.get_mpz_t();
    const int n = static_cast<int>(mpz_size(z));
    long double r = 0.0L;
    for (int i = n - 1; i >= 0; --i) {
        r = r * 18446744073709551616.0L + static_cast<long double>(mpz_getlimbn(z, i));
    }
    return mpz_sgn(z) < 0 ? -r : r;
}

inline bool fits_u64(const Int& v) {
    return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline u64 u64_from_int(const Int& v) {
    u64 lo = mpz_getlimbn(v.get_mpz_t(), 0);
    return mpz_size(v.get_mpz_t()) == 0 ? 0 : lo;
}

}  // namespace cannonball
