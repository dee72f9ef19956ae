#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cannonball/characters.hpp"
#include "cannonball/exact.hpp"
#include "cannonball/parallel.hpp"

namespace cannonball {

// Dirichlet series attached to a_n:
//   F(s) = sum a_n n^-s          (absolutely convergent for Re s > 5/2)
//   H(s) = sum b_n n^-s = F(s) zeta(s),  b = a * 1
//   G(s) = sum c_n n^-s,  c_n = a_n - n^{3/2}/(2 sqrt 3)   (Re s > 29/12)
//   F(s) = G(s) + zeta(s - 3/2) / (2 sqrt 3)
// F has a simple pole at s = 5/2 with residue 1/(2 sqrt 3); H inherits the
// pole with residue zeta(5/2)/(2 sqrt 3).

// ---------------------------------------------------------------------------
// Riemann zeta for real s > 1 via Euler-Maclaurin:
//   zeta(s) = sum_{n<=N} n^-s + N^{1-s}/(s-1) - N^-s/2 + s N^{-s-1}/12 + R,
// with |R| below the first omitted (B4) term s(s+1)(s+2) N^{-s-3}/720 since
// t^-s is completely monotone.  N is chosen so that term is <= tol/2.
// ---------------------------------------------------------------------------

inline long double zeta_real_ld(long double s, long double tol) {
    if (!(s > 1.0L)) throw std::domain_error("zeta_real: s must be > 1");
    if (!(tol >= 1e-15L && tol <= 1e-3L))
        throw ParameterError("zeta_real: tol must be in [1e-15, 1e-3]");

    const long double coeff = 2.0L * s * (s + 1.0L) * (s + 2.0L) / (720.0L * tol);
    u64 N = 16;
    while (powl(static_cast<long double>(N), s + 3.0L) < coeff && N < (u64(1) << 26)) N *= 2;

    long double sum = 0.0L;
    for (u64 n = N; n >= 1; --n) sum += powl(static_cast<long double>(n), -s);
    const long double Nl = static_cast<long double>(N);
    sum += powl(Nl, 1.0L - s) / (s - 1.0L);
    sum -= 0.5L * powl(Nl, -s);
    sum += s / 12.0L * powl(Nl, -s - 1.0L);
    return sum;
}

inline double zeta_real(double s, double tol = 1e-12) {
    return static_cast<double>(zeta_real_ld(static_cast<long double>(s),
                                            static_cast<long double>(tol)));
}

// ---------------------------------------------------------------------------
// Truncated series.  Recomputation at the same (s, N) is bit-identical: the
// block structure is fixed and independent of the worker count.
// ---------------------------------------------------------------------------

struct PartialSeriesValue {
    double s = 0;
    u64 N = 0;
    std::complex<double> value{0, 0};
    std::string tail_note;
};

namespace detail {

inline std::string tail_note_for(double s, double abscissa, const char* kind) {
    if (s > abscissa) return std::string(kind) + " convergent at this s";
    return std::string("no ") + kind + " convergence at this s (abscissa exceeded)";
}

template <typename Term>
long double series_sum_ld(u64 N, unsigned workers, Term term) {
    return parallel_block_reduce<long double>(
        1, N + 1, workers, 0.0L,
        [&](u64 lo, u64 hi) {
            long double acc = 0.0L;
            for (u64 n = lo; n < hi; ++n) acc += term(n);
            return acc;
        },
        [](long double l, long double r) { return l + r; });
}

}  // namespace detail

inline PartialSeriesValue partial_F(std::span<const u64> a_vals, double s, u64 N,
                                    unsigned workers = 1) {
    if (N < 1) throw ParameterError("partial_F: N must be >= 1");
    if (a_vals.size() <= N) throw ParameterError("partial_F: a-values span too short");
    const long double sl = static_cast<long double>(s);
    PartialSeriesValue v;
    v.s = s;
    v.N = N;
    v.value = {static_cast<double>(detail::series_sum_ld(
                   N, workers,
                   [&](u64 n) {
                       return static_cast<long double>(a_vals[static_cast<std::size_t>(n)]) *
                              powl(static_cast<long double>(n), -sl);
                   })),
               0.0};
    v.tail_note = detail::tail_note_for(s, 2.5, "absolutely");
    return v;
}

inline PartialSeriesValue partial_H(std::span<const u64> b_vals, double s, u64 N,
                                    unsigned workers = 1) {
    if (N < 1) throw ParameterError("partial_H: N must be >= 1");
    if (b_vals.size() <= N) throw ParameterError("partial_H: b-values span too short");
    const long double sl = static_cast<long double>(s);
    PartialSeriesValue v;
    v.s = s;
    v.N = N;
    v.value = {static_cast<double>(detail::series_sum_ld(
                   N, workers,
                   [&](u64 n) {
                       return static_cast<long double>(b_vals[static_cast<std::size_t>(n)]) *
                              powl(static_cast<long double>(n), -sl);
                   })),
               0.0};
    v.tail_note = detail::tail_note_for(s, 2.5, "absolutely");
    return v;
}

inline PartialSeriesValue partial_G(std::span<const u64> a_vals, double s, u64 N,
                                    unsigned workers = 1) {
    if (N < 1) throw ParameterError("partial_G: N must be >= 1");
    if (a_vals.size() <= N) throw ParameterError("partial_G: a-values span too short");
    const long double sl = static_cast<long double>(s);
    PartialSeriesValue v;
    v.s = s;
    v.N = N;
    v.value = {static_cast<double>(detail::series_sum_ld(
                   N, workers,
                   [&](u64 n) {
                       const long double c =
                           static_cast<long double>(a_vals[static_cast<std::size_t>(n)]) -
                           n_pow_3_2(n) / (2.0L * kSqrt3);
                       return c * powl(static_cast<long double>(n), -sl);
                   })),
               0.0};
    v.tail_note = detail::tail_note_for(s, 29.0 / 12.0, "conditionally");
    return v;
}

// F via the shifted-zeta split; the two-path agreement with partial_F is the
// series-level consistency check.
inline double F_via_G(std::span<const u64> a_vals, double s, u64 N, unsigned workers = 1) {
    if (!(s > 2.5)) throw std::domain_error("F_via_G: s must be > 5/2");
    const double g = partial_G(a_vals, s, N, workers).value.real();
    return g + zeta_real(s - 1.5, 1e-12) / static_cast<double>(2.0L * kSqrt3);
}

// ---------------------------------------------------------------------------
// Pole probes: (s - 5/2) F(s) -> 1/(2 sqrt 3) as s -> 5/2+, and multiplying
// by zeta(s) gives the H residue zeta(5/2)/(2 sqrt 3).
// ---------------------------------------------------------------------------

enum class ProbeKind { F, H };

struct ResidueProbeRow {
    double s = 0;
    u64 N = 0;
    double product = 0;
    double target = 0;
    // Truncation uncertainty carried by the conditionally convergent G part,
    // estimated from the half-truncation difference (only an order bound is
    // available analytically).
    double tail_estimate = 0;
};

inline std::vector<ResidueProbeRow> residue_probe(std::span<const u64> a_vals,
                                                  std::span<const double> s_values, u64 N,
                                                  ProbeKind kind, unsigned workers = 1) {
    std::vector<ResidueProbeRow> rows;
    rows.reserve(s_values.size());
    const double res_f = static_cast<double>(1.0L / (2.0L * kSqrt3));
    for (double s : s_values) {
        if (!(s > 2.5)) throw ParameterError("residue_probe: s values must exceed 5/2");
        const double g_full = partial_G(a_vals, s, N, workers).value.real();
        const double g_half = partial_G(a_vals, s, std::max<u64>(N / 2, 1), workers).value.real();
        ResidueProbeRow row;
        row.s = s;
        row.N = N;
        row.product = (s - 2.5) * (g_full + zeta_real(s - 1.5, 1e-12) * res_f);
        row.target = res_f;
        row.tail_estimate = (s - 2.5) * std::abs(g_full - g_half);
        if (kind == ProbeKind::H) {
            const double zs = zeta_real(s, 1e-12);
            row.product *= zs;
            row.tail_estimate *= zs;
            row.target = zeta_real(2.5, 1e-12) * res_f;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Cesaro-weighted sum of b_n.  The exact numerator S = sum_{n<=x} b_n (x-n)
// is the quantity the x^{7/2} main term tracks; value = S/x is the
// (1 - n/x)-weighted form.  S is accumulated in u128 and stored exactly.
// ---------------------------------------------------------------------------

struct CesaroReport {
    u64 x = 0;
    Int exact_numerator;   // S = sum b_n (x - n)
    double value = 0;      // S / x
    double main_term = 0;  // 2 zeta(5/2) x^{7/2} / (35 sqrt 3)
    double residual = 0;   // S - main_term
    double ratio = 0;      // S / main_term
};

inline CesaroReport cesaro_B(u64 x, std::span<const u64> b_vals, unsigned workers = 1) {
    if (x < 1) throw ParameterError("cesaro_B: x must be >= 1");
    if (b_vals.size() <= x) throw ParameterError("cesaro_B: b-values span too short");
    struct Acc {
        u128 v = 0;
    };
    Acc S = parallel_block_reduce<Acc>(
        1, x + 1, workers, Acc{},
        [&](u64 lo, u64 hi) {
            Acc acc;
            for (u64 n = lo; n < hi; ++n)
                acc.v += static_cast<u128>(b_vals[static_cast<std::size_t>(n)]) * (x - n);
            return acc;
        },
        [](Acc l, Acc r) { return Acc{l.v + r.v}; });

    CesaroReport rep;
    rep.x = x;
    rep.exact_numerator = int_from_u128(S.v);
    const long double Sl = ld_from_u128(S.v);
    rep.value = static_cast<double>(Sl / static_cast<long double>(x));
    const long double main = 2.0L * zeta_real_ld(2.5L, 1e-13L) *
                             powl(static_cast<long double>(x), 3.5L) / (35.0L * kSqrt3);
    rep.main_term = static_cast<double>(main);
    rep.residual = static_cast<double>(Sl - main);
    rep.ratio = static_cast<double>(Sl / main);
    return rep;
}

inline CesaroReport cesaro_B(u64 x, u64 memory_budget_bytes = u64(2) << 30,
                             unsigned workers = 1) {
    auto b = b_sieve(x, memory_budget_bytes, {}, workers);
    return cesaro_B(x, b, workers);
}

// ---------------------------------------------------------------------------
// Character-twisted series F_chi(s) = sum a_n chi(n) n^-s.  The principal
// character inherits the pole at 5/2; nonprincipal partial sums stabilize
// for fixed s > 5/2.
// ---------------------------------------------------------------------------

inline PartialSeriesValue partial_F_chi(const DirichletCharacter& chi,
                                        std::span<const u64> a_vals, double s, u64 N,
                                        unsigned workers = 1) {
    if (N < 1) throw ParameterError("partial_F_chi: N must be >= 1");
    if (a_vals.size() <= N) throw ParameterError("partial_F_chi: a-values span too short");
    const auto table = chi.residue_table();
    const long double sl = static_cast<long double>(s);
    using C = std::complex<double>;
    C value = parallel_block_reduce<C>(
        1, N + 1, workers, C{0, 0},
        [&](u64 lo, u64 hi) {
            C acc{0, 0};
            for (u64 n = lo; n < hi; ++n) {
                const C w = table[static_cast<std::size_t>(n % chi.q)];
                if (w == C{0, 0}) continue;
                const double t = static_cast<double>(
                    static_cast<long double>(a_vals[static_cast<std::size_t>(n)]) *
                    powl(static_cast<long double>(n), -sl));
                acc += t * w;
            }
            return acc;
        },
        [](C l, C r) { return l + r; });
    PartialSeriesValue v;
    v.s = s;
    v.N = N;
    v.value = value;
    v.tail_note = detail::tail_note_for(s, 2.5, "absolutely");
    return v;
}

}  // namespace cannonball
