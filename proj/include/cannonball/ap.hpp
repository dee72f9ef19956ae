#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cannonball/exact.hpp"

namespace cannonball {

// Sums and averages of a_n over [1, x] and over arithmetic progressions.
// Convention (matters!): A(b,q,x) divides by x, not by the count of indices
// in the progression, so the AP main term is x^{3/2}/(5q sqrt 3) -- a factor
// ~q below the "average over the progression" convention.

struct APQuery {
    u64 b;  // residue, normalized to [0, q)
    u64 q;
    u64 x;

    APQuery(u64 residue, u64 modulus, u64 cutoff) : b(0), q(modulus), x(cutoff) {
        if (modulus < 1) throw ParameterError("APQuery: q must be >= 1");
        if (cutoff < 1) throw ParameterError("APQuery: x must be >= 1");
        b = residue % modulus;
    }
};

struct AverageReport {
    u64 x = 0;
    u64 q = 1;
    u64 b = 0;
    Int raw_sum;         // exact M(x) or M(b,q,x)
    double average = 0;  // raw_sum / x
    double main_term = 0;
    double residual = 0;  // average - main_term
    u64 count = 0;        // indices actually summed
};

namespace detail {

// Exact range sum of a_n with u128 block partials merged into an Int.
inline Int sum_span_exact(std::span<const u64> a_vals, u64 lo, u64 hi, unsigned workers) {
    struct Acc {
        u128 v = 0;
    };
    Acc total = parallel_block_reduce<Acc>(
        lo, hi + 1, workers, Acc{},
        [&](u64 blo, u64 bhi) {
            Acc acc;
            for (u64 n = blo; n < bhi; ++n) acc.v += a_vals[static_cast<std::size_t>(n)];
            return acc;
        },
        [](Acc l, Acc r) { return Acc{l.v + r.v}; });
    return int_from_u128(total.v);
}

}  // namespace detail

inline Int sum_a(std::span<const u64> a_vals, u64 x, unsigned workers = 1) {
    if (x < 1) throw ParameterError("sum_a: x must be >= 1");
    if (a_vals.size() <= x) throw ParameterError("sum_a: a-values span too short");
    return detail::sum_span_exact(a_vals, 1, x, workers);
}

inline Int sum_a(u64 x, unsigned workers = 1) {
    auto vals = a_values(x, workers);
    return sum_a(vals, x, workers);
}

inline Int sum_a_ap(std::span<const u64> a_vals, const APQuery& query, unsigned workers = 1) {
    if (a_vals.size() <= query.x) throw ParameterError("sum_a_ap: a-values span too short");
    const u64 first = query.b == 0 ? query.q : query.b;  // smallest n >= 1 in the class
    if (first > query.x) return Int(0);
    struct Acc {
        u128 v = 0;
    };
    const u64 count = (query.x - first) / query.q + 1;
    Acc total = parallel_block_reduce<Acc>(
        0, count, workers, Acc{},
        [&](u64 blo, u64 bhi) {
            Acc acc;
            for (u64 i = blo; i < bhi; ++i)
                acc.v += a_vals[static_cast<std::size_t>(first + i * query.q)];
            return acc;
        },
        [](Acc l, Acc r) { return Acc{l.v + r.v}; });
    return int_from_u128(total.v);
}

inline u64 ap_index_count(const APQuery& query) {
    const u64 first = query.b == 0 ? query.q : query.b;
    return first > query.x ? 0 : (query.x - first) / query.q + 1;
}

inline double ap_main_term(u64 x, u64 q) {
    return static_cast<double>(powl(static_cast<long double>(x), 1.5L) /
                               (5.0L * static_cast<long double>(q) * kSqrt3));
}

inline AverageReport average_a(std::span<const u64> a_vals, u64 x, unsigned workers = 1) {
    AverageReport rep;
    rep.x = x;
    rep.raw_sum = sum_a(a_vals, x, workers);
    rep.count = x;
    rep.average = static_cast<double>(ld_from_int(rep.raw_sum) / static_cast<long double>(x));
    rep.main_term = ap_main_term(x, 1);
    rep.residual = rep.average - rep.main_term;
    return rep;
}

inline AverageReport average_a(u64 x, unsigned workers = 1) {
    auto vals = a_values(x, workers);
    return average_a(vals, x, workers);
}

inline AverageReport average_a_ap(std::span<const u64> a_vals, const APQuery& query,
                                  unsigned workers = 1) {
    AverageReport rep;
    rep.x = query.x;
    rep.q = query.q;
    rep.b = query.b;
    rep.raw_sum = sum_a_ap(a_vals, query, workers);
    rep.count = ap_index_count(query);
    rep.average =
        static_cast<double>(ld_from_int(rep.raw_sum) / static_cast<long double>(query.x));
    rep.main_term = ap_main_term(query.x, query.q);
    rep.residual = rep.average - rep.main_term;
    return rep;
}

struct PartitionReport {
    bool exact_match = false;
    Int full_sum;
    Int residue_total;
    std::vector<Int> per_residue;  // index b in [0, q)
};

// Exact consequence of the AP definition: the residue classes partition [1,x].
inline PartitionReport partition_check(std::span<const u64> a_vals, u64 q, u64 x,
                                       unsigned workers = 1) {
    if (q < 1) throw ParameterError("partition_check: q must be >= 1");
    PartitionReport rep;
    rep.full_sum = sum_a(a_vals, x, workers);
    rep.per_residue.reserve(static_cast<std::size_t>(q));
    rep.residue_total = 0;
    for (u64 b = 0; b < q; ++b) {
        rep.per_residue.push_back(sum_a_ap(a_vals, APQuery(b, q, x), workers));
        rep.residue_total += rep.per_residue.back();
    }
    rep.exact_match = (rep.residue_total == rep.full_sum);
    return rep;
}

// |M(b,q,x) - x^{5/2}/(5q sqrt 3)| per x, for downstream exponent fitting.
inline std::vector<std::pair<u64, double>> residual_table(std::span<const u64> a_vals,
                                                          std::span<const u64> x_values,
                                                          u64 b, u64 q, unsigned workers = 1) {
    std::vector<std::pair<u64, double>> out;
    out.reserve(x_values.size());
    u64 prev = 0;
    for (u64 x : x_values) {
        if (x <= prev) throw ParameterError("residual_table: x values must be increasing");
        prev = x;
        Int M = sum_a_ap(a_vals, APQuery(b, q, x), workers);
        const long double main = powl(static_cast<long double>(x), 2.5L) /
                                 (5.0L * static_cast<long double>(q) * kSqrt3);
        out.emplace_back(x, static_cast<double>(fabsl(ld_from_int(M) - main)));
    }
    return out;
}

}  // namespace cannonball
