#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cannonball/ap.hpp"
#include "cannonball/exact.hpp"

namespace cannonball {

// Dirichlet characters mod q, built from an explicit presentation of
// (Z/qZ)* as a direct product of cyclic groups.  Characters are stored as
// exact rational angles on the generators; complex floats materialize only
// when a sum is evaluated, so orthogonality and periodicity checks stay
// exact at the rational level.

namespace detail {

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
    std::vector<std::pair<u64, unsigned>> f;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    std::sort(f.begin(), f.end());
    return f;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> ps;
    for (auto& [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

// Smallest positive primitive root modulo an odd prime p (trial search; q is
// desk scale).
inline u64 primitive_root_mod_p(u64 p) {
    const u64 phi = p - 1;
    const auto qs = prime_factors(phi);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 f : qs) {
            if (powmod_u64(g, phi / f, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw ParameterError("primitive_root_mod_p: no root found (p not an odd prime?)");
}

// Primitive root modulo p^e for odd p: a root g of p works mod p^e unless
// g^{p-1} = 1 (mod p^2), in which case g + p does.
inline u64 primitive_root_mod_pe(u64 p, unsigned e) {
    u64 g = primitive_root_mod_p(p);
    if (e == 1) return g;
    const u64 p2 = p * p;
    if (powmod_u64(g, p - 1, p2) == 1) g += p;
    return g;
}

inline u64 inv_mod(u64 a, u64 m) {
    // extended Euclid; m >= 1, gcd(a, m) = 1
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
    while (newr != 0) {
        long long quot = r / newr;
        t -= quot * newt; std::swap(t, newt);
        r -= quot * newr; std::swap(r, newr);
    }
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<u64>(t);
}

// x = r1 (mod m1), x = r2 (mod m2), gcd(m1, m2) = 1.
inline u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
    const u64 inv = inv_mod(m1 % m2, m2);
    const u64 diff = (r2 + m2 - r1 % m2) % m2;
    return r1 + m1 * mulmod_u64(diff, inv, m2);
}

}  // namespace detail

struct UnitGroupStructure {
    u64 modulus = 1;
    u64 phi = 1;
    struct Generator {
        u64 g;      // lifted generator mod q
        u64 order;  // d_i; prod d_i = phi(q)
    };
    std::vector<Generator> generators;
    // Flat discrete-log table: exponent vector of residue r at
    // dlog[r * generators.size() + i]; is_unit[r] marks gcd(r, q) = 1.
    std::vector<u64> dlog;
    std::vector<std::uint8_t> is_unit;

    std::span<const u64> exponents(u64 residue) const {
        return {dlog.data() + residue * generators.size(), generators.size()};
    }
};

inline std::shared_ptr<const UnitGroupStructure> unit_group_structure(u64 q) {
    if (q < 1) throw ParameterError("unit_group_structure: q must be >= 1");
    auto G = std::make_shared<UnitGroupStructure>();
    G->modulus = q;

    // Per prime-power factor (ascending prime order): odd p^e has a primitive
    // root; 2 and 4 are cyclic (trivial / generated by 3); 2^e with e >= 3 is
    // generated by -1 (order 2) and 5 (order 2^{e-2}).
    struct FactorGen { u64 g; u64 order; u64 m; };
    std::vector<FactorGen> raw;
    for (auto& [p, e] : detail::factorize(q)) {
        u64 m = 1;
        for (unsigned i = 0; i < e; ++i) m *= p;
        if (p == 2) {
            if (e == 1) continue;  // trivial
            if (e == 2) { raw.push_back({3, 2, m}); continue; }
            raw.push_back({m - 1, 2, m});
            raw.push_back({5, u64(1) << (e - 2), m});
        } else {
            u64 phi_m = m / p * (p - 1);
            raw.push_back({detail::primitive_root_mod_pe(p, e), phi_m, m});
        }
    }

    G->phi = 1;
    for (auto& fg : raw) {
        u64 lifted = q == fg.m ? fg.g % q
                               : detail::crt_pair(fg.g % fg.m, fg.m, 1 % (q / fg.m), q / fg.m);
        G->generators.push_back({lifted % q, fg.order});
        G->phi *= fg.order;
    }

    const std::size_t k = G->generators.size();
    G->dlog.assign(static_cast<std::size_t>(q) * k, 0);
    G->is_unit.assign(static_cast<std::size_t>(q), 0);

    // Enumerate the direct product; position index is the mixed-radix number
    // with the first generator most significant (lexicographic order).
    std::vector<u64> residues{1 % q};
    for (std::size_t i = 0; i < k; ++i) {
        const auto& gen = G->generators[i];
        std::vector<u64> next;
        next.reserve(residues.size() * gen.order);
        for (u64 r : residues) {
            u64 cur = r;
            for (u64 e = 0; e < gen.order; ++e) {
                next.push_back(cur);
                cur = detail::mulmod_u64(cur, gen.g, q);
            }
        }
        residues = std::move(next);
    }
    for (std::size_t idx = 0; idx < residues.size(); ++idx) {
        const u64 r = residues[idx];
        G->is_unit[r] = 1;
        std::size_t rem = idx;
        for (std::size_t i = k; i-- > 0;) {
            G->dlog[r * k + i] = rem % G->generators[i].order;
            rem /= G->generators[i].order;
        }
    }
    return G;
}

// ---------------------------------------------------------------------------
// Characters.
// ---------------------------------------------------------------------------

struct DirichletCharacter {
    u64 q = 1;
    // chi(g_i) = e(angle_num[i] / d_i); denominators are the generator orders.
    std::vector<u64> angle_num;
    bool principal = true;
    std::shared_ptr<const UnitGroupStructure> group;

    // Exact angle of chi(n) as a reduced rational in [0,1); nullopt when
    // gcd(n, q) > 1.
    std::optional<std::pair<u64, u64>> angle(u64 n) const {
        const u64 r = n % q;
        if (!group->is_unit[r]) return std::nullopt;
        u64 D = 1;
        for (const auto& g : group->generators) D = std::lcm(D, g.order);
        const auto exps = group->exponents(r);
        u64 num = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            const u64 order = group->generators[i].order;
            const u128 term = static_cast<u128>(exps[i] % order) * (D / order) % D * angle_num[i];
            num = static_cast<u64>((num + term % D) % D);
        }
        const u64 g = std::gcd(num, D);
        return std::make_pair(num / (g ? g : 1), D / (g ? g : 1));
    }

    std::complex<double> operator()(u64 n) const {
        auto an = angle(n);
        if (!an) return {0.0, 0.0};
        const long double theta = kTwoPi * static_cast<long double>(an->first) /
                                  static_cast<long double>(an->second);
        return {static_cast<double>(cosl(theta)), static_cast<double>(sinl(theta))};
    }

    // "q:t1/d1,t2/d2,..." with unreduced generator-order denominators.
    std::string id() const {
        std::string s = std::to_string(q) + ":";
        for (std::size_t i = 0; i < angle_num.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(angle_num[i]) + "/" + std::to_string(group->generators[i].order);
        }
        return s;
    }

    // chi values for every residue class, for table-driven sums.
    std::vector<std::complex<double>> residue_table() const {
        std::vector<std::complex<double>> t(static_cast<std::size_t>(q));
        for (u64 r = 0; r < q; ++r) t[static_cast<std::size_t>(r)] = (*this)(r);
        return t;
    }
};

inline std::complex<double> eval_char(const DirichletCharacter& chi, u64 n) { return chi(n); }

// All phi(q) characters, lexicographic in the angle tuple; the first is chi_0.
inline std::vector<DirichletCharacter> characters(u64 q) {
    auto G = unit_group_structure(q);
    const std::size_t k = G->generators.size();
    std::vector<DirichletCharacter> out;
    out.reserve(static_cast<std::size_t>(G->phi));
    std::vector<u64> tuple(k, 0);
    for (;;) {
        DirichletCharacter chi;
        chi.q = q;
        chi.angle_num = tuple;
        chi.group = G;
        chi.principal = std::all_of(tuple.begin(), tuple.end(), [](u64 v) { return v == 0; });
        out.push_back(std::move(chi));
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (++tuple[i] < G->generators[i].order) break;
            tuple[i] = 0;
            if (i == 0) return out;
        }
        if (k == 0) return out;
    }
}

// sum_{b mod q} chi(b): phi(q) for the principal character, 0 otherwise.
inline std::vector<std::complex<double>> character_residue_sum(u64 q) {
    std::vector<std::complex<double>> sums;
    for (const auto& chi : characters(q)) {
        std::complex<double> s = 0;
        for (u64 r = 0; r < q; ++r) s += chi(r);
        sums.push_back(s);
    }
    return sums;
}

// ---------------------------------------------------------------------------
// Twisted sums S_chi(x) = sum_{n<=x} a_n chi(n).
// ---------------------------------------------------------------------------

struct TwistedSumReport {
    std::string character_id;
    u64 q = 1;
    u64 char_index = 0;
    u64 x = 0;
    std::complex<double> value{0, 0};
    double main_term = 0;  // phi(q) x^{5/2} / (5 q sqrt 3), zero off-principal
    double residual_abs = 0;
};

inline TwistedSumReport twisted_sum(const DirichletCharacter& chi, std::span<const u64> a_vals,
                                    u64 x, unsigned workers = 1) {
    if (x < 1) throw ParameterError("twisted_sum: x must be >= 1");
    if (a_vals.size() <= x) throw ParameterError("twisted_sum: a-values span too short");
    const auto table = chi.residue_table();
    using C = std::complex<double>;
    C value = parallel_block_reduce<C>(
        1, x + 1, workers, C{0, 0},
        [&](u64 lo, u64 hi) {
            C acc{0, 0};
            for (u64 n = lo; n < hi; ++n) {
                const C w = table[static_cast<std::size_t>(n % chi.q)];
                if (w == C{0, 0}) continue;
                acc += static_cast<double>(a_vals[static_cast<std::size_t>(n)]) * w;
            }
            return acc;
        },
        [](C l, C r) { return l + r; });

    TwistedSumReport rep;
    rep.character_id = chi.id();
    rep.q = chi.q;
    rep.x = x;
    rep.value = value;
    rep.main_term = chi.principal
                        ? static_cast<double>(static_cast<long double>(chi.group->phi) *
                                              powl(static_cast<long double>(x), 2.5L) /
                                              (5.0L * static_cast<long double>(chi.q) * kSqrt3))
                        : 0.0;
    rep.residual_abs = std::abs(value - C{rep.main_term, 0.0});
    return rep;
}

// Orthogonality inversion: (1/phi(q)) sum_chi conj(chi(b)) S_chi(x) recovers
// the coprime AP sum  sum_{n<=x, n=b (q), gcd(n,q)=1} a_n.
inline std::complex<double> ap_reconstruct(u64 b, u64 q, u64 x, std::span<const u64> a_vals,
                                           unsigned workers = 1) {
    if (q < 1) throw ParameterError("ap_reconstruct: q must be >= 1");
    if (std::gcd(b, q) != 1) throw ParameterError("ap_reconstruct: gcd(b, q) must be 1");
    const auto chars = characters(q);
    std::complex<double> total{0, 0};
    for (const auto& chi : chars) {
        const auto rep = twisted_sum(chi, a_vals, x, workers);
        total += std::conj(chi(b)) * rep.value;
    }
    return total / static_cast<double>(chars.front().group->phi);
}

}  // namespace cannonball
