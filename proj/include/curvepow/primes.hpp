#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "curvepow/field.hpp"

namespace curvepow {

// Deterministic Miller-Rabin, valid for all n < 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        u64 x = fp::pow(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = fp::mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline u64 next_prime(u64 n) {
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime(n)) {
        if (n > UINT64_MAX - 2) throw TooLarge("next_prime overflow");
        n += 2;
    }
    return n;
}

namespace detail {

inline u64 pollard_rho_factor(u64 n, u64 seed) {
    // Brent variant; n composite, odd, > 1.
    std::mt19937_64 rng(seed);
    while (true) {
        u64 c = rng() % (n - 1) + 1;
        u64 y = rng() % n;
        auto f = [&](u64 v) { return fp::add(fp::mul(v, v, n), c, n); };
        u64 g = 1, q = 1, x = 0, ys = 0, r = 1;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                u64 lim = std::min<u64>(128, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = fp::mul(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q ? q : n, n);
                k += lim;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = f(ys);
                u64 diff = x > ys ? x - ys : ys - x;
                g = std::gcd(diff ? diff : n, n);
            }
        }
        if (g != n) return g;
    }
}

} // namespace detail

// Full factorization as prime -> exponent.
inline std::map<u64, int> factorize(u64 n) {
    std::map<u64, int> out;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL, 41ULL, 43ULL, 47ULL}) {
        while (n % q == 0) {
            ++out[q];
            n /= q;
        }
    }
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    u64 seed = 0x5eedULL;
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (is_prime(m)) {
            ++out[m];
            continue;
        }
        u64 d = detail::pollard_rho_factor(m, seed++);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

// Number of nonzero digits in the non-adjacent form of n.
inline int naf_weight(u64 n) {
    u128 v = n;
    int w = 0;
    while (v) {
        if (v & 1) {
            ++w;
            if ((v & 3) == 1)
                v -= 1;
            else
                v += 1;
        }
        v >>= 1;
    }
    return w;
}

// ---- Exceptionality matchers (special-shape prime rejection) ----

struct CrandallWitness {
    int k;
    u64 c; // p = 2^k - c
};

struct MersenneLikeWitness {
    int naf_terms;
};

struct MontgomeryWitness {
    int alpha;
    int beta;
    u64 gamma; // p = 2^alpha * (2^beta - gamma) - 1
};

inline std::optional<CrandallWitness> is_crandall(u64 p) {
    int k = bit_length(p);
    u128 two_k = u128{1} << k;
    u64 c = static_cast<u64>(two_k - p);
    int bound_bits = (k + 3) / 4;
    if (c > 0 && (bound_bits >= 64 || c < (u64{1} << bound_bits)))
        return CrandallWitness{k, c};
    return std::nullopt;
}

inline std::optional<MersenneLikeWitness> is_mersenne_like(u64 p) {
    int w = naf_weight(p);
    if (w <= 4) return MersenneLikeWitness{w};
    return std::nullopt;
}

inline std::optional<MontgomeryWitness> is_montgomery_friendly(u64 p) {
    u128 m = u128{p} + 1;
    int alpha = 0;
    while ((m & 1) == 0) {
        m >>= 1;
        ++alpha;
    }
    if (alpha < 2) return std::nullopt;
    int beta = 0;
    for (u128 t = m; t; t >>= 1) ++beta;
    u64 gamma = static_cast<u64>((u128{1} << beta) - m);
    int bound_bits = (beta + 3) / 4;
    if (gamma > 0 && (bound_bits >= 64 || gamma < (u64{1} << bound_bits)))
        return MontgomeryWitness{alpha, beta, gamma};
    return std::nullopt;
}

struct ExceptionalityReport {
    std::optional<CrandallWitness> crandall;
    std::optional<MersenneLikeWitness> mersenne_like;
    std::optional<MontgomeryWitness> montgomery_friendly;

    bool acceptable() const {
        return !crandall && !mersenne_like && !montgomery_friendly;
    }
};

inline ExceptionalityReport exceptionality(u64 p) {
    return {is_crandall(p), is_mersenne_like(p), is_montgomery_friendly(p)};
}

} // namespace curvepow
