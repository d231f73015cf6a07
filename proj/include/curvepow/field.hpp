#pragma once

#include <optional>
#include <utility>

#include "curvepow/codec.hpp"
#include "curvepow/errors.hpp"

namespace curvepow::fp {

// Arithmetic in F_p for p < 2^63. Operands are expected reduced.

inline u64 add(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return s >= p ? s - p : s;
}

inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 neg(u64 a, u64 p) { return a ? p - a : 0; }

inline u64 mul(u64 a, u64 b, u64 p) {
    return static_cast<u64>(static_cast<u128>(a) * b % p);
}

inline u64 pow(u64 base, u64 exp, u64 p) {
    u64 r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mul(r, base, p);
        base = mul(base, base, p);
        exp >>= 1;
    }
    return r;
}

inline u64 inv(u64 a, u64 p) {
    if (a == 0) throw DivisionByZero();
    // extended Euclid; p prime so gcd is 1
    int64_t t = 0, new_t = 1;
    u64 r = p, new_r = a % p;
    while (new_r) {
        u64 q = r / new_r;
        int64_t tmp_t = t - static_cast<int64_t>(q) * new_t;
        t = new_t;
        new_t = tmp_t;
        u64 tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    return t < 0 ? static_cast<u64>(t + static_cast<int64_t>(p)) : static_cast<u64>(t);
}

inline bool is_quadratic_residue(u64 a, u64 p) {
    if (a == 0) return true;
    return pow(a, (p - 1) / 2, p) == 1; // Euler criterion
}

// Tonelli-Shanks. Returns the root pair {r, p-r} (equal halves collapse for
// a = 0), or nullopt for a non-residue.
inline std::optional<std::pair<u64, u64>> sqrt(u64 a, u64 p) {
    a %= p;
    if (a == 0) return std::make_pair(u64{0}, u64{0});
    if (!is_quadratic_residue(a, p)) return std::nullopt;
    u64 r;
    if (p % 4 == 3) {
        r = pow(a, (p + 1) / 4, p);
    } else {
        // write p-1 = q * 2^s, q odd
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) {
            q >>= 1;
            ++s;
        }
        u64 z = 2;
        while (is_quadratic_residue(z, p)) ++z;
        u64 m = s;
        u64 c = pow(z, q, p);
        u64 t = pow(a, q, p);
        r = pow(a, (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) {
                t2 = mul(t2, t2, p);
                ++i;
            }
            u64 b = c;
            for (u64 j = 0; j < m - i - 1; ++j) b = mul(b, b, p);
            m = i;
            c = mul(b, b, p);
            t = mul(t, c, p);
            r = mul(r, b, p);
        }
    }
    u64 other = p - r;
    return r <= other ? std::make_pair(r, other) : std::make_pair(other, r);
}

} // namespace curvepow::fp
