#pragma once

#include <cstdlib>
#include <tuple>

#include "curvepow/curve.hpp"
#include "curvepow/primes.hpp"

namespace curvepow {

inline constexpr int kMinDifficulty = 4;
inline constexpr int kMaxDifficulty = 31; // keeps |E| and scalars inside u64
inline constexpr u64 kGenerationCap = 1000000;
inline constexpr u64 kDefaultCmThreshold = u64{1} << 40; // Brainpool-style bound
inline constexpr u64 kDeskCmThreshold = u64{1} << 10;

struct SecurityReport {
    u64 order = 0;
    int64_t trace = 0;
    bool order_prime = false;
    bool anomalous = false;                 // order == p
    std::optional<int> embedding_degree;    // smallest B <= 20, if any
    std::optional<int64_t> cm_discriminant; // absent when factoring was cut off

    bool acceptable(u64 cm_threshold) const {
        return order_prime && !anomalous && !embedding_degree &&
               cm_discriminant &&
               static_cast<u64>(std::abs(*cm_discriminant)) > cm_threshold;
    }
};

struct EpochParams {
    int d = 0;
    u64 p = 0;
    Curve curve;
    u64 order = 0;
    int64_t trace = 0;
    Point base; // P, affine, y < p/2
    Digest provenance{};
    SecurityReport security;
    ExceptionalityReport exceptionality;
    u64 p_iterations = 0;
    u64 e_iterations = 0;

    size_t field_width() const { return (bit_length(p) + 7) / 8; }
};

inline void check_difficulty(int d) {
    if (d < kMinDifficulty || d > kMaxDifficulty)
        throw TooLarge("difficulty parameter out of range");
}

// Smallest prime of exactly 2d bits grown from successive rehashes of h.
inline std::pair<u64, u64> p_gen(int d, Digest h) {
    check_difficulty(d);
    const int bits = 2 * d;
    const u64 top = u64{1} << (bits - 1);
    for (u64 iter = 1; iter <= kGenerationCap; ++iter) {
        h = sha3_512(h);
        u64 candidate = U512::from_digest(h).low_bits(bits) | top;
        u64 p = next_prime(candidate);
        if (bit_length(p) != bits) continue; // next_prime crossed 2^2d
        if (exceptionality(p).acceptable()) return {p, iter};
    }
    throw GenerationExhausted("p_gen cap reached");
}

// Smallest B <= bmax with p^B = 1 (mod n), i.e. n | p^B - 1.
inline std::optional<int> embedding_degree_leq(u64 n, u64 p, int bmax = 20) {
    u64 acc = 1 % n;
    for (int b = 1; b <= bmax; ++b) {
        acc = fp::mul(acc, p % n, n);
        if (acc == 1) return b;
    }
    return std::nullopt;
}

// CM field discriminant from the squarefree part of t^2 - 4p (< 0).
inline int64_t cm_discriminant(int64_t t, u64 p) {
    u128 t2 = static_cast<u128>(t < 0 ? -t : t);
    u128 mag128 = u128{4} * p - t2 * t2; // 4p - t^2 > 0 by Hasse
    if (mag128 >> 64) throw TooLarge("cm discriminant exceeds 64 bits");
    u64 mag = static_cast<u64>(mag128);
    u64 sf = 1;
    for (auto [q, e] : factorize(mag))
        if (e & 1) sf *= q;
    int64_t delta = -static_cast<int64_t>(sf);
    // nonnegative remainder convention: delta mod 4
    int64_t rem = ((delta % 4) + 4) % 4;
    return rem == 1 ? delta : 4 * delta;
}

inline SecurityReport security_report(const Curve& E, u64 order) {
    SecurityReport r;
    r.order = order;
    r.trace = curve_trace(E.p, order);
    r.order_prime = is_prime(order);
    r.anomalous = order == E.p;
    if (r.order_prime && !r.anomalous)
        r.embedding_degree = embedding_degree_leq(order, E.p);
    try {
        r.cm_discriminant = cm_discriminant(r.trace, E.p);
    } catch (const TooLarge&) {
        r.cm_discriminant = std::nullopt;
    }
    return r;
}

// E_Gen: curves from successive hashes of h + i, first one passing the
// security properties wins.
inline std::tuple<Curve, SecurityReport, u64> e_gen(u64 p, const Digest& h,
                                                    u64 cm_threshold) {
    const U512 h_int = U512::from_digest(h);
    for (u64 i = 1; i <= kGenerationCap; ++i) {
        Digest a_digest = sha3_512(U512(h_int).add(i).to_digest());
        Digest b_digest = sha3_512(a_digest); // hash of the full A digest
        Curve E{p, digest_mod(a_digest, p), digest_mod(b_digest, p)};
        if (E.singular()) continue;
        if (cubic_has_root(E)) continue; // even order, |E| cannot be prime
        std::mt19937_64 rng(U512::from_digest(b_digest).limbs[0] ^ p);
        u64 order;
        try {
            order = curve_order(E, rng);
        } catch (const OrderAmbiguous&) {
            continue; // candidate curves are disposable
        }
        SecurityReport report = security_report(E, order);
        if (report.acceptable(cm_threshold)) return {E, report, i};
    }
    throw GenerationExhausted("e_gen cap reached");
}

// P_Gen: first x at or after h with a point on E; returns the root below p/2.
inline Point p_point_gen(u64 x_start, const Curve& E) {
    const u64 p = E.p;
    u64 x = x_start % p;
    for (u64 i = 0; i < p; ++i) {
        if (auto roots = fp::sqrt(E.rhs(x), p))
            return Point::affine(x, roots->first); // first root is < p/2
        x = x + 1 == p ? 0 : x + 1;
    }
    throw InternalError("no affine point found"); // unreachable for |E| > 1
}

inline Point p_point_gen(const Digest& h, const Curve& E) {
    return p_point_gen(digest_mod(h, E.p), E);
}

// Seed digest for the epoch base point: H(p || A || B) at field width.
inline Digest base_point_seed(const Curve& E) {
    size_t w = (bit_length(E.p) + 7) / 8;
    Bytes buf;
    append_bytes(buf, int_to_bytes_fixed(E.p, w));
    append_bytes(buf, int_to_bytes_fixed(E.A, w));
    append_bytes(buf, int_to_bytes_fixed(E.B, w));
    return sha3_512(buf);
}

// Full deterministic epoch parameter derivation from chain state.
inline EpochParams epoch_params(int d, const Digest& h_prev, u64 cm_threshold) {
    EpochParams ep;
    ep.d = d;
    ep.provenance = h_prev;
    std::tie(ep.p, ep.p_iterations) = p_gen(d, h_prev);
    ep.exceptionality = exceptionality(ep.p);
    std::tie(ep.curve, ep.security, ep.e_iterations) =
        e_gen(ep.p, h_prev, cm_threshold);
    ep.order = ep.security.order;
    ep.trace = ep.security.trace;
    ep.base = p_point_gen(base_point_seed(ep.curve), ep.curve);
    return ep;
}

} // namespace curvepow
