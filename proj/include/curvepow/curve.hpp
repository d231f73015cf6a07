#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "curvepow/field.hpp"
#include "curvepow/primes.hpp"

namespace curvepow {

// Affine point on a short Weierstrass curve, with an explicit identity.
struct Point {
    u64 x = 0;
    u64 y = 0;
    bool inf = true;

    static Point infinity() { return {}; }
    static Point affine(u64 x, u64 y) { return {x, y, false}; }

    bool operator==(const Point&) const = default;
};

// y^2 = x^3 + A x + B over F_p.
struct Curve {
    u64 p = 0;
    u64 A = 0;
    u64 B = 0;

    bool operator==(const Curve&) const = default;

    bool singular() const {
        // 4A^3 + 27B^2 == 0
        u64 a3 = fp::mul(fp::mul(A, A, p), A, p);
        u64 b2 = fp::mul(B, B, p);
        return fp::add(fp::mul(4 % p, a3, p), fp::mul(27 % p, b2, p), p) == 0;
    }

    u64 rhs(u64 x) const {
        u64 x2 = fp::mul(x, x, p);
        return fp::add(fp::add(fp::mul(x2, x, p), fp::mul(A, x, p), p), B, p);
    }

    bool on_curve(const Point& P) const {
        if (P.inf) return true;
        if (P.x >= p || P.y >= p) return false;
        return fp::mul(P.y, P.y, p) == rhs(P.x);
    }
};

namespace ec {

inline Point neg(const Curve& E, const Point& P) {
    if (P.inf) return P;
    return Point::affine(P.x, fp::neg(P.y, E.p));
}

// Chord-and-tangent addition; callers guarantee operands are on E.
inline Point add_unchecked(const Curve& E, const Point& P, const Point& Q) {
    const u64 p = E.p;
    if (P.inf) return Q;
    if (Q.inf) return P;
    u64 lambda;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0) return Point::infinity();
        // tangent: (3x^2 + A) / 2y
        u64 num = fp::add(fp::mul(3 % p, fp::mul(P.x, P.x, p), p), E.A, p);
        lambda = fp::mul(num, fp::inv(fp::add(P.y, P.y, p), p), p);
    } else {
        lambda = fp::mul(fp::sub(Q.y, P.y, p), fp::inv(fp::sub(Q.x, P.x, p), p), p);
    }
    u64 x3 = fp::sub(fp::sub(fp::mul(lambda, lambda, p), P.x, p), Q.x, p);
    u64 y3 = fp::sub(fp::mul(lambda, fp::sub(P.x, x3, p), p), P.y, p);
    return Point::affine(x3, y3);
}

inline Point add(const Curve& E, const Point& P, const Point& Q) {
    if (!E.on_curve(P) || !E.on_curve(Q)) throw InvalidPoint("point not on curve");
    return add_unchecked(E, P, Q);
}

inline Point dbl_unchecked(const Curve& E, const Point& P) {
    return add_unchecked(E, P, P);
}

inline Point scalar_mul_unchecked(const Curve& E, u64 n, Point P) {
    Point R = Point::infinity();
    while (n) {
        if (n & 1) R = add_unchecked(E, R, P);
        P = dbl_unchecked(E, P);
        n >>= 1;
    }
    return R;
}

inline Point scalar_mul(const Curve& E, u64 n, const Point& P) {
    if (!E.on_curve(P)) throw InvalidPoint("point not on curve");
    return scalar_mul_unchecked(E, n, P);
}

} // namespace ec

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline u64 ceil_sqrt_u64(u64 n) {
    u64 r = isqrt_u64(n);
    return static_cast<u128>(r) * r == n ? r : r + 1;
}

inline constexpr u64 kNaiveCountGuard = u64{1} << 22;

// Exact |E| by scanning every x-coordinate. Oracle-scale only.
inline u64 count_points_naive(const Curve& E) {
    if (E.p >= kNaiveCountGuard) throw TooLarge("count_points_naive guard");
    if (E.singular()) throw InvalidPoint("singular curve");
    const u64 p = E.p;
    std::vector<bool> qr(p, false);
    for (u64 y = 0; y <= p / 2; ++y) qr[fp::mul(y, y, p)] = true;
    u64 count = 1; // infinity
    for (u64 x = 0; x < p; ++x) {
        u64 r = E.rhs(x);
        if (r == 0)
            count += 1;
        else if (qr[r])
            count += 2;
    }
    return count;
}

namespace detail {

// Lookup table keyed by x-coordinate; full-point compare on probe.
struct PointTable {
    std::unordered_multimap<u64, std::pair<u64, u32>> map; // x -> (y, index)

    void insert(const Point& P, u32 idx) {
        if (!P.inf) map.emplace(P.x, std::make_pair(P.y, idx));
    }

    std::optional<u32> find(const Point& P) const {
        if (P.inf) return std::nullopt;
        auto [it, end] = map.equal_range(P.x);
        for (; it != end; ++it)
            if (it->second.first == P.y) return it->second.second;
        return std::nullopt;
    }
};

// All k in [lo, hi] with k*P = infinity, via baby-step giant-step.
inline std::vector<u64> annihilators_in_range(const Curve& E, const Point& P,
                                              u64 lo, u64 hi) {
    const u64 span = hi - lo + 1;
    const u64 m = ceil_sqrt_u64(span);
    PointTable baby;
    Point bp = Point::infinity();
    for (u32 j = 0; j < m; ++j) {
        baby.insert(bp, j); // j*P; infinity entries skipped (j=0 or ord|j)
        if (bp.inf && j > 0) break;
        bp = ec::add_unchecked(E, bp, P);
    }
    const Point big = ec::scalar_mul_unchecked(E, m, P);
    std::vector<u64> out;
    Point base = ec::scalar_mul_unchecked(E, lo, P);
    for (u64 b = 0; lo + b * m <= hi; ++b) {
        Point target = ec::neg(E, base); // want j*P = -(lo + b*m)*P
        if (target.inf) {
            u64 k = lo + b * m;
            if (k >= lo && k <= hi) out.push_back(k);
        }
        if (auto j = baby.find(target)) {
            u64 k = lo + b * m + *j;
            if (k <= hi && ec::scalar_mul_unchecked(E, k, P).inf) out.push_back(k);
        }
        base = ec::add_unchecked(E, base, big);
    }
    return out;
}

} // namespace detail

// Exact order of a single point: refine a known annihilator by factoring.
inline u64 point_order_from_multiple(const Curve& E, const Point& P, u64 k) {
    u64 ord = k;
    for (auto [q, e] : factorize(k)) {
        for (int i = 0; i < e; ++i) {
            if (ord % q == 0 && ec::scalar_mul_unchecked(E, ord / q, P).inf)
                ord /= q;
            else
                break;
        }
    }
    return ord;
}

// Exact group order via BSGS over the Hasse interval (Shanks-Mestre style):
// accumulate the lcm of sampled point orders until a unique multiple lies in
// [p+1-2*ceil(sqrt(p)), p+1+2*ceil(sqrt(p))].
inline u64 curve_order(const Curve& E, std::mt19937_64& rng) {
    if (E.singular()) throw InvalidPoint("singular curve");
    const u64 p = E.p;
    const u64 w = 2 * ceil_sqrt_u64(p);
    const u64 lo = p + 1 > w ? p + 1 - w : 1;
    const u64 hi = p + 1 + w;

    u64 L = 1;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // random point; the smaller root suffices (P and -P have equal order)
        Point P = Point::infinity();
        while (P.inf) {
            u64 x = rng() % p;
            if (auto roots = fp::sqrt(E.rhs(x), p))
                P = Point::affine(x, roots->first);
        }

        auto ks = detail::annihilators_in_range(E, P, lo, hi);
        if (ks.empty()) continue; // cannot happen for a true group element
        u64 ord = point_order_from_multiple(E, P, ks.front());
        L = std::lcm(L, ord);

        u64 first = ((lo + L - 1) / L) * L;
        if (first > hi) continue; // inconsistent; resample
        if (first + L > hi) return first;
    }
    if (p < kNaiveCountGuard) return count_points_naive(E);
    throw OrderAmbiguous("curve order ambiguous after retries");
}

// Trace t with |E| = p + 1 - t.
inline int64_t curve_trace(u64 p, u64 order) {
    return static_cast<int64_t>(p + 1) - static_cast<int64_t>(order);
}

// True iff x^3 + Ax + B has a root in F_p, i.e. E has a point of order 2
// (equivalently: even group order). Cheap pre-filter before order finding.
// Computed as gcd(x^p - x, f) != 1 via Frobenius on polynomials mod f.
inline bool cubic_has_root(const Curve& E) {
    const u64 p = E.p;
    // arithmetic on degree<3 polys modulo f = x^3 + Ax + B
    using Poly = std::array<u64, 3>;
    auto mulmod = [&](const Poly& a, const Poly& b) {
        u64 c[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                c[i + j] = fp::add(c[i + j], fp::mul(a[i], b[j], p), p);
        // reduce x^3 = -Ax - B, x^4 = -Ax^2 - Bx
        for (int d = 4; d >= 3; --d) {
            u64 coef = c[d];
            if (!coef) continue;
            c[d] = 0;
            c[d - 2] = fp::sub(c[d - 2], fp::mul(coef, E.A, p), p);
            c[d - 3] = fp::sub(c[d - 3], fp::mul(coef, E.B, p), p);
        }
        return Poly{c[0], c[1], c[2]};
    };
    // x^p mod f
    Poly result{1, 0, 0}, base{0, 1, 0};
    u64 e = p;
    while (e) {
        if (e & 1) result = mulmod(result, base);
        base = mulmod(base, base);
        e >>= 1;
    }
    // g = x^p - x; f has a root iff gcd(g, f) != 1. f is squarefree of
    // degree 3, so gcd != 1 iff g has a common root with f iff the gcd
    // computation over F_p[x] yields a nonconstant divisor. Run Euclid on
    // (f, g) with g of degree <= 2.
    u64 g0 = result[0], g1 = fp::sub(result[1], 1, p), g2 = result[2];
    if (g0 == 0 && g1 == 0 && g2 == 0) return true; // f divides x^p - x
    // f mod g, then Euclid on degree<=2 polynomials
    auto poly_mod = [&](std::vector<u64> num, std::vector<u64> den) {
        while (!den.empty() && den.back() == 0) den.pop_back();
        while (num.size() >= den.size() && !num.empty()) {
            while (!num.empty() && num.back() == 0) num.pop_back();
            if (num.size() < den.size()) break;
            u64 c = fp::mul(num.back(), fp::inv(den.back(), p), p);
            size_t shift = num.size() - den.size();
            for (size_t i = 0; i < den.size(); ++i)
                num[i + shift] = fp::sub(num[i + shift], fp::mul(c, den[i], p), p);
        }
        while (!num.empty() && num.back() == 0) num.pop_back();
        return num;
    };
    std::vector<u64> f{E.B, E.A, 0, 1};
    std::vector<u64> g{g0, g1, g2};
    while (!g.empty() && g.back() == 0) g.pop_back();
    std::vector<u64> r0 = f, r1 = g;
    while (!r1.empty()) {
        auto r2 = poly_mod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
    }
    return r0.size() > 1; // nonconstant gcd
}

} // namespace curvepow
