#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "curvepow/curve.hpp"

namespace curvepow {

enum class SolverMethod { naive, bsgs, rho, kangaroo };

inline const char* solver_name(SolverMethod m) {
    switch (m) {
        case SolverMethod::naive: return "naive";
        case SolverMethod::bsgs: return "bsgs";
        case SolverMethod::rho: return "rho";
        case SolverMethod::kangaroo: return "kangaroo";
    }
    return "?";
}

inline std::optional<SolverMethod> solver_from_name(const std::string& s) {
    if (s == "naive") return SolverMethod::naive;
    if (s == "bsgs") return SolverMethod::bsgs;
    if (s == "rho") return SolverMethod::rho;
    if (s == "kangaroo") return SolverMethod::kangaroo;
    return std::nullopt;
}

struct SolverStats {
    u64 group_ops = 0;
    double wall_time_s = 0.0;
    SolverMethod method = SolverMethod::naive;
};

// Q = N * P over a prime-order curve group of order n.
struct DlpInstance {
    Curve E;
    Point P;
    Point Q;
    u64 n = 0;

    void check() const {
        if (!E.on_curve(P) || !E.on_curve(Q)) throw InvalidPoint("point not on curve");
        if (P.inf) throw InvalidPoint("generator is the identity");
    }
};

namespace detail {

struct StopWatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

inline void self_verify(const DlpInstance& inst, u64 n) {
    if (!(ec::scalar_mul_unchecked(inst.E, n, inst.P) == inst.Q))
        throw InternalError("solver returned a wrong discrete log");
}

} // namespace detail

inline constexpr u64 kNaiveDlpGuard = u64{1} << 22;

inline std::pair<u64, SolverStats> solve_naive(const DlpInstance& inst) {
    inst.check();
    if (inst.n >= kNaiveDlpGuard) throw TooLarge("solve_naive guard");
    detail::StopWatch sw;
    SolverStats stats{0, 0, SolverMethod::naive};
    Point R = Point::infinity();
    for (u64 k = 0; k < inst.n; ++k) {
        if (R == inst.Q) {
            stats.group_ops = std::max<u64>(stats.group_ops, 1);
            stats.wall_time_s = sw.elapsed();
            detail::self_verify(inst, k);
            return {k, stats};
        }
        R = ec::add_unchecked(inst.E, R, inst.P);
        ++stats.group_ops;
    }
    throw InternalError("no discrete log found in a cyclic group");
}

inline std::pair<u64, SolverStats> solve_bsgs(const DlpInstance& inst) {
    inst.check();
    detail::StopWatch sw;
    SolverStats stats{0, 0, SolverMethod::bsgs};
    const u64 m = ceil_sqrt_u64(inst.n);
    if (m > (u64{1} << 27)) throw ResourceLimit("bsgs table too large");

    detail::PointTable baby;
    Point bp = Point::infinity();
    for (u64 j = 0; j < m; ++j) {
        if (bp == inst.Q) { // catches N < m without giant steps
            stats.wall_time_s = sw.elapsed();
            detail::self_verify(inst, j);
            return {j, stats};
        }
        baby.insert(bp, static_cast<u32>(j));
        bp = ec::add_unchecked(inst.E, bp, inst.P);
        ++stats.group_ops;
    }
    // giant steps: Q - i*(m*P)
    const Point giant = ec::neg(inst.E, ec::scalar_mul_unchecked(inst.E, m, inst.P));
    Point R = inst.Q;
    for (u64 i = 0; i <= m; ++i) {
        if (R.inf) { // the j = 0 baby entry is the identity, kept out of the table
            u64 candidate = (i * m) % inst.n;
            if (ec::scalar_mul_unchecked(inst.E, candidate, inst.P) == inst.Q) {
                stats.wall_time_s = sw.elapsed();
                detail::self_verify(inst, candidate);
                return {candidate, stats};
            }
        }
        if (auto j = baby.find(R)) {
            u64 candidate = (i * m + *j) % inst.n;
            if (ec::scalar_mul_unchecked(inst.E, candidate, inst.P) == inst.Q) {
                stats.wall_time_s = sw.elapsed();
                detail::self_verify(inst, candidate);
                return {candidate, stats};
            }
        }
        R = ec::add_unchecked(inst.E, R, giant);
        ++stats.group_ops;
    }
    throw InternalError("bsgs found no discrete log");
}

namespace detail {

// Teske-style mixed walk shared by rho and its parallel variant.
struct RhoWalk {
    static constexpr int kClasses = 32;
    static constexpr int kDoubleClasses = 4; // classes 28..31 double

    const DlpInstance* inst;
    Point steps[kClasses];
    u64 step_a[kClasses];
    u64 step_b[kClasses];

    RhoWalk(const DlpInstance& instance, u64 seed) : inst(&instance) {
        std::mt19937_64 rng(seed);
        for (int c = 0; c < kClasses - kDoubleClasses; ++c) {
            step_a[c] = rng() % inst->n;
            step_b[c] = rng() % inst->n;
            steps[c] = ec::add_unchecked(
                inst->E, ec::scalar_mul_unchecked(inst->E, step_a[c], inst->P),
                ec::scalar_mul_unchecked(inst->E, step_b[c], inst->Q));
        }
    }

    static int classify(const Point& X) {
        // identity is rare mid-walk; class 0 keeps it moving
        if (X.inf) return 0;
        return static_cast<int>((X.x * 0x9e3779b97f4a7c15ULL) >> 59);
    }

    // advance (X, a, b) one step; exponents tracked mod n
    void advance(Point& X, u64& a, u64& b) const {
        int c = classify(X);
        if (c >= kClasses - kDoubleClasses) {
            X = ec::dbl_unchecked(inst->E, X);
            a = fp::add(a, a, inst->n);
            b = fp::add(b, b, inst->n);
        } else {
            X = ec::add_unchecked(inst->E, X, steps[c]);
            a = fp::add(a, step_a[c], inst->n);
            b = fp::add(b, step_b[c], inst->n);
        }
    }
};

// a1*P + b1*Q = a2*P + b2*Q  =>  N = (a1-a2)/(b2-b1) mod n
inline std::optional<u64> collision_log(const DlpInstance& inst, u64 a1, u64 b1,
                                        u64 a2, u64 b2) {
    u64 db = fp::sub(b2, b1, inst.n);
    if (db == 0) return std::nullopt;
    u64 da = fp::sub(a1, a2, inst.n);
    u64 candidate = fp::mul(da, fp::inv(db, inst.n), inst.n);
    if (ec::scalar_mul_unchecked(inst.E, candidate, inst.P) == inst.Q)
        return candidate;
    return std::nullopt;
}

} // namespace detail

inline std::pair<u64, SolverStats> solve_rho(const DlpInstance& inst, u64 seed) {
    inst.check();
    if (inst.n < 5) return solve_naive(inst);
    detail::StopWatch sw;
    SolverStats stats{0, 0, SolverMethod::rho};
    for (u64 attempt = seed;; ++attempt) {
        detail::RhoWalk walk(inst, attempt);
        std::mt19937_64 rng(attempt ^ 0x726f68ULL);
        u64 a = rng() % inst.n, b = rng() % inst.n;
        Point X = ec::add_unchecked(
            inst.E, ec::scalar_mul_unchecked(inst.E, a, inst.P),
            ec::scalar_mul_unchecked(inst.E, b, inst.Q));
        // Brent cycle detection on the walk
        Point Y = X;
        u64 ya = a, yb = b;
        u64 power = 1, lam = 0;
        std::optional<u64> result;
        while (!result) {
            walk.advance(X, a, b);
            ++stats.group_ops;
            ++lam;
            if (X == Y) {
                result = detail::collision_log(inst, ya, yb, a, b);
                if (!result) break; // degenerate collision; fresh attempt
            }
            if (lam == power) {
                Y = X;
                ya = a;
                yb = b;
                power <<= 1;
                lam = 0;
            }
            if (stats.group_ops > 64 * inst.n) break; // stuck walk; reseed
        }
        if (result) {
            stats.wall_time_s = sw.elapsed();
            detail::self_verify(inst, *result);
            return {*result, stats};
        }
    }
}

// Tame/wild kangaroo over N in [lo, hi], distinguished points keyed on
// trailing zero bits of x.
inline std::pair<u64, SolverStats> solve_kangaroo(const DlpInstance& inst, u64 lo,
                                                  u64 hi, u64 seed) {
    inst.check();
    if (hi < lo || hi - lo < 16) throw TooLarge("kangaroo interval too small");
    if (hi >= inst.n) hi = inst.n - 1;
    detail::StopWatch sw;
    SolverStats stats{0, 0, SolverMethod::kangaroo};
    const u64 width = hi - lo;

    for (u64 attempt = seed;; ++attempt) {
        // jump table: powers of two with mean about sqrt(width)/2
        int njumps = 1;
        while (njumps < 32 &&
               ((u64{1} << njumps) - 1) / static_cast<u64>(njumps) <
                   isqrt_u64(width) / 2)
            ++njumps;
        std::mt19937_64 rng(attempt ^ 0x6b616e67ULL);
        std::vector<u64> jump(njumps);
        std::vector<Point> jump_pt(njumps);
        for (int j = 0; j < njumps; ++j) {
            jump[j] = (u64{1} << j) + (rng() % (j + 1));
            jump_pt[j] = ec::scalar_mul_unchecked(inst.E, jump[j] % inst.n, inst.P);
        }
        const int dist_bits =
            std::max(1, bit_length(isqrt_u64(width) ? isqrt_u64(width) : 1) - 7);
        const u64 dist_mask = (u64{1} << dist_bits) - 1;

        // tame starts at hi (position known), wild at Q (position N + offset)
        Point tame = ec::scalar_mul_unchecked(inst.E, hi % inst.n, inst.P);
        u64 tame_pos = hi % inst.n;
        Point wild = inst.Q;
        u64 wild_off = 0;

        struct Entry {
            u64 pos;
            bool tame;
        };
        std::unordered_map<u64, Entry> traps; // x-coordinate -> landing info
        const u64 cap = 64 * (isqrt_u64(width) + 16) + (u64{1} << 16);
        std::optional<u64> result;

        for (u64 step = 0; step < cap && !result; ++step) {
            for (int side = 0; side < 2 && !result; ++side) {
                Point& X = side ? wild : tame;
                u64& pos = side ? wild_off : tame_pos;
                if (!X.inf && (X.x & dist_mask) == 0) {
                    auto it = traps.find(X.x);
                    if (it == traps.end()) {
                        traps.emplace(X.x, Entry{pos, side == 0});
                    } else if (it->second.tame == (side != 0)) {
                        // tame: b + d_t = wild: N + d_w  (mod n)
                        u64 t_pos = side ? it->second.pos : pos;
                        u64 w_off = side ? pos : it->second.pos;
                        u64 candidate = fp::sub(t_pos, w_off, inst.n);
                        if (ec::scalar_mul_unchecked(inst.E, candidate, inst.P) ==
                            inst.Q)
                            result = candidate;
                    }
                }
                if (result) break;
                int j = X.inf ? 0
                              : static_cast<int>((X.x * 0xff51afd7ed558ccdULL) >>
                                                 (64 - bit_length(njumps - 1 ? njumps - 1 : 1))) %
                                    njumps;
                X = ec::add_unchecked(inst.E, X, jump_pt[j]);
                pos = fp::add(pos, jump[j] % inst.n, inst.n);
                ++stats.group_ops;
            }
        }
        if (result) {
            stats.wall_time_s = sw.elapsed();
            detail::self_verify(inst, *result);
            return {*result, stats};
        }
        if (attempt - seed >= 4)
            throw NotInInterval("no collision; N likely outside [lo, hi]");
    }
}

// Parallel rho with distinguished points and a shared collision table.
inline std::pair<u64, SolverStats> solve_parallel(const DlpInstance& inst,
                                                  unsigned workers, u64 seed) {
    inst.check();
    if (inst.n < 5) return solve_naive(inst);
    if (workers < 1) workers = 1;
    detail::StopWatch sw;
    const detail::RhoWalk walk(inst, seed);
    const int dist_bits = std::max(1, bit_length(isqrt_u64(inst.n)) - 7);
    const u64 dist_mask = (u64{1} << dist_bits) - 1;

    std::mutex table_mutex;
    std::unordered_map<u64, std::tuple<u64, u64, u64>> table; // x -> (y, a, b)
    std::atomic<u64> total_ops{0};
    std::atomic<bool> done{false};
    std::atomic<u64> answer{0};

    // the mixed walk can fall into short cycles holding no distinguished
    // point; a walk overdue for one is abandoned and restarted
    const u64 overdue = u64{40} << dist_bits;

    auto worker_fn = [&](unsigned id) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (id + 1)));
        u64 a = rng() % inst.n, b = rng() % inst.n;
        Point X = ec::add_unchecked(
            inst.E, ec::scalar_mul_unchecked(inst.E, a, inst.P),
            ec::scalar_mul_unchecked(inst.E, b, inst.Q));
        u64 ops = 0, since_dp = 0;
        while (!done.load(std::memory_order_relaxed)) {
            walk.advance(X, a, b);
            ++ops;
            if (++since_dp > overdue) {
                a = rng() % inst.n;
                b = rng() % inst.n;
                X = ec::add_unchecked(
                    inst.E, ec::scalar_mul_unchecked(inst.E, a, inst.P),
                    ec::scalar_mul_unchecked(inst.E, b, inst.Q));
                since_dp = 0;
                continue;
            }
            if (!X.inf && (X.x & dist_mask) == 0) {
                since_dp = 0;
                std::lock_guard<std::mutex> lock(table_mutex);
                auto it = table.find(X.x);
                if (it != table.end() && std::get<0>(it->second) == X.y) {
                    auto [y, a2, b2] = it->second;
                    if (auto n = detail::collision_log(inst, a, b, a2, b2)) {
                        answer.store(*n);
                        done.store(true);
                        break;
                    }
                    // same (a,b) walk duplicate: re-randomize
                    a = rng() % inst.n;
                    b = rng() % inst.n;
                    X = ec::add_unchecked(
                        inst.E, ec::scalar_mul_unchecked(inst.E, a, inst.P),
                        ec::scalar_mul_unchecked(inst.E, b, inst.Q));
                } else {
                    table[X.x] = {X.y, a, b};
                }
            }
            if ((ops & 0xfff) == 0 && done.load(std::memory_order_relaxed)) break;
        }
        total_ops.fetch_add(ops);
    };

    if (workers == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker_fn, i);
        for (auto& t : pool) t.join();
    }

    SolverStats stats{total_ops.load(), sw.elapsed(), SolverMethod::rho};
    u64 n = answer.load();
    detail::self_verify(inst, n);
    return {n, stats};
}

inline std::pair<u64, SolverStats> solve(const DlpInstance& inst, SolverMethod m,
                                         u64 seed = 1, unsigned workers = 1) {
    if (workers > 1 && (m == SolverMethod::rho || m == SolverMethod::naive))
        return solve_parallel(inst, workers, seed);
    switch (m) {
        case SolverMethod::naive: return solve_naive(inst);
        case SolverMethod::bsgs: return solve_bsgs(inst);
        case SolverMethod::rho: return solve_rho(inst, seed);
        case SolverMethod::kangaroo:
            return solve_kangaroo(inst, 0, inst.n - 1, seed);
    }
    throw InternalError("unknown solver method");
}

} // namespace curvepow
