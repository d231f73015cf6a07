#include <catch_amalgamated.hpp>

#include "curvepow/dlp.hpp"
#include "curvepow/paramgen.hpp"

using namespace curvepow;

namespace {

// a fresh prime-order instance with a known answer
DlpInstance make_instance(const EpochParams& ep, u64 N) {
    Point Q = ec::scalar_mul(ep.curve, N, ep.base);
    return {ep.curve, ep.base, Q, ep.order};
}

const EpochParams& small_params() { // |E| about 2^16
    static EpochParams ep = epoch_params(8, zero_digest(), kDeskCmThreshold);
    return ep;
}

const EpochParams& mid_params() { // |E| about 2^20
    static EpochParams ep = epoch_params(10, zero_digest(), kDeskCmThreshold);
    return ep;
}

} // namespace

TEST_CASE("trivial discrete logs") {
    const EpochParams& ep = small_params();
    for (SolverMethod m : {SolverMethod::naive, SolverMethod::bsgs,
                           SolverMethod::rho, SolverMethod::kangaroo}) {
        CAPTURE(solver_name(m));
        CHECK(solve(make_instance(ep, 0), m, 7).first == 0);
        CHECK(solve(make_instance(ep, 1), m, 7).first == 1);
        CHECK(solve(make_instance(ep, ep.order - 1), m, 7).first ==
              ep.order - 1);
    }
}

TEST_CASE("solvers reject malformed instances") {
    const EpochParams& ep = small_params();
    DlpInstance bad{ep.curve, ep.base, Point::affine(1, 1), ep.order};
    if (!ep.curve.on_curve(Point::affine(1, 1)))
        CHECK_THROWS_AS(solve_bsgs(bad), InvalidPoint);
    DlpInstance id{ep.curve, Point::infinity(), ep.base, ep.order};
    CHECK_THROWS_AS(solve_rho(id, 1), InvalidPoint);
}

TEST_CASE("all solvers agree with naive enumeration") {
    const EpochParams& ep = small_params();
    std::mt19937_64 rng(404);
    for (int i = 0; i < 25; ++i) {
        u64 N = rng() % ep.order;
        DlpInstance inst = make_instance(ep, N);
        u64 oracle = solve_naive(inst).first;
        REQUIRE(oracle == N);
        CHECK(solve_bsgs(inst).first == N);
        CHECK(solve_rho(inst, rng()).first == N);
        CHECK(solve_kangaroo(inst, 0, ep.order - 1, rng()).first == N);
    }
}

TEST_CASE("bsgs stays within the deterministic operation bound") {
    const EpochParams& ep = mid_params();
    std::mt19937_64 rng(99);
    u64 bound = 2 * ceil_sqrt_u64(ep.order) + 4;
    for (int i = 0; i < 50; ++i) {
        auto [N, stats] = solve_bsgs(make_instance(ep, rng() % ep.order));
        (void)N;
        CHECK(stats.group_ops <= bound);
    }
}

TEST_CASE("rho mean cost tracks sqrt of the group order") {
    const EpochParams& ep = mid_params();
    std::mt19937_64 rng(1234);
    double total = 0;
    const int trials = 60;
    for (int i = 0; i < trials; ++i) {
        auto [N, stats] = solve_rho(make_instance(ep, rng() % ep.order), rng());
        (void)N;
        total += static_cast<double>(stats.group_ops);
    }
    double mean = total / trials;
    double expected = 1.2533 * std::sqrt(static_cast<double>(ep.order));
    // generous band: the walk is only an approximation of a random map
    CHECK(mean > 0.4 * expected);
    CHECK(mean < 3.0 * expected);
}

TEST_CASE("kangaroo exploits interval knowledge") {
    const EpochParams& ep = mid_params();
    std::mt19937_64 rng(55);
    for (int i = 0; i < 10; ++i) {
        u64 lo = rng() % (ep.order / 2);
        u64 width = 1 << 12;
        u64 N = lo + rng() % width;
        DlpInstance inst = make_instance(ep, N);
        auto [found, stats] = solve_kangaroo(inst, lo, lo + width, rng());
        CHECK(found == N);
        // resource ceiling: at most five attempts within the per-attempt cap
        u64 cap = 64 * (isqrt_u64(width) + 16) + (u64{1} << 16);
        CHECK(stats.group_ops <= 5 * 2 * cap);
    }
}

TEST_CASE("kangaroo reports when N is outside the interval") {
    // a group large enough that crossing it exceeds the per-attempt budget
    static EpochParams ep = epoch_params(14, zero_digest(), kDeskCmThreshold);
    // N half a group away from the interval pinned to the bottom
    DlpInstance inst = make_instance(ep, ep.order / 2);
    CHECK_THROWS_AS(solve_kangaroo(inst, 0, 1 << 10, 3), NotInInterval);
}

TEST_CASE("parallel solver is correct for every worker count") {
    const EpochParams& ep = mid_params();
    std::mt19937_64 rng(777);
    for (int i = 0; i < 5; ++i) {
        u64 N = rng() % ep.order;
        DlpInstance inst = make_instance(ep, N);
        for (unsigned workers : {1u, 2u, 4u, 8u}) {
            auto [found, stats] = solve_parallel(inst, workers, rng());
            CHECK(found == N);
            CHECK(stats.group_ops > 0);
        }
    }
}

TEST_CASE("solver name round trip") {
    for (SolverMethod m : {SolverMethod::naive, SolverMethod::bsgs,
                           SolverMethod::rho, SolverMethod::kangaroo})
        CHECK(solver_from_name(solver_name(m)) == m);
    CHECK_FALSE(solver_from_name("pohlig"));
}

TEST_CASE("dispatcher routes multi-worker rho to the parallel solver") {
    const EpochParams& ep = small_params();
    DlpInstance inst = make_instance(ep, 12345 % ep.order);
    auto [n1, s1] = solve(inst, SolverMethod::rho, 5, 4);
    auto [n2, s2] = solve(inst, SolverMethod::bsgs, 5, 4);
    CHECK(n1 == n2);
    (void)s1;
    (void)s2;
}
