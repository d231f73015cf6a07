#include <catch_amalgamated.hpp>

#include "curvepow/primes.hpp"

using namespace curvepow;

namespace {

// sieve oracle
std::vector<bool> sieve(u64 n) {
    std::vector<bool> s(n + 1, true);
    s[0] = s[1] = false;
    for (u64 i = 2; i * i <= n; ++i)
        if (s[i])
            for (u64 j = i * i; j <= n; j += i) s[j] = false;
    return s;
}

} // namespace

TEST_CASE("is_prime matches a sieve up to 100000") {
    auto s = sieve(100000);
    for (u64 n = 0; n <= 100000; ++n) CHECK(is_prime(n) == s[n]);
}

TEST_CASE("is_prime on large known values") {
    CHECK(is_prime((u64{1} << 61) - 1)); // Mersenne prime M61
    CHECK_FALSE(is_prime((u64{1} << 62) - 1)); // divisible by 3
    CHECK(is_prime(18446744073709551557ULL)); // largest u64 prime
    CHECK_FALSE(is_prime(3215031751ULL)); // strong pseudoprime to 2,3,5,7
}

TEST_CASE("next_prime") {
    CHECK(next_prime(7) == 7);
    CHECK(next_prime(8) == 11);
    CHECK(next_prime(14) == 17);
    CHECK(next_prime(1021) == 1021);
    CHECK(next_prime(1022) == 1031);
    CHECK(next_prime(0) == 2);
}

TEST_CASE("factorize recombines and yields primes") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        u64 n = rng() % (u64{1} << 40) + 2;
        u64 prod = 1;
        for (auto [q, e] : factorize(n)) {
            CHECK(is_prime(q));
            for (int j = 0; j < e; ++j) prod *= q;
        }
        CHECK(prod == n);
    }
    auto f = factorize(2 * 2 * 3 * 7 * 7 * 7);
    CHECK(f == std::map<u64, int>{{2, 2}, {3, 1}, {7, 3}});
}

TEST_CASE("naf weight") {
    CHECK(naf_weight(0) == 0);
    CHECK(naf_weight(1) == 1);
    CHECK(naf_weight(7) == 2);    // 8 - 1
    CHECK(naf_weight(8191) == 2); // 2^13 - 1
    CHECK(naf_weight(0b101010101) == 5);

    // oracle: minimal signed-binary weight by dynamic programming
    auto min_weight = [](u64 n) {
        // weight(n) for n odd: 1 + min(weight((n-1)/2-ish paths)); brute force
        std::map<u64, int> memo;
        auto rec = [&](auto&& self, u64 v) -> int {
            if (v == 0) return 0;
            if (v == 1) return 1;
            auto it = memo.find(v);
            if (it != memo.end()) return it->second;
            int r;
            if ((v & 1) == 0)
                r = self(self, v >> 1);
            else
                r = 1 + std::min(self(self, (v - 1) >> 1),
                                 self(self, (v >> 1) + 1));
            memo[v] = r;
            return r;
        };
        return rec(rec, n);
    };
    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        u64 n = rng() % (u64{1} << 20);
        CHECK(naf_weight(n) == min_weight(n));
    }
}

TEST_CASE("crandall matcher") {
    // 8191 = 2^13 - 1: c = 1 < 2^ceil(13/4) = 16
    auto w = is_crandall(8191);
    REQUIRE(w);
    CHECK(w->k == 13);
    CHECK(w->c == 1);

    // 2^16 - 17 is not prime-shaped input we care about structurally, but
    // c = 17 >= 2^4 = 16 for k = 16, so no match
    CHECK_FALSE(is_crandall((u64{1} << 16) - 17));

    // c = 15 < 16 matches
    auto w2 = is_crandall((u64{1} << 16) - 15);
    REQUIRE(w2);
    CHECK(w2->c == 15);

    // secp256k1-style shape scaled down: 2^32 - 977, bound 2^8 = 256, no
    CHECK_FALSE(is_crandall((u64{1} << 32) - 977));
    // 2^32 - 209: 209 < 256, yes
    CHECK(is_crandall((u64{1} << 32) - 209).has_value());
}

TEST_CASE("mersenne-like matcher") {
    CHECK(is_mersenne_like(8191).has_value());   // weight 2
    CHECK(is_mersenne_like(65537).has_value());  // 2^16 + 1, weight 2
    CHECK(is_mersenne_like((u64{1} << 31) - 1).has_value());
    // weight 5 value: alternating bits
    u64 v = 0b10101010101010101;
    REQUIRE(naf_weight(v) > 4);
    CHECK_FALSE(is_mersenne_like(v).has_value());
}

TEST_CASE("montgomery-friendly matcher") {
    // 239 + 1 = 240 = 2^4 * 15, m = 15, beta = 4, gamma = 16 - 15 = 1 < 2^1=2
    auto w = is_montgomery_friendly(239);
    REQUIRE(w);
    CHECK(w->alpha == 4);
    CHECK(w->beta == 4);
    CHECK(w->gamma == 1);

    // alpha = 1 never matches: p + 1 = 2 * odd
    // 13 + 1 = 14 = 2 * 7
    CHECK_FALSE(is_montgomery_friendly(13).has_value());

    // 103 + 1 = 104 = 2^3 * 13: gamma = 16 - 13 = 3 >= 2^ceil(4/4), no match
    CHECK_FALSE(is_montgomery_friendly(103).has_value());

    // 2^k - 1 inputs have p + 1 = 2^k, m = 1: gamma = 1 < 2, matched
    CHECK(is_montgomery_friendly((u64{1} << 20) - 1).has_value());
}

TEST_CASE("exceptionality verdicts on known primes") {
    CHECK_FALSE(exceptionality(8191).acceptable());
    CHECK_FALSE(exceptionality(65537).acceptable());
    CHECK_FALSE(exceptionality((u64{1} << 31) - 1).acceptable());
    CHECK_FALSE(exceptionality(239).acceptable());

    // generic primes with no special shape pass
    for (u64 p : {u64{1000003}, u64{999999937}, u64{0xd3c2b}})
        CHECK(exceptionality(p).acceptable());
}
