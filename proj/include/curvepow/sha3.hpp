#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace curvepow {

using Bytes = std::vector<uint8_t>;

// SHA3-512 output.
using Digest = std::array<uint8_t, 64>;

namespace detail {

inline constexpr uint64_t keccak_rc[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

inline constexpr int keccak_rot[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55,
                                       20, 3,  10, 43, 25, 39, 41, 45, 15,
                                       21, 8,  18, 2,  61, 56, 14};

inline uint64_t rotl64(uint64_t v, int s) {
    return s == 0 ? v : (v << s) | (v >> (64 - s));
}

inline void keccak_f1600(uint64_t a[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y) a[x + 5 * y] ^= d[x];
        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] =
                    rotl64(a[x + 5 * y], keccak_rot[x + 5 * y]);
        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x + 5 * y] =
                    b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        // iota
        a[0] ^= keccak_rc[round];
    }
}

} // namespace detail

// SHA3-512 (FIPS 202): rate 72 bytes, domain padding 0x06 ... 0x80.
inline Digest sha3_512(const uint8_t* data, size_t len) {
    constexpr size_t rate = 72;
    uint64_t state[25] = {0};
    uint8_t block[rate];

    size_t off = 0;
    auto absorb = [&](const uint8_t* blk) {
        for (size_t i = 0; i < rate / 8; ++i) {
            uint64_t lane = 0;
            for (int j = 7; j >= 0; --j) lane = (lane << 8) | blk[i * 8 + j];
            state[i] ^= lane;
        }
        detail::keccak_f1600(state);
    };

    while (len - off >= rate) {
        absorb(data + off);
        off += rate;
    }
    size_t rem = len - off;
    std::memset(block, 0, rate);
    if (rem) std::memcpy(block, data + off, rem);
    block[rem] ^= 0x06;
    block[rate - 1] ^= 0x80;
    absorb(block);

    Digest out;
    for (size_t i = 0; i < 8; ++i) {
        uint64_t lane = state[i];
        for (int j = 0; j < 8; ++j) {
            out[i * 8 + j] = static_cast<uint8_t>(lane & 0xff);
            lane >>= 8;
        }
    }
    return out;
}

inline Digest sha3_512(const Bytes& data) {
    return sha3_512(data.data(), data.size());
}

inline Digest sha3_512(const Digest& d) { return sha3_512(d.data(), d.size()); }

inline Digest sha3_512(const std::string& s) {
    return sha3_512(reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

inline Digest zero_digest() {
    Digest d{};
    return d;
}

} // namespace curvepow
