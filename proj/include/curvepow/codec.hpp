#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "curvepow/errors.hpp"
#include "curvepow/sha3.hpp"

namespace curvepow {

using u32 = uint32_t;
using u64 = uint64_t;
using u128 = unsigned __int128;

// 512-bit unsigned integer, the numeric reading of a Digest (big-endian).
// Only the operations the generation pipeline needs: add a small integer,
// reduce mod a 64-bit modulus, extract low bits.
struct U512 {
    // limbs[0] is least significant.
    std::array<u64, 8> limbs{};

    static U512 from_digest(const Digest& d) {
        U512 v;
        for (int i = 0; i < 8; ++i) {
            u64 lane = 0;
            for (int j = 0; j < 8; ++j) lane = (lane << 8) | d[i * 8 + j];
            v.limbs[7 - i] = lane;
        }
        return v;
    }

    static U512 from_u64(u64 x) {
        U512 v;
        v.limbs[0] = x;
        return v;
    }

    Digest to_digest() const {
        Digest d;
        for (int i = 0; i < 8; ++i) {
            u64 lane = limbs[7 - i];
            for (int j = 7; j >= 0; --j) {
                d[i * 8 + j] = static_cast<uint8_t>(lane & 0xff);
                lane >>= 8;
            }
        }
        return d;
    }

    U512& add(u64 x) {
        u128 carry = x;
        for (auto& limb : limbs) {
            carry += limb;
            limb = static_cast<u64>(carry);
            carry >>= 64;
            if (!carry) break;
        }
        return *this; // overflow wraps mod 2^512
    }

    u64 mod(u64 m) const {
        u128 acc = 0;
        for (int i = 7; i >= 0; --i) acc = ((acc << 64) | limbs[i]) % m;
        return static_cast<u64>(acc);
    }

    // Low `bits` bits as an integer; bits in [1, 64].
    u64 low_bits(int bits) const {
        if (bits >= 64) return limbs[0];
        return limbs[0] & ((u64{1} << bits) - 1);
    }

    bool is_zero() const {
        for (auto limb : limbs)
            if (limb) return false;
        return true;
    }

    bool operator==(const U512&) const = default;
};

inline u64 digest_mod(const Digest& d, u64 m) {
    return U512::from_digest(d).mod(m);
}

inline Digest digest_add(const Digest& d, u64 x) {
    return U512::from_digest(d).add(x).to_digest();
}

inline int bit_length(u64 v) {
    int n = 0;
    while (v) {
        ++n;
        v >>= 1;
    }
    return n;
}

inline Bytes int_to_bytes_fixed(u64 v, size_t width) {
    if (width < 8 && (v >> (8 * width)) != 0)
        throw EncodingError("integer does not fit in " + std::to_string(width) +
                            " bytes");
    Bytes out(width, 0);
    for (size_t i = 0; i < width && i < 8; ++i)
        out[width - 1 - i] = static_cast<uint8_t>(v >> (8 * i));
    return out;
}

inline u64 bytes_to_int(const uint8_t* data, size_t width) {
    u64 v = 0;
    for (size_t i = 0; i < width; ++i) {
        if (width > 8 && i < width - 8 && data[i] != 0)
            throw EncodingError("integer field exceeds 64 bits");
        v = (v << 8) | data[i];
    }
    return v;
}

inline void append_bytes(Bytes& dst, const Bytes& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

inline void append_bytes(Bytes& dst, const Digest& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

inline std::string to_hex(const uint8_t* data, size_t len) {
    static const char* alphabet = "0123456789abcdef";
    std::string s;
    s.reserve(2 * len);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(alphabet[data[i] >> 4]);
        s.push_back(alphabet[data[i] & 0xf]);
    }
    return s;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
inline std::string to_hex(const Digest& d) { return to_hex(d.data(), d.size()); }

inline std::optional<Bytes> from_hex(const std::string& s) {
    if (s.size() % 2) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(s[2 * i]), lo = nibble(s[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

inline std::optional<Digest> digest_from_hex(const std::string& s) {
    auto b = from_hex(s);
    if (!b || b->size() != 64) return std::nullopt;
    Digest d;
    std::copy(b->begin(), b->end(), d.begin());
    return d;
}

// Canonical textual form for integers: lowercase hex, 0x-prefixed.
inline std::string hex_int(u64 v) {
    char buf[19];
    int n = std::snprintf(buf, sizeof buf, "0x%llx",
                          static_cast<unsigned long long>(v));
    return std::string(buf, buf + n);
}

} // namespace curvepow
