#pragma once

#include "curvepow/paramgen.hpp"

namespace curvepow {

enum class BlockKind : uint8_t { SB = 0x00, EB = 0x01 };

struct EpochFields {
    u64 p = 0;
    u64 A = 0;
    u64 B = 0;
    u64 Px = 0;
    u64 Py = 0;

    bool operator==(const EpochFields&) const = default;

    Curve curve() const { return Curve{p, A, B}; }
    Point base() const { return Point::affine(Px, Py); }

    static EpochFields from(const EpochParams& ep) {
        return {ep.p, ep.curve.A, ep.curve.B, ep.base.x, ep.base.y};
    }
};

struct BlockHeader {
    BlockKind kind = BlockKind::SB;
    Digest h_prev{};
    Digest merkle_root{};
    std::optional<EpochFields> epoch; // present iff kind == EB
    u64 N = 0;
    uint16_t width = 0; // W = ceil(bitlen(p)/8) of the governing curve

    bool operator==(const BlockHeader&) const = default;
};

// Canonical header layout:
//   tag(1) || h_prev(64) || merkle(64)
//   EB only: W(2, big-endian) || p,A,B,Px,Py each W bytes
//   N as W+8 bytes
inline Bytes encode_header(const BlockHeader& hdr) {
    if ((hdr.kind == BlockKind::EB) != hdr.epoch.has_value())
        throw EncodingError("epoch fields present iff EB");
    const size_t w = hdr.width;
    if (w == 0 || w > 8) throw EncodingError("bad field width");
    Bytes out;
    out.push_back(static_cast<uint8_t>(hdr.kind));
    append_bytes(out, hdr.h_prev);
    append_bytes(out, hdr.merkle_root);
    if (hdr.epoch) {
        append_bytes(out, int_to_bytes_fixed(w, 2));
        append_bytes(out, int_to_bytes_fixed(hdr.epoch->p, w));
        append_bytes(out, int_to_bytes_fixed(hdr.epoch->A, w));
        append_bytes(out, int_to_bytes_fixed(hdr.epoch->B, w));
        append_bytes(out, int_to_bytes_fixed(hdr.epoch->Px, w));
        append_bytes(out, int_to_bytes_fixed(hdr.epoch->Py, w));
    }
    append_bytes(out, int_to_bytes_fixed(hdr.N, w + 8));
    return out;
}

inline BlockHeader decode_header(const Bytes& buf) {
    if (buf.size() < 130) throw EncodingError("header too short");
    BlockHeader hdr;
    if (buf[0] == 0x00)
        hdr.kind = BlockKind::SB;
    else if (buf[0] == 0x01)
        hdr.kind = BlockKind::EB;
    else
        throw EncodingError("unknown header tag");
    std::copy(buf.begin() + 1, buf.begin() + 65, hdr.h_prev.begin());
    std::copy(buf.begin() + 65, buf.begin() + 129, hdr.merkle_root.begin());
    size_t off = 129;
    size_t w;
    if (hdr.kind == BlockKind::SB) {
        // length fixes W: 129 + (W + 8)
        if (buf.size() < 129 + 9) throw EncodingError("truncated SB header");
        w = buf.size() - 137;
    } else {
        if (buf.size() < 131) throw EncodingError("truncated EB header");
        w = bytes_to_int(buf.data() + off, 2);
        off += 2;
        if (buf.size() != 131 + 6 * w + 8) throw EncodingError("bad EB length");
    }
    if (w == 0 || w > 8) throw EncodingError("bad field width");
    hdr.width = static_cast<uint16_t>(w);
    if (hdr.kind == BlockKind::EB) {
        EpochFields ef;
        ef.p = bytes_to_int(buf.data() + off, w);
        ef.A = bytes_to_int(buf.data() + off + w, w);
        ef.B = bytes_to_int(buf.data() + off + 2 * w, w);
        ef.Px = bytes_to_int(buf.data() + off + 3 * w, w);
        ef.Py = bytes_to_int(buf.data() + off + 4 * w, w);
        hdr.epoch = ef;
        off += 5 * w;
    }
    if (buf.size() != off + w + 8) throw EncodingError("bad header length");
    hdr.N = bytes_to_int(buf.data() + off, w + 8);
    return hdr;
}

inline Digest header_hash(const BlockHeader& hdr) {
    return sha3_512(encode_header(hdr));
}

// ---- Merkle tree (leaf = H(payload), interior = H(left || right),
//      odd level duplicates the last node, [] -> H(empty), [t] -> H(t)) ----

struct Transaction {
    Bytes payload;

    bool operator==(const Transaction&) const = default;
};

inline constexpr size_t kMaxTransactionSize = 4096;

inline bool transaction_valid(const Transaction& tx) {
    return !tx.payload.empty() && tx.payload.size() <= kMaxTransactionSize;
}

inline Digest merkle_root(const std::vector<Transaction>& txs) {
    if (txs.empty()) return sha3_512(Bytes{});
    std::vector<Digest> level;
    level.reserve(txs.size());
    for (const auto& tx : txs) level.push_back(sha3_512(tx.payload));
    while (level.size() > 1) {
        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i < level.size(); i += 2) {
            const Digest& left = level[i];
            const Digest& right = i + 1 < level.size() ? level[i + 1] : level[i];
            Bytes buf;
            append_bytes(buf, left);
            append_bytes(buf, right);
            next.push_back(sha3_512(buf));
        }
        level = std::move(next);
    }
    return level.front();
}

// SB challenge preimage: exactly h_prev || M.
inline Bytes challenge_bytes_sb(const Digest& h_prev, const Digest& merkle) {
    Bytes out;
    out.reserve(128);
    append_bytes(out, h_prev);
    append_bytes(out, merkle);
    return out;
}

// EB challenge preimage additionally commits to the new epoch fields.
inline Bytes challenge_bytes_eb(const Digest& h_prev, const Digest& merkle,
                                const EpochFields& ef) {
    Bytes out = challenge_bytes_sb(h_prev, merkle);
    size_t w = (bit_length(ef.p) + 7) / 8;
    append_bytes(out, int_to_bytes_fixed(ef.p, w));
    append_bytes(out, int_to_bytes_fixed(ef.A, w));
    append_bytes(out, int_to_bytes_fixed(ef.B, w));
    append_bytes(out, int_to_bytes_fixed(ef.Px, w));
    append_bytes(out, int_to_bytes_fixed(ef.Py, w));
    return out;
}

// The point the PoW solution must hit: T = P_Gen(H(preimage), E).
inline Point pow_target(BlockKind kind, const Digest& h_prev, const Digest& merkle,
                        const std::optional<EpochFields>& epoch, const Curve& E) {
    Bytes preimage = kind == BlockKind::EB
                         ? challenge_bytes_eb(h_prev, merkle, *epoch)
                         : challenge_bytes_sb(h_prev, merkle);
    return p_point_gen(sha3_512(preimage), E);
}

inline Point pow_target(const BlockHeader& hdr, const Curve& E) {
    return pow_target(hdr.kind, hdr.h_prev, hdr.merkle_root, hdr.epoch, E);
}

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;

    bool operator==(const Block&) const = default;
};

} // namespace curvepow
