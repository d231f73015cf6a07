#pragma once

#include <fstream>
#include <sstream>

#include "curvepow/block.hpp"
#include "curvepow/dlp.hpp"

namespace curvepow {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerdictReport {
    std::vector<CheckResult> checks;
    int64_t bad_height = -1; // earliest failing height for chain validation

    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(const std::string& name, bool pass, std::string detail = "") {
        checks.push_back({name, pass, std::move(detail)});
    }

    std::string to_text() const {
        std::ostringstream os;
        for (const auto& c : checks) {
            os << (c.pass ? "pass" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            os << "\n";
        }
        return os.str();
    }
};

struct ChainConfig {
    int d = 10;
    u64 epoch_len = 2016;
    u64 cm_threshold = kDefaultCmThreshold;

    bool is_epoch_height(u64 height) const { return height % epoch_len == 0; }
};

struct Chain {
    ChainConfig config;
    std::vector<Block> blocks;

    u64 height() const { return blocks.size(); }
    const Block& tip() const { return blocks.back(); }
};

// ---- Verification ----

// Checks one block against its parent and the epoch parameters governing it.
// For an EB, `governing` is the params the EB itself must carry, re-derived
// by the caller or re-derived here from (d, h_prev) when `rederive` is set.
inline VerdictReport verify_block(const Block& blk,
                                  const std::optional<BlockHeader>& parent,
                                  const EpochParams& governing,
                                  const ChainConfig& cfg) {
    VerdictReport rep;
    const BlockHeader& hdr = blk.header;

    Digest expect_prev = parent ? header_hash(*parent) : zero_digest();
    rep.add("h_prev linkage", hdr.h_prev == expect_prev);

    bool txs_ok = true;
    for (const auto& tx : blk.transactions) txs_ok = txs_ok && transaction_valid(tx);
    rep.add("transaction sizes", txs_ok);
    rep.add("merkle root", merkle_root(blk.transactions) == hdr.merkle_root);

    const EpochParams* params = &governing;
    EpochParams rederived;
    if (hdr.kind == BlockKind::EB) {
        bool fields_match = false;
        std::string detail;
        try {
            rederived = epoch_params(cfg.d, hdr.h_prev, cfg.cm_threshold);
            fields_match = hdr.epoch && EpochFields::from(rederived) == *hdr.epoch &&
                           hdr.width == rederived.field_width();
            params = &rederived;
        } catch (const Error& e) {
            detail = e.what();
        }
        rep.add("epoch parameter re-derivation", fields_match, detail);
        if (!fields_match) return rep;

        // independent re-checks of the stated properties, from (p, A, B) alone
        const EpochFields& ef = *hdr.epoch;
        rep.add("p prime", is_prime(ef.p));
        rep.add("p bit length", bit_length(ef.p) == 2 * cfg.d);
        rep.add("p not exceptional", exceptionality(ef.p).acceptable());
        Curve E = ef.curve();
        rep.add("curve nonsingular", !E.singular());
        std::mt19937_64 rng(0x766572ULL ^ ef.p);
        u64 order = 0;
        try {
            order = curve_order(E, rng);
        } catch (const Error&) {
        }
        rep.add("|E| prime", order != 0 && is_prime(order));
        rep.add("|E| != p (not anomalous)", order != 0 && order != ef.p);
        rep.add("embedding degree > 20",
                order != 0 && !embedding_degree_leq(order, ef.p));
        bool cm_ok = false;
        if (order != 0) {
            try {
                int64_t D = cm_discriminant(curve_trace(ef.p, order), ef.p);
                cm_ok = static_cast<u64>(std::abs(D)) > cfg.cm_threshold;
            } catch (const TooLarge&) {
            }
        }
        rep.add("CM discriminant above threshold", cm_ok);
        rep.add("base point on curve", E.on_curve(ef.base()) && !ef.base().inf);
        rep.add("base point y < p/2", ef.Py < ef.p - ef.Py || ef.Py == 0);
    } else {
        rep.add("SB carries no epoch fields", !hdr.epoch.has_value());
        rep.add("field width matches epoch",
                hdr.width == governing.field_width());
    }

    rep.add("N in range", hdr.N < params->order);
    bool pow_ok = false;
    if (hdr.N < params->order) {
        Point target = pow_target(hdr, params->curve);
        pow_ok = ec::scalar_mul_unchecked(params->curve, hdr.N, params->base) ==
                 target;
    }
    rep.add("proof of work", pow_ok);
    return rep;
}

// Walks the chain from genesis, enforcing the epoch schedule and parameter
// inheritance. On failure, bad_height names the earliest offending block.
inline VerdictReport validate_chain(const Chain& chain) {
    VerdictReport summary;
    std::optional<EpochParams> epoch;
    std::optional<BlockHeader> parent;
    for (u64 h = 0; h < chain.blocks.size(); ++h) {
        const Block& blk = chain.blocks[h];
        bool should_be_eb = chain.config.is_epoch_height(h);
        if ((blk.header.kind == BlockKind::EB) != should_be_eb) {
            summary.add("epoch schedule at height " + std::to_string(h), false);
            summary.bad_height = static_cast<int64_t>(h);
            return summary;
        }
        if (blk.header.kind == BlockKind::SB && !epoch) {
            summary.add("missing epoch block before height " + std::to_string(h),
                        false);
            summary.bad_height = static_cast<int64_t>(h);
            return summary;
        }
        EpochParams placeholder;
        VerdictReport rep = verify_block(
            blk, parent, epoch ? *epoch : placeholder, chain.config);
        if (!rep.ok()) {
            for (auto& c : rep.checks)
                if (!c.pass)
                    summary.add("height " + std::to_string(h) + ": " + c.name,
                                false, c.detail);
            summary.bad_height = static_cast<int64_t>(h);
            return summary;
        }
        if (blk.header.kind == BlockKind::EB)
            epoch = epoch_params(chain.config.d, blk.header.h_prev,
                                 chain.config.cm_threshold);
        parent = blk.header;
    }
    summary.add("chain of " + std::to_string(chain.blocks.size()) + " blocks",
                true);
    return summary;
}

// ---- Mining ----

inline Block mine_block(const std::optional<BlockHeader>& parent,
                        std::vector<Transaction> txs, const EpochParams& epoch,
                        BlockKind kind, SolverMethod method, unsigned workers,
                        u64 seed, SolverStats* stats_out = nullptr) {
    Block blk;
    blk.header.kind = kind;
    blk.header.h_prev = parent ? header_hash(*parent) : zero_digest();
    blk.header.merkle_root = merkle_root(txs);
    blk.header.width = static_cast<uint16_t>(epoch.field_width());
    if (kind == BlockKind::EB) blk.header.epoch = EpochFields::from(epoch);
    blk.transactions = std::move(txs);

    Point target = pow_target(blk.header, epoch.curve);
    DlpInstance inst{epoch.curve, epoch.base, target, epoch.order};
    auto [n, stats] = solve(inst, method, seed, workers);
    blk.header.N = n;
    if (stats_out) *stats_out = stats;
    return blk;
}

inline std::pair<Block, EpochParams> make_epoch_block(
    const std::optional<BlockHeader>& parent, std::vector<Transaction> txs,
    const ChainConfig& cfg, SolverMethod method, unsigned workers, u64 seed,
    SolverStats* stats_out = nullptr, double* gen_time_out = nullptr) {
    Digest h_prev = parent ? header_hash(*parent) : zero_digest();
    detail::StopWatch sw;
    EpochParams params = epoch_params(cfg.d, h_prev, cfg.cm_threshold);
    if (gen_time_out) *gen_time_out = sw.elapsed();
    Block blk = mine_block(parent, std::move(txs), params, BlockKind::EB, method,
                           workers, seed, stats_out);
    return {std::move(blk), std::move(params)};
}

// ---- Fork choice ----

// True when `challenger` beats `incumbent`: strictly longer, or equal length
// with a lexicographically smaller tip-header hash.
inline bool chain_preferred(const Chain& incumbent, const Chain& challenger) {
    if (challenger.height() != incumbent.height())
        return challenger.height() > incumbent.height();
    if (challenger.height() == 0) return false;
    return header_hash(challenger.tip().header) <
           header_hash(incumbent.tip().header);
}

// Longest valid chain; ties broken by the lexicographically smaller tip hash.
inline const Chain& fork_choice(const std::vector<Chain>& candidates) {
    if (candidates.empty()) throw NoCandidates();
    const Chain* best = &candidates.front();
    for (size_t i = 1; i < candidates.size(); ++i)
        if (chain_preferred(*best, candidates[i])) best = &candidates[i];
    return *best;
}

// BTC-style retarget is out of scope; this is the configurable hook.
inline int adjust_difficulty(double epoch_duration, double target_duration, int d) {
    if (epoch_duration < target_duration / 2) ++d;
    else if (epoch_duration > 2 * target_duration) --d;
    return std::clamp(d, kMinDifficulty, kMaxDifficulty);
}

// ---- Persistence ----
// Line 1: "curvepow-chain v1 d=<d> epoch_len=<n> cm_threshold=<t>"
// Then one block per line: header hex, then one hex token per transaction.

inline void save_chain(const Chain& chain, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << "curvepow-chain v1 d=" << chain.config.d
        << " epoch_len=" << chain.config.epoch_len
        << " cm_threshold=" << chain.config.cm_threshold << "\n";
    for (const auto& blk : chain.blocks) {
        out << to_hex(encode_header(blk.header));
        for (const auto& tx : blk.transactions) out << " " << to_hex(tx.payload);
        out << "\n";
    }
}

// Throws EncodingError with the failing line number in the message.
inline Chain load_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    Chain chain;
    std::string line;
    if (!std::getline(in, line)) throw EncodingError("line 1: empty chain file");
    {
        std::istringstream ls(line);
        std::string magic, version, kv;
        ls >> magic >> version;
        if (magic != "curvepow-chain" || version != "v1")
            throw EncodingError("line 1: bad chain file magic");
        while (ls >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw EncodingError("line 1: bad metadata token");
            std::string key = kv.substr(0, eq);
            u64 val = std::stoull(kv.substr(eq + 1));
            if (key == "d") chain.config.d = static_cast<int>(val);
            else if (key == "epoch_len") chain.config.epoch_len = val;
            else if (key == "cm_threshold") chain.config.cm_threshold = val;
            else throw EncodingError("line 1: unknown metadata key " + key);
        }
    }
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto hdr_bytes = from_hex(tok);
        if (!hdr_bytes)
            throw EncodingError("line " + std::to_string(lineno) + ": bad header hex");
        Block blk;
        try {
            blk.header = decode_header(*hdr_bytes);
        } catch (const EncodingError& e) {
            throw EncodingError("line " + std::to_string(lineno) + ": " + e.what());
        }
        while (ls >> tok) {
            auto payload = from_hex(tok);
            if (!payload)
                throw EncodingError("line " + std::to_string(lineno) +
                                    ": bad transaction hex");
            blk.transactions.push_back({std::move(*payload)});
        }
        chain.blocks.push_back(std::move(blk));
    }
    return chain;
}

} // namespace curvepow
