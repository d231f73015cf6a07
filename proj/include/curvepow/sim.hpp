#pragma once

#include <algorithm>
#include <deque>
#include <map>

#include "curvepow/chain.hpp"

namespace curvepow {

struct SimConfig {
    unsigned miner_count = 1;
    u64 epoch_len = 8;
    int d = 10;
    u64 cm_threshold = kDeskCmThreshold;
    SolverMethod method = SolverMethod::rho;
    u64 relay_delay = 0; // ticks between completion and delivery
    u64 rng_seed = 1;
    u64 run_length = 8; // blocks in the final chain
    u64 work_quantum = 256; // group ops per tick and miner

    ChainConfig chain_config() const { return {d, epoch_len, cm_threshold}; }
};

struct BlockRow {
    u64 height = 0;
    unsigned miner = 0;
    BlockKind kind = BlockKind::SB;
    u64 ticks = 0;
    u64 group_ops = 0;
    double gen_time_s = 0.0; // wall; zero for SBs
    double dlp_time_s = 0.0; // wall
};

struct ForkEvent {
    u64 tick = 0;
    u64 height = 0;
    unsigned loser = 0;
};

struct SimResult {
    Chain chain;
    std::vector<BlockRow> rows;
    std::vector<ForkEvent> fork_events;
    u64 ticks = 0;

    // Logical columns only, so fixed seeds give identical files.
    std::string to_csv() const {
        std::ostringstream os;
        os << "height,miner,kind,ticks,group_ops\n";
        for (const auto& r : rows)
            os << r.height << "," << r.miner << ","
               << (r.kind == BlockKind::EB ? "EB" : "SB") << "," << r.ticks << ","
               << r.group_ops << "\n";
        return os.str();
    }
};

namespace detail {

struct MinerWork {
    Block block;           // fully assembled, revealed when ticks run out
    std::optional<EpochParams> params; // set for EBs
    u64 ticks_left = 0;
    u64 total_ticks = 0;
    SolverStats stats;
    double gen_time_s = 0.0;
    Digest parent_hash{}; // work is stale once the local tip moves
    bool active = false;
};

inline Transaction sim_transaction(u64 seed, unsigned miner, u64 height,
                                   const Digest& parent) {
    Bytes payload;
    append_bytes(payload, int_to_bytes_fixed(seed, 8));
    append_bytes(payload, int_to_bytes_fixed(miner, 8));
    append_bytes(payload, int_to_bytes_fixed(height, 8));
    payload.insert(payload.end(), parent.begin(), parent.begin() + 16);
    return {payload};
}

} // namespace detail

// Deterministic multi-miner event loop. Each miner solves its own PoW
// instance (its transactions differ, so targets differ); a solve costing G
// group ops completes after ceil(G / work_quantum) ticks; broadcast reaches
// the other miners relay_delay ticks later.
inline SimResult run_simulation(const SimConfig& cfg) {
    if (cfg.miner_count < 1 || cfg.run_length < 1)
        throw Error("bad simulation config");
    const ChainConfig ccfg = cfg.chain_config();

    std::vector<Chain> local(cfg.miner_count, Chain{ccfg, {}});
    std::vector<detail::MinerWork> work(cfg.miner_count);
    std::map<u64, std::vector<std::pair<unsigned, Chain>>> deliveries;
    std::map<std::string, std::pair<unsigned, detail::MinerWork>> block_meta;

    // epoch params per seeding digest; all miners derive the same ones
    std::map<std::string, EpochParams> epoch_cache;
    auto params_for = [&](const Digest& h_prev) -> const EpochParams& {
        std::string key(h_prev.begin(), h_prev.end());
        auto it = epoch_cache.find(key);
        if (it == epoch_cache.end())
            it = epoch_cache
                     .emplace(key, epoch_params(cfg.d, h_prev, cfg.cm_threshold))
                     .first;
        return it->second;
    };

    SimResult result;
    u64 tick = 0;
    auto chain_height = [](const Chain& c) { return c.height(); };

    auto best_height = [&] {
        u64 h = 0;
        for (const auto& c : local) h = std::max(h, chain_height(c));
        return h;
    };

    while (best_height() < cfg.run_length) {
        // deliveries due this tick, in (origin, ...) order
        if (auto it = deliveries.find(tick); it != deliveries.end()) {
            for (const auto& [origin, candidate] : it->second) {
                for (unsigned m = 0; m < cfg.miner_count; ++m) {
                    if (m == origin) continue;
                    bool adopt = chain_preferred(local[m], candidate);
                    bool tie = candidate.height() == local[m].height() &&
                               local[m].height() > 0 &&
                               !(candidate.tip() == local[m].tip());
                    if (tie)
                        result.fork_events.push_back(
                            {tick, candidate.height() - 1, adopt ? m : origin});
                    if (adopt) local[m] = candidate;
                }
            }
            deliveries.erase(it);
        }

        // work phase, miner id order
        for (unsigned m = 0; m < cfg.miner_count; ++m) {
            Chain& chain = local[m];
            Digest tip_hash =
                chain.blocks.empty() ? zero_digest() : header_hash(chain.tip().header);
            detail::MinerWork& w = work[m];
            if (!w.active || !(w.parent_hash == tip_hash)) {
                // (re)target on the local tip; partial solver state discarded
                u64 height = chain.height();
                std::optional<BlockHeader> parent;
                if (!chain.blocks.empty()) parent = chain.tip().header;
                std::vector<Transaction> txs{
                    detail::sim_transaction(cfg.rng_seed, m, height, tip_hash)};
                u64 seed = cfg.rng_seed ^ (height << 16) ^ m ^
                           U512::from_digest(tip_hash).limbs[0];
                w = detail::MinerWork{};
                w.parent_hash = tip_hash;
                w.active = true;
                if (ccfg.is_epoch_height(height)) {
                    detail::StopWatch sw;
                    const EpochParams& params = params_for(tip_hash);
                    w.gen_time_s = sw.elapsed();
                    w.params = params;
                    w.block = mine_block(parent, std::move(txs), params,
                                         BlockKind::EB, cfg.method, 1, seed,
                                         &w.stats);
                } else {
                    // governed by the epoch of the most recent EB
                    const Digest* eb_seed = nullptr;
                    for (auto rit = chain.blocks.rbegin();
                         rit != chain.blocks.rend(); ++rit)
                        if (rit->header.kind == BlockKind::EB) {
                            eb_seed = &rit->header.h_prev;
                            break;
                        }
                    const EpochParams& params = params_for(*eb_seed);
                    w.block = mine_block(parent, std::move(txs), params,
                                         BlockKind::SB, cfg.method, 1, seed,
                                         &w.stats);
                }
                w.total_ticks =
                    std::max<u64>(1, (w.stats.group_ops + cfg.work_quantum - 1) /
                                         cfg.work_quantum);
                w.ticks_left = w.total_ticks;
            }
            if (--w.ticks_left == 0) {
                // block revealed: extend local chain and broadcast
                chain.blocks.push_back(w.block);
                detail::MinerWork meta = w;
                meta.active = false;
                Digest bh = header_hash(w.block.header);
                block_meta[std::string(bh.begin(), bh.end())] = {m, meta};
                // visible to peers at the start of the next tick plus delay
                deliveries[tick + 1 + cfg.relay_delay].emplace_back(m, chain);
                w.active = false;
            }
        }
        ++tick;
    }

    // flush remaining deliveries so everyone sees the longest chain
    std::vector<Chain> finals = local;
    for (auto& [t, ds] : deliveries)
        for (auto& [origin, c] : ds) finals.push_back(std::move(c));
    result.chain = fork_choice(finals);
    if (result.chain.blocks.size() > cfg.run_length)
        result.chain.blocks.resize(cfg.run_length);
    result.ticks = tick;

    for (u64 h = 0; h < result.chain.blocks.size(); ++h) {
        const Block& blk = result.chain.blocks[h];
        Digest bh = header_hash(blk.header);
        auto it = block_meta.find(std::string(bh.begin(), bh.end()));
        BlockRow row;
        row.height = h;
        row.kind = blk.header.kind;
        if (it != block_meta.end()) {
            row.miner = it->second.first;
            const auto& meta = it->second.second;
            row.ticks = meta.total_ticks;
            row.group_ops = meta.stats.group_ops;
            row.gen_time_s = meta.gen_time_s;
            row.dlp_time_s = meta.stats.wall_time_s;
        }
        result.rows.push_back(row);
    }
    return result;
}

// ---- Benchmark harness (generation vs DLP cost across difficulties) ----

struct BenchRow {
    int d = 0;
    u64 trial = 0;
    double gen_time_s = 0.0;
    double dlp_time_s = 0.0;
    u64 group_ops = 0;
};

struct BenchTable {
    std::vector<BenchRow> rows;

    struct Summary {
        int d;
        double median_gen_s;
        double median_dlp_s;
        u64 median_ops;
    };
    std::vector<Summary> summaries;

    std::string to_csv() const {
        std::ostringstream os;
        os << "d,gen_time_s,dlp_time_s,group_ops\n";
        for (const auto& r : rows)
            os << r.d << "," << r.gen_time_s << "," << r.dlp_time_s << ","
               << r.group_ops << "\n";
        os << "# medians\n";
        for (const auto& s : summaries)
            os << "# d=" << s.d << " gen_time_s=" << s.median_gen_s
               << " dlp_time_s=" << s.median_dlp_s << " group_ops=" << s.median_ops
               << "\n";
        return os.str();
    }

    // least-squares slope of log2(median dlp time) against d
    double dlp_time_slope() const {
        double sx = 0, sy = 0, sxy = 0, sxx = 0;
        size_t n = summaries.size();
        for (const auto& s : summaries) {
            double x = s.d, y = std::log2(std::max(s.median_dlp_s, 1e-9));
            sx += x;
            sy += y;
            sxy += x * y;
            sxx += x * x;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
};

namespace detail {

template <typename T>
inline T median_of(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

} // namespace detail

inline BenchTable bench_scaling(const std::vector<int>& d_range, u64 trials,
                                u64 seed, u64 cm_threshold = kDeskCmThreshold,
                                SolverMethod method = SolverMethod::rho) {
    BenchTable table;
    for (int d : d_range) {
        std::vector<double> gens, dlps;
        std::vector<u64> opss;
        for (u64 trial = 0; trial < trials; ++trial) {
            Bytes seed_bytes;
            append_bytes(seed_bytes, int_to_bytes_fixed(seed, 8));
            append_bytes(seed_bytes, int_to_bytes_fixed(static_cast<u64>(d), 8));
            append_bytes(seed_bytes, int_to_bytes_fixed(trial, 8));
            Digest h = sha3_512(seed_bytes);

            detail::StopWatch gen_sw;
            EpochParams params = epoch_params(d, h, cm_threshold);
            double gen_s = gen_sw.elapsed();

            // one PoW instance on the fresh curve
            Digest challenge = sha3_512(challenge_bytes_sb(h, sha3_512(h)));
            Point target = p_point_gen(challenge, params.curve);
            DlpInstance inst{params.curve, params.base, target, params.order};
            auto [n, stats] = solve(inst, method, seed + trial);
            (void)n;

            table.rows.push_back({d, trial, gen_s, stats.wall_time_s,
                                  stats.group_ops});
            gens.push_back(gen_s);
            dlps.push_back(stats.wall_time_s);
            opss.push_back(stats.group_ops);
        }
        table.summaries.push_back({d, detail::median_of(gens),
                                   detail::median_of(dlps),
                                   detail::median_of(opss)});
    }
    return table;
}

} // namespace curvepow
