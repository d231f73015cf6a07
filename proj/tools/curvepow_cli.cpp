#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "curvepow/curvepow.hpp"

namespace {

using namespace curvepow;

// exit codes
constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kGenerationExhausted = 2;
constexpr int kChainCorrupt = 3;
constexpr int kUsage = 64;
constexpr int kBadData = 65;
constexpr int kMissingFile = 66;

std::string signed_hex(int64_t v) {
    return v < 0 ? "-" + hex_int(static_cast<u64>(-v)) : hex_int(static_cast<u64>(v));
}

void print_epoch_params(const EpochParams& ep) {
    std::cout << "d: " << ep.d << "\n"
              << "h_prev: 0x" << to_hex(ep.provenance) << "\n"
              << "p: " << hex_int(ep.p) << "\n"
              << "p_iterations: " << ep.p_iterations << "\n"
              << "exceptionality: "
              << (ep.exceptionality.acceptable() ? "clear" : "matched")
              << " crandall=" << (ep.exceptionality.crandall ? "yes" : "no")
              << " mersenne_like="
              << (ep.exceptionality.mersenne_like ? "yes" : "no")
              << " montgomery_friendly="
              << (ep.exceptionality.montgomery_friendly ? "yes" : "no") << "\n"
              << "A: " << hex_int(ep.curve.A) << "\n"
              << "B: " << hex_int(ep.curve.B) << "\n"
              << "e_iterations: " << ep.e_iterations << "\n"
              << "order: " << hex_int(ep.order) << "\n"
              << "trace: " << signed_hex(ep.trace) << "\n"
              << "order_prime: " << (ep.security.order_prime ? "yes" : "no")
              << "\n"
              << "anomalous: " << (ep.security.anomalous ? "yes" : "no") << "\n"
              << "embedding_degree_leq20: "
              << (ep.security.embedding_degree
                      ? std::to_string(*ep.security.embedding_degree)
                      : std::string("none"))
              << "\n"
              << "cm_discriminant: "
              << (ep.security.cm_discriminant
                      ? signed_hex(*ep.security.cm_discriminant)
                      : std::string("overflow"))
              << "\n"
              << "P: (" << hex_int(ep.base.x) << ", " << hex_int(ep.base.y)
              << ")\n";
}

int cmd_params(int d, const std::string& h_hex, u64 cm_threshold) {
    auto h = digest_from_hex(h_hex);
    if (!h) {
        std::cerr << "error: h_prev must be 128 hex characters\n";
        return kUsage;
    }
    try {
        EpochParams ep = epoch_params(d, *h, cm_threshold);
        print_epoch_params(ep);
        return kOk;
    } catch (const GenerationExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGenerationExhausted;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

int cmd_mine(const Config& cfg, u64 count) {
    Chain chain;
    if (std::filesystem::exists(cfg.chain_path)) {
        try {
            chain = load_chain(cfg.chain_path);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kChainCorrupt;
        }
        VerdictReport rep = validate_chain(chain);
        if (!rep.ok()) {
            std::cerr << "error: existing chain invalid at height "
                      << rep.bad_height << "\n"
                      << rep.to_text();
            return kChainCorrupt;
        }
    } else {
        chain.config = cfg.chain_config();
    }

    std::optional<EpochParams> epoch;
    std::optional<BlockHeader> parent;
    if (!chain.blocks.empty()) {
        // recover the governing epoch of the tip
        for (auto it = chain.blocks.rbegin(); it != chain.blocks.rend(); ++it)
            if (it->header.kind == BlockKind::EB) {
                epoch = epoch_params(chain.config.d, it->header.h_prev,
                                     chain.config.cm_threshold);
                break;
            }
        parent = chain.tip().header;
    }

    for (u64 i = 0; i < count; ++i) {
        u64 height = chain.height();
        // opaque payload tying the block to its position
        Bytes payload;
        append_bytes(payload, int_to_bytes_fixed(cfg.seed, 8));
        append_bytes(payload, int_to_bytes_fixed(height, 8));
        std::vector<Transaction> txs{{payload}};

        SolverStats stats;
        double gen_s = 0.0;
        Block blk;
        if (chain.config.is_epoch_height(height)) {
            auto [b, params] =
                make_epoch_block(parent, std::move(txs), chain.config, cfg.solver,
                                 cfg.workers, cfg.seed + height, &stats, &gen_s);
            blk = std::move(b);
            epoch = std::move(params);
        } else {
            blk = mine_block(parent, std::move(txs), *epoch, BlockKind::SB,
                             cfg.solver, cfg.workers, cfg.seed + height, &stats);
        }
        std::cout << "height " << height << " "
                  << (blk.header.kind == BlockKind::EB ? "EB" : "SB")
                  << " N=" << hex_int(blk.header.N)
                  << " group_ops=" << stats.group_ops << " dlp_s="
                  << stats.wall_time_s << " gen_s=" << gen_s << "\n";
        parent = blk.header;
        chain.blocks.push_back(std::move(blk));
    }
    save_chain(chain, cfg.chain_path);
    std::cout << "chain height " << chain.height() << " -> " << cfg.chain_path
              << "\n";
    return kOk;
}

int cmd_verify(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        std::cerr << "error: no such file: " << path << "\n";
        return kMissingFile;
    }
    Chain chain;
    try {
        chain = load_chain(path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kChainCorrupt;
    }
    VerdictReport rep = validate_chain(chain);
    std::cout << rep.to_text();
    if (!rep.ok()) {
        std::cout << "verdict: FAIL at height " << rep.bad_height << "\n";
        return kVerifyFailed;
    }
    std::cout << "verdict: pass (" << chain.height() << " blocks)\n";
    return kOk;
}

int cmd_solve(u64 p, u64 A, u64 B, u64 px, u64 py, u64 qx, u64 qy,
              const std::string& method, u64 seed, unsigned workers) {
    auto m = solver_from_name(method);
    if (!m) {
        std::cerr << "error: unknown method " << method << "\n";
        return kUsage;
    }
    Curve E{p, A % p, B % p};
    if (!is_prime(p) || E.singular()) {
        std::cerr << "error: invalid curve\n";
        return kBadData;
    }
    Point P = Point::affine(px, py);
    Point Q = Point::affine(qx, qy);
    // (0,0) is only a valid affine point when it lies on E; otherwise read
    // it as the identity so N = 0 instances stay expressible
    if (qx == 0 && qy == 0 && !E.on_curve(Q)) Q = Point::infinity();
    if (!E.on_curve(P) || !E.on_curve(Q) || P.inf) {
        std::cerr << "error: point not on curve\n";
        return kBadData;
    }
    std::mt19937_64 rng(seed);
    u64 n;
    try {
        n = curve_order(E, rng);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadData;
    }
    DlpInstance inst{E, P, Q, n};
    try {
        auto [N, stats] = solve(inst, *m, seed, workers);
        std::cout << "N: " << hex_int(N) << "\n"
                  << "order: " << hex_int(n) << "\n"
                  << "method: " << solver_name(stats.method)
                  << " group_ops=" << stats.group_ops
                  << " wall_s=" << stats.wall_time_s << "\n";
        return kOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadData;
    }
}

int cmd_bench(int d_min, int d_max, u64 trials, u64 seed, u64 cm_threshold,
              const std::string& out_csv) {
    std::vector<int> range;
    for (int d = d_min; d <= d_max; ++d) range.push_back(d);
    BenchTable table = bench_scaling(range, trials, seed, cm_threshold);
    std::ofstream out(out_csv, std::ios::trunc);
    if (!out) {
        std::cerr << "error: cannot write " << out_csv << "\n";
        return kBadData;
    }
    out << table.to_csv();
    for (const auto& s : table.summaries)
        std::cout << "d=" << s.d << " median_gen_s=" << s.median_gen_s
                  << " median_dlp_s=" << s.median_dlp_s
                  << " median_ops=" << s.median_ops << "\n";
    if (table.summaries.size() >= 2)
        std::cout << "log2(dlp_time) slope per d: " << table.dlp_time_slope()
                  << "\n";
    std::cout << "wrote " << out_csv << "\n";
    return kOk;
}

int cmd_simulate(const Config& cfg, const std::string& out_csv) {
    SimConfig sc;
    sc.miner_count = cfg.miners;
    sc.epoch_len = cfg.epoch_len;
    sc.d = cfg.d;
    sc.cm_threshold = cfg.cm_threshold;
    sc.method = cfg.solver;
    sc.relay_delay = cfg.relay_delay;
    sc.rng_seed = cfg.seed;
    sc.run_length = cfg.run_length;
    SimResult res = run_simulation(sc);

    std::vector<u64> wins(cfg.miners, 0);
    for (const auto& r : res.rows) ++wins[r.miner];
    std::cout << "blocks: " << res.rows.size() << " ticks: " << res.ticks
              << " forks: " << res.fork_events.size() << "\n";
    for (unsigned m = 0; m < cfg.miners; ++m)
        std::cout << "miner " << m << " wins: " << wins[m] << "\n";

    VerdictReport rep = validate_chain(res.chain);
    std::cout << "final chain: " << (rep.ok() ? "valid" : "INVALID") << "\n";

    if (!out_csv.empty()) {
        std::ofstream out(out_csv, std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write " << out_csv << "\n";
            return kBadData;
        }
        out << res.to_csv();
        std::cout << "wrote " << out_csv << "\n";
    }
    return rep.ok() ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ECDLP proof-of-work blockchain toolkit"};
    app.require_subcommand(1);

    curvepow::Config cfg;
    std::string config_path;
    if (const char* env = std::getenv("CURVEPOW_CONFIG")) config_path = env;
    app.add_option("--config", config_path, "key=value config file");
    std::string profile;
    app.add_option("--profile", profile, "profile: paper or desk");

    // params
    auto* params = app.add_subcommand("params", "derive epoch parameters");
    int p_d = 10;
    std::string p_hex;
    params->add_option("d", p_d, "difficulty parameter")->required();
    params->add_option("h_prev", p_hex, "seeding digest, 128 hex chars")
        ->required();
    params->add_option("--cm-threshold", cfg.cm_threshold, "minimum |D|");

    // mine
    auto* mine = app.add_subcommand("mine", "extend (or create) a chain file");
    u64 mine_count = 1;
    mine->add_option("--count", mine_count, "blocks to mine");
    mine->add_option("--chain", cfg.chain_path, "chain file path");
    mine->add_option("-d,--difficulty", cfg.d, "difficulty parameter");
    mine->add_option("--epoch-len", cfg.epoch_len, "blocks per epoch");
    mine->add_option("--cm-threshold", cfg.cm_threshold, "minimum |D|");
    std::string mine_solver = "rho";
    mine->add_option("--solver", mine_solver, "naive|bsgs|rho|kangaroo");
    mine->add_option("--workers", cfg.workers, "solver worker threads");
    mine->add_option("--seed", cfg.seed, "deterministic seed");

    // verify
    auto* verify = app.add_subcommand("verify", "validate a chain file");
    std::string verify_path;
    verify->add_option("chain", verify_path, "chain file path")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve one ECDLP instance");
    u64 s_p = 0, s_A = 0, s_B = 0, s_px = 0, s_py = 0, s_qx = 0, s_qy = 0;
    std::string s_method = "rho";
    solve_cmd->add_option("--p", s_p, "prime modulus")->required();
    solve_cmd->add_option("--A", s_A, "curve coefficient A")->required();
    solve_cmd->add_option("--B", s_B, "curve coefficient B")->required();
    solve_cmd->add_option("--Px", s_px, "base point x")->required();
    solve_cmd->add_option("--Py", s_py, "base point y")->required();
    solve_cmd->add_option("--Qx", s_qx, "target point x")->required();
    solve_cmd->add_option("--Qy", s_qy, "target point y")->required();
    solve_cmd->add_option("--method", s_method, "naive|bsgs|rho|kangaroo");
    solve_cmd->add_option("--seed", cfg.seed, "solver seed");
    solve_cmd->add_option("--workers", cfg.workers, "worker threads");

    // bench
    auto* bench = app.add_subcommand("bench", "generation vs DLP scaling");
    int b_dmin = 8, b_dmax = 14;
    u64 b_trials = 5;
    std::string b_out = "bench.csv";
    bench->add_option("--d-min", b_dmin, "lowest difficulty");
    bench->add_option("--d-max", b_dmax, "highest difficulty");
    bench->add_option("--trials", b_trials, "trials per difficulty");
    bench->add_option("--seed", cfg.seed, "deterministic seed");
    bench->add_option("--cm-threshold", cfg.cm_threshold, "minimum |D|");
    bench->add_option("--out", b_out, "output CSV path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "multi-miner simulation");
    std::string sim_out;
    sim->add_option("--miners", cfg.miners, "competing miners");
    sim->add_option("-d,--difficulty", cfg.d, "difficulty parameter");
    sim->add_option("--epoch-len", cfg.epoch_len, "blocks per epoch");
    sim->add_option("--cm-threshold", cfg.cm_threshold, "minimum |D|");
    sim->add_option("--relay-delay", cfg.relay_delay, "ticks before delivery");
    sim->add_option("--run-length", cfg.run_length, "blocks to simulate");
    sim->add_option("--seed", cfg.seed, "deterministic seed");
    sim->add_option("--out", sim_out, "output CSV path");

    // Pre-scan profile and config file so they act as defaults that explicit
    // flags then override during the real parse.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
        if (std::string(argv[i]) == "--profile") profile = argv[i + 1];
    }
    try {
        if (!profile.empty()) cfg.apply_profile(profile);
        if (!config_path.empty()) cfg.load_file(config_path);
    } catch (const curvepow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (params->parsed()) return cmd_params(p_d, p_hex, cfg.cm_threshold);
        if (mine->parsed()) {
            auto m = curvepow::solver_from_name(mine_solver);
            if (!m) {
                std::cerr << "error: unknown solver " << mine_solver << "\n";
                return kUsage;
            }
            cfg.solver = *m;
            return cmd_mine(cfg, mine_count);
        }
        if (verify->parsed()) return cmd_verify(verify_path);
        if (solve_cmd->parsed())
            return cmd_solve(s_p, s_A, s_B, s_px, s_py, s_qx, s_qy, s_method,
                             cfg.seed, cfg.workers);
        if (bench->parsed())
            return cmd_bench(b_dmin, b_dmax, b_trials, cfg.seed,
                             cfg.cm_threshold, b_out);
        if (sim->parsed()) return cmd_simulate(cfg, sim_out);
    } catch (const curvepow::GenerationExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGenerationExhausted;
    } catch (const curvepow::TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const curvepow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadData;
    }
    return kUsage;
}
