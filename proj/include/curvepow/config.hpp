#pragma once

#include <fstream>
#include <string>

#include "curvepow/chain.hpp"

namespace curvepow {

// Flat key=value configuration with two named profiles. Flag values override
// file values; the file overrides profile defaults.
struct Config {
    int d = 10;
    u64 epoch_len = 8;
    u64 cm_threshold = kDeskCmThreshold;
    SolverMethod solver = SolverMethod::rho;
    unsigned workers = 1;
    u64 seed = 1;
    std::string chain_path = "chain.txt";
    unsigned miners = 1;
    u64 relay_delay = 0;
    u64 run_length = 8;

    void apply_profile(const std::string& name) {
        if (name == "paper") {
            epoch_len = 2016;
            cm_threshold = kDefaultCmThreshold;
        } else if (name == "desk") {
            epoch_len = 8;
            cm_threshold = kDeskCmThreshold;
            if (d > 20) d = 20;
        } else {
            throw Error("unknown profile: " + name);
        }
    }

    bool set(const std::string& key, const std::string& value) {
        if (key == "profile") {
            apply_profile(value);
        } else if (key == "d") {
            d = std::stoi(value);
        } else if (key == "epoch_len") {
            epoch_len = std::stoull(value);
        } else if (key == "cm_threshold") {
            cm_threshold = std::stoull(value);
        } else if (key == "solver") {
            auto m = solver_from_name(value);
            if (!m) return false;
            solver = *m;
        } else if (key == "workers") {
            workers = static_cast<unsigned>(std::stoul(value));
        } else if (key == "seed") {
            seed = std::stoull(value);
        } else if (key == "chain_path") {
            chain_path = value;
        } else if (key == "miners") {
            miners = static_cast<unsigned>(std::stoul(value));
        } else if (key == "relay_delay") {
            relay_delay = std::stoull(value);
        } else if (key == "run_length") {
            run_length = std::stoull(value);
        } else {
            return false;
        }
        return true;
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot read config file " + path);
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(path + ":" + std::to_string(lineno) +
                            ": expected key=value");
            if (!set(line.substr(0, eq), line.substr(eq + 1)))
                throw Error(path + ":" + std::to_string(lineno) +
                            ": unknown key or bad value");
        }
    }

    ChainConfig chain_config() const { return {d, epoch_len, cm_threshold}; }
};

} // namespace curvepow
