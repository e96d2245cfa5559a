// SPDX-License-Identifier: Apache-2.0
//
// mcirsa - multi-cell IRSA uplink simulator with massive MIMO SIC decoding
// Copyright (C) 2026 the mcirsa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MCIRSA_CONFIG_HPP
#define MCIRSA_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "decoder.hpp"
#include "pilots.hpp"

namespace mcirsa
{

enum class Mode
{
    kMultiCell,
    kSingleCell,
};

/// %.17g rendering used for CSV cells and the config digest.
inline std::string format_g17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/**
 * Every experiment knob. Linear powers derive from the dBm fields; the noise
 * variance derives from the SNR so that the received data SNR is
 * P sigma_h^2 / N0. tau == 0 means "tau = M" (one orthogonal pilot per
 * in-cell user); users_per_cell == 0 means M = round(load * T).
 */
struct SimConfig
{
    int grid_side = 3;
    double cell_size_m = 250.0;
    int rb_count = 50; // T
    double load = 1.0; // L
    int users_per_cell = 0;
    int antennas = 8; // N
    int tau = 0;
    double gamma_th = 10.0; // linear SINR threshold
    int d_max = 8;
    double sigma_h2 = 1.0;
    double p_dbm = 10.0;
    double p_tau_dbm = 10.0;
    double snr_db = 10.0;
    int runs = 1000;
    std::uint64_t master_seed = 1;
    CombinerKind combiner = CombinerKind::kMmse;
    Mode mode = Mode::kMultiCell;
    DecodeOrder decode_order = DecodeOrder::kBatch;
    PilotPolicy pilot_policy = PilotPolicy::kAuto;
    int threads = 1;

    [[nodiscard]] int users() const
    {
        return users_per_cell > 0 ? users_per_cell
                                  : static_cast<int>(std::llround(load * rb_count));
    }
    [[nodiscard]] int tau_eff() const { return tau > 0 ? tau : users(); }
    [[nodiscard]] int grid_side_eff() const { return mode == Mode::kSingleCell ? 1 : grid_side; }
    [[nodiscard]] int center_cell() const
    {
        return (grid_side_eff() * grid_side_eff() - 1) / 2;
    }
    [[nodiscard]] double p_watts() const { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }
    [[nodiscard]] double p_tau_watts() const { return std::pow(10.0, (p_tau_dbm - 30.0) / 10.0); }
    [[nodiscard]] double n0() const
    {
        return p_watts() * sigma_h2 / std::pow(10.0, snr_db / 10.0);
    }

    void validate() const
    {
        if (grid_side < 1 || grid_side % 2 == 0)
            throw std::invalid_argument("config: grid_side must be odd and >= 1");
        if (cell_size_m <= 0.0)
            throw std::invalid_argument("config: cell_size_m must be > 0");
        if (rb_count < 1)
            throw std::invalid_argument("config: T must be >= 1");
        if (users() < 1)
            throw std::invalid_argument("config: M (or load * T) must be >= 1");
        if (antennas < 1)
            throw std::invalid_argument("config: N must be >= 1");
        if (tau_eff() < 1)
            throw std::invalid_argument("config: tau must be >= 1");
        if (d_max < 1 || d_max > rb_count)
            throw std::invalid_argument("config: d_max must be in [1, T]");
        if (gamma_th <= 0.0)
            throw std::invalid_argument("config: gamma_th must be > 0");
        if (sigma_h2 <= 0.0)
            throw std::invalid_argument("config: sigma_h2 must be > 0");
        if (p_tau_dbm < p_dbm)
            throw std::invalid_argument("config: P_tau must be >= P");
        if (runs < 1)
            throw std::invalid_argument("config: runs must be >= 1");
        if (threads < 1)
            throw std::invalid_argument("config: threads must be >= 1");
    }

    /**
     * Stable digest of the physically meaningful configuration. Fields are
     * serialized in a fixed canonical order with the load/M and tau tokens
     * resolved, so equivalent configurations digest identically regardless
     * of how (or in what order) they were specified. The worker count is
     * excluded: it must never affect results.
     */
    [[nodiscard]] std::string digest() const
    {
        std::ostringstream os;
        os << "grid_side=" << grid_side_eff() << ";cell_size_m=" << format_g17(cell_size_m)
           << ";T=" << rb_count << ";M=" << users() << ";N=" << antennas
           << ";tau=" << tau_eff() << ";gamma_th=" << format_g17(gamma_th)
           << ";d_max=" << d_max << ";sigma_h2=" << format_g17(sigma_h2)
           << ";P_dBm=" << format_g17(p_dbm) << ";P_tau_dBm=" << format_g17(p_tau_dbm)
           << ";snr_db=" << format_g17(snr_db) << ";runs=" << runs << ";seed=" << master_seed
           << ";combiner=" << (combiner == CombinerKind::kMmse ? "mmse" : "mrc")
           << ";mode=" << (mode == Mode::kMultiCell ? "multi-cell" : "single-cell")
           << ";decode_order=" << (decode_order == DecodeOrder::kBatch ? "batch" : "greedy")
           << ";pilot_policy=" << (pilot_policy == PilotPolicy::kAuto ? "auto" : "iid");
        const std::string s = os.str();
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

namespace detail
{
inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline int parse_int(const std::string &key, const std::string &value)
{
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + value +
                                    "'");
    }
}

inline double parse_double(const std::string &key, const std::string &value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
    }
}
} // namespace detail

/// Apply one key/value setting; shared by the config file parser and the CLI.
inline void apply_setting(SimConfig &cfg, const std::string &key, const std::string &value)
{
    using detail::parse_double;
    using detail::parse_int;
    if (key == "grid_side")
        cfg.grid_side = parse_int(key, value);
    else if (key == "cell_size_m")
        cfg.cell_size_m = parse_double(key, value);
    else if (key == "T" || key == "rb_count")
        cfg.rb_count = parse_int(key, value);
    else if (key == "L" || key == "load") {
        cfg.load = parse_double(key, value);
        cfg.users_per_cell = 0;
    } else if (key == "M" || key == "users_per_cell")
        cfg.users_per_cell = parse_int(key, value);
    else if (key == "N" || key == "antennas")
        cfg.antennas = parse_int(key, value);
    else if (key == "tau")
        cfg.tau = (value == "M" || value == "m") ? 0 : parse_int(key, value);
    else if (key == "gamma_th")
        cfg.gamma_th = parse_double(key, value);
    else if (key == "d_max")
        cfg.d_max = parse_int(key, value);
    else if (key == "sigma_h2")
        cfg.sigma_h2 = parse_double(key, value);
    else if (key == "P_dBm")
        cfg.p_dbm = parse_double(key, value);
    else if (key == "P_tau_dBm")
        cfg.p_tau_dbm = parse_double(key, value);
    else if (key == "snr_db")
        cfg.snr_db = parse_double(key, value);
    else if (key == "runs")
        cfg.runs = parse_int(key, value);
    else if (key == "seed") {
        try {
            std::size_t pos = 0;
            cfg.master_seed = std::stoull(value, &pos);
            if (pos != value.size())
                throw std::invalid_argument("");
        } catch (const std::exception &) {
            throw std::invalid_argument("config: 'seed' expects an unsigned integer, got '" +
                                        value + "'");
        }
    }
    else if (key == "combiner") {
        if (value == "mmse")
            cfg.combiner = CombinerKind::kMmse;
        else if (value == "mrc")
            cfg.combiner = CombinerKind::kMrc;
        else
            throw std::invalid_argument("config: combiner must be 'mmse' or 'mrc'");
    } else if (key == "mode") {
        if (value == "multi-cell")
            cfg.mode = Mode::kMultiCell;
        else if (value == "single-cell")
            cfg.mode = Mode::kSingleCell;
        else
            throw std::invalid_argument("config: mode must be 'multi-cell' or 'single-cell'");
    } else if (key == "decode_order") {
        if (value == "batch")
            cfg.decode_order = DecodeOrder::kBatch;
        else if (value == "greedy")
            cfg.decode_order = DecodeOrder::kGreedy;
        else
            throw std::invalid_argument("config: decode_order must be 'batch' or 'greedy'");
    } else if (key == "pilot_policy") {
        if (value == "auto")
            cfg.pilot_policy = PilotPolicy::kAuto;
        else if (value == "iid")
            cfg.pilot_policy = PilotPolicy::kIid;
        else
            throw std::invalid_argument("config: pilot_policy must be 'auto' or 'iid'");
    } else if (key == "threads")
        cfg.threads = parse_int(key, value);
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

/// Key/value document: one `key = value` per line, '#' starts a comment.
inline SimConfig parse_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open config file: " + path);
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " of " + path +
                                        " is not 'key = value'");
        try {
            apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument(std::string(e.what()) + " (line " +
                                        std::to_string(lineno) + " of " + path + ")");
        }
    }
    return cfg;
}

} // namespace mcirsa

#endif
