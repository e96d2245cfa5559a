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

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "mcirsa/mcirsa.hpp"

namespace
{

std::vector<double> parse_values(const std::string &csv)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string tok =
            csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!tok.empty()) {
            try {
                std::size_t pos = 0;
                values.push_back(std::stod(tok, &pos));
                if (pos != tok.size())
                    throw std::invalid_argument("");
            } catch (const std::exception &) {
                throw std::invalid_argument("--values: '" + tok + "' is not a number");
            }
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (values.empty())
        throw std::invalid_argument("--values: expected a comma-separated list of numbers");
    return values;
}

void run_one_sweep(const mcirsa::SimConfig &cfg, mcirsa::SweepVariable var,
                   const std::vector<double> &values, const std::string &out_path)
{
    const std::vector<mcirsa::SweepRow> rows = mcirsa::run_sweep(cfg, var, values);
    mcirsa::emit_outputs(rows, out_path);
    std::printf("# %s sweep, %d runs/point -> %s\n", mcirsa::sweep_name(var), cfg.runs,
                out_path.c_str());
    for (const mcirsa::SweepRow &r : rows)
        std::printf("%s=%-10g mean_throughput=%.6f stderr=%.6f\n", r.sweep.c_str(), r.value,
                    r.mean, r.std_error);
}

// Tag each row's sweep label with the curve it belongs to and append.
void append_curve(std::vector<mcirsa::SweepRow> &all, std::vector<mcirsa::SweepRow> rows,
                  const std::string &tag)
{
    for (mcirsa::SweepRow &r : rows) {
        r.sweep += ":" + tag;
        all.push_back(std::move(r));
    }
}

// Unattended full campaign: the load, pilot-length, antenna and SNR sweeps
// at full Monte Carlo depth. Expect hours of runtime.
void reproduce_figures(mcirsa::SimConfig base, const std::string &out_dir, int runs)
{
    base.runs = runs;
    std::vector<double> loads;
    for (double l = 0.2; l <= 5.0 + 1e-9; l += 0.2)
        loads.push_back(l);

    // throughput vs load, tau = M
    {
        std::vector<mcirsa::SweepRow> all;
        for (const int n : {8, 16, 32}) {
            mcirsa::SimConfig cfg = base;
            cfg.mode = mcirsa::Mode::kMultiCell;
            cfg.antennas = n;
            append_curve(all, mcirsa::run_sweep(cfg, mcirsa::SweepVariable::kLoad, loads),
                         "mc_N" + std::to_string(n));
        }
        for (const int n : {4, 8}) {
            mcirsa::SimConfig cfg = base;
            cfg.mode = mcirsa::Mode::kSingleCell;
            cfg.antennas = n;
            append_curve(all, mcirsa::run_sweep(cfg, mcirsa::SweepVariable::kLoad, loads),
                         "sc_N" + std::to_string(n));
        }
        mcirsa::write_csv(all, out_dir + "/throughput_vs_load.csv");
        std::printf("wrote %s\n", (out_dir + "/throughput_vs_load.csv").c_str());
    }
    // throughput vs pilot length, N = 32
    {
        std::vector<double> taus;
        for (int t = 5; t <= 50; t += 5)
            taus.push_back(t);
        std::vector<mcirsa::SweepRow> all;
        for (const double l : {1.0, 2.0, 3.0, 4.0})
            for (const mcirsa::Mode mode : {mcirsa::Mode::kMultiCell, mcirsa::Mode::kSingleCell}) {
                mcirsa::SimConfig cfg = base;
                cfg.antennas = 32;
                cfg.load = l;
                cfg.users_per_cell = 0;
                cfg.mode = mode;
                const std::string tag = (mode == mcirsa::Mode::kMultiCell ? "mc_L" : "sc_L") +
                                        std::to_string(static_cast<int>(l));
                append_curve(all, mcirsa::run_sweep(cfg, mcirsa::SweepVariable::kTau, taus), tag);
            }
        mcirsa::write_csv(all, out_dir + "/throughput_vs_tau.csv");
        std::printf("wrote %s\n", (out_dir + "/throughput_vs_tau.csv").c_str());
    }
    // throughput vs antennas, tau = M
    {
        const std::vector<double> antennas = {1, 2, 4, 8, 16, 32, 64};
        std::vector<mcirsa::SweepRow> all;
        for (const double snr : {10.0, -5.0})
            for (const double l : {1.0, 2.0, 3.0, 4.0}) {
                mcirsa::SimConfig cfg = base;
                cfg.snr_db = snr;
                cfg.load = l;
                cfg.users_per_cell = 0;
                const std::string tag = "L" + std::to_string(static_cast<int>(l)) + "_snr" +
                                        std::to_string(static_cast<int>(snr));
                append_curve(all,
                             mcirsa::run_sweep(cfg, mcirsa::SweepVariable::kAntennas, antennas),
                             tag);
            }
        mcirsa::write_csv(all, out_dir + "/throughput_vs_antennas.csv");
        std::printf("wrote %s\n", (out_dir + "/throughput_vs_antennas.csv").c_str());
    }
    // throughput vs SNR, tau = M
    {
        std::vector<double> snrs;
        for (double s = -20.0; s <= 20.0 + 1e-9; s += 5.0)
            snrs.push_back(s);
        std::vector<mcirsa::SweepRow> all;
        for (const int n : {16, 32, 64})
            for (const double l : {1.0, 2.0, 3.0, 4.0}) {
                mcirsa::SimConfig cfg = base;
                cfg.antennas = n;
                cfg.load = l;
                cfg.users_per_cell = 0;
                const std::string tag =
                    "N" + std::to_string(n) + "_L" + std::to_string(static_cast<int>(l));
                append_curve(all, mcirsa::run_sweep(cfg, mcirsa::SweepVariable::kSnrDb, snrs),
                             tag);
            }
        mcirsa::write_csv(all, out_dir + "/throughput_vs_snr.csv");
        std::printf("wrote %s\n", (out_dir + "/throughput_vs_snr.csv").c_str());
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mcirsa: Monte Carlo throughput simulator for multi-cell IRSA random access\n"
                 "over massive-MIMO uplinks with MMSE channel estimation and SIC decoding"};

    std::string config_path, sweep_var, values_csv, out_path = "results.csv", figures_dir;
    std::vector<std::string> overrides;
    int runs = -1;
    long long seed = -1;
    int threads = -1;
    std::string mode, combiner;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--sweep", sweep_var, "sweep variable: L, tau, N or snr_db");
    app.add_option("--values", values_csv, "comma-separated sweep values");
    app.add_option("--runs", runs, "Monte Carlo runs per point");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_path, "output CSV path (plot script written next to it)");
    app.add_option("--mode", mode, "multi-cell or single-cell");
    app.add_option("--combiner", combiner, "mmse or mrc");
    app.add_option("--threads", threads, "worker threads (never affects results)");
    app.add_option("--set", overrides, "extra 'key=value' overrides")->take_all();
    app.add_option("--reproduce-figures", figures_dir,
                   "run the full unattended sweep campaign into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        mcirsa::SimConfig cfg;
        if (!config_path.empty())
            cfg = mcirsa::parse_config_file(config_path);
        for (const std::string &kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
            mcirsa::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!mode.empty())
            mcirsa::apply_setting(cfg, "mode", mode);
        if (!combiner.empty())
            mcirsa::apply_setting(cfg, "combiner", combiner);
        if (runs > 0)
            cfg.runs = runs;
        if (seed >= 0)
            cfg.master_seed = static_cast<std::uint64_t>(seed);
        if (threads > 0)
            cfg.threads = threads;
        cfg.validate();

        if (!figures_dir.empty()) {
            reproduce_figures(cfg, figures_dir, cfg.runs);
            return 0;
        }

        if (!sweep_var.empty()) {
            if (values_csv.empty())
                throw std::invalid_argument("--sweep requires --values");
            run_one_sweep(cfg, mcirsa::sweep_from_name(sweep_var), parse_values(values_csv),
                          out_path);
        } else {
            // single point, emitted as a one-value load sweep
            run_one_sweep(cfg, mcirsa::SweepVariable::kLoad,
                          {cfg.users_per_cell > 0
                               ? static_cast<double>(cfg.users_per_cell) / cfg.rb_count
                               : cfg.load},
                          out_path);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
