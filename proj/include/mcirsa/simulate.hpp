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

#ifndef MCIRSA_SIMULATE_HPP
#define MCIRSA_SIMULATE_HPP

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "access.hpp"
#include "config.hpp"
#include "decoder.hpp"
#include "pilots.hpp"
#include "topology.hpp"

namespace mcirsa
{

/**
 * One Monte Carlo run: fresh user drop, access pattern, pilot assignment,
 * channels and noise, then SIC decoding of the center cell. Everything is a
 * pure function of (config, run stream), so runs can execute on any worker
 * in any order without changing results.
 */
inline double simulate_one_run(const SimConfig &cfg, const RngStream &run_stream)
{
    const Grid grid = build_grid(cfg.grid_side_eff(), cfg.cell_size_m);
    const Deployment dep = make_deployment(run_stream.child(kTagUserDrop), grid, cfg.users(),
                                           cfg.p_watts(), cfg.p_tau_watts());
    const AccessMatrix access = build_access_matrix(run_stream.child(kTagAccess), dep.Q, dep.M,
                                                    cfg.rb_count, soliton_pmf(cfg.d_max));
    const PilotBook book = dft_codebook(cfg.tau_eff(), cfg.p_tau_watts());
    const PilotAssignment asg =
        assign_pilots(run_stream.child(kTagPilotAssign), dep.Q, dep.M, book, cfg.pilot_policy);
    CellRealization real = build_cell_realization(run_stream, dep, access, book, asg,
                                                  cfg.antennas, dep.center_cell(), cfg.n0(),
                                                  cfg.sigma_h2);
    DecodeSettings settings;
    settings.gamma_th = cfg.gamma_th;
    settings.combiner = cfg.combiner;
    settings.order = cfg.decode_order;
    settings.route = EstimatorRoute::kCodebook;
    return sic_decode(real, book, settings).first.throughput;
}

struct PointResult
{
    double mean = 0.0;
    double std_error = 0.0;
    int runs = 0;
    std::vector<double> per_run;
};

/**
 * Monte Carlo average of the center-cell throughput over cfg.runs
 * independent runs. Run r always uses substream point_stream.child(r) and
 * results are stored by run index, so the aggregate is identical for any
 * worker count.
 */
inline PointResult run_point(const SimConfig &cfg, const RngStream &point_stream)
{
    cfg.validate();
    PointResult result;
    result.runs = cfg.runs;
    result.per_run.assign(static_cast<std::size_t>(cfg.runs), 0.0);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.runs)
                return;
            try {
                result.per_run[static_cast<std::size_t>(r)] =
                    simulate_one_run(cfg, point_stream.child(static_cast<std::uint64_t>(r)));
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };

    const int n_workers = std::min(cfg.threads, cfg.runs);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
        for (std::thread &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    double sum = 0.0;
    for (double v : result.per_run)
        sum += v;
    result.mean = sum / cfg.runs;
    if (cfg.runs > 1) {
        double ss = 0.0;
        for (double v : result.per_run)
            ss += (v - result.mean) * (v - result.mean);
        result.std_error = std::sqrt(ss / (cfg.runs - 1)) / std::sqrt(static_cast<double>(cfg.runs));
    }
    return result;
}

enum class SweepVariable
{
    kLoad,
    kTau,
    kAntennas,
    kSnrDb,
};

inline const char *sweep_name(SweepVariable v)
{
    switch (v) {
    case SweepVariable::kLoad:
        return "L";
    case SweepVariable::kTau:
        return "tau";
    case SweepVariable::kAntennas:
        return "N";
    case SweepVariable::kSnrDb:
        return "snr_db";
    }
    return "?";
}

inline SweepVariable sweep_from_name(const std::string &name)
{
    if (name == "L" || name == "load")
        return SweepVariable::kLoad;
    if (name == "tau")
        return SweepVariable::kTau;
    if (name == "N" || name == "antennas")
        return SweepVariable::kAntennas;
    if (name == "snr_db")
        return SweepVariable::kSnrDb;
    throw std::invalid_argument("unknown sweep variable '" + name + "' (expected L, tau, N or snr_db)");
}

inline void apply_sweep_value(SimConfig &cfg, SweepVariable var, double value)
{
    switch (var) {
    case SweepVariable::kLoad:
        cfg.load = value;
        cfg.users_per_cell = 0;
        break;
    case SweepVariable::kTau:
        cfg.tau = static_cast<int>(std::llround(value));
        break;
    case SweepVariable::kAntennas:
        cfg.antennas = static_cast<int>(std::llround(value));
        break;
    case SweepVariable::kSnrDb:
        cfg.snr_db = value;
        break;
    }
}

/// One emitted result row.
struct SweepRow
{
    std::string sweep;
    double value = 0.0;
    int cell = 0;
    double mean = 0.0;
    double std_error = 0.0;
    int runs = 0;
    std::string digest;
};

/**
 * One run_point per sweep value. Point i draws from substream
 * master.child(i), so adding, removing or reordering sweep values never
 * perturbs the other points.
 */
inline std::vector<SweepRow> run_sweep(const SimConfig &base, SweepVariable var,
                                       const std::vector<double> &values)
{
    if (values.empty())
        throw std::invalid_argument("run_sweep: values must be non-empty");
    const RngStream master(base.master_seed);
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SimConfig cfg = base;
        apply_sweep_value(cfg, var, values[i]);
        const PointResult pr = run_point(cfg, master.child(static_cast<std::uint64_t>(i)));
        SweepRow row;
        row.sweep = sweep_name(var);
        row.value = values[i];
        row.cell = cfg.center_cell();
        row.mean = pr.mean;
        row.std_error = pr.std_error;
        row.runs = pr.runs;
        row.digest = cfg.digest();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mcirsa

#endif
