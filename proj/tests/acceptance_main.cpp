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
//
// Acceptance suite: every check runs end to end at its stated tolerance and
// prints one PASS/FAIL line. Run all criteria with no arguments or a subset
// with --criterion <k> (repeatable).

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcirsa/mcirsa.hpp"
#include "test_fixtures.hpp"

using namespace mcirsa;
using namespace mcirsa::testing;

namespace
{

struct CheckLog
{
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &msg)
    {
        if (!cond)
            ok = false;
        if (!detail.empty())
            detail += "; ";
        detail += (cond ? "" : "FAILED: ") + msg;
    }
};

std::string fmt(const char *format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
// Estimation statistics on a random 2-cell, tau=4, M=4 instance: empirical
// error variance within 3% of delta, estimate/error correlation within 3
// standard errors of zero, in under one minute.
bool criterion_1(std::string &detail)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckLog log;
    Scenario sc = make_scenario(9101, 2, 4, 4, 1e-3);
    const StackedInstance inst = sc.instance();
    const int n = 4, draws = 10000;
    const Eigen::Index m_bar = inst.size();

    EstimateBlock ref = mmse_estimate(ComplexMatrix::Zero(n, sc.book.tau), inst, sc.n0);
    error_variances(ref, inst, sc.n0);

    RealVector err_acc = RealVector::Zero(m_bar);
    ComplexVector cross_acc = ComplexVector::Zero(m_bar);
    for (int d = 0; d < draws; ++d) {
        const auto [channels, obs] = sc.realize(9102, static_cast<std::uint64_t>(d), n);
        const EstimateBlock block = mmse_estimate(obs.at(0, 0), inst, sc.n0);
        for (Eigen::Index col = 0; col < m_bar; ++col) {
            const ComplexVector err =
                block.h_hat.col(col) -
                channels.at(0, 0).col(inst.users[static_cast<std::size_t>(col)].global);
            err_acc(col) += err.squaredNorm() / n;
            cross_acc(col) += block.h_hat.col(col).dot(err) / static_cast<double>(n);
        }
    }
    double worst_var = 0.0, worst_corr = 0.0;
    for (Eigen::Index col = 0; col < m_bar; ++col) {
        const double rel = std::abs(err_acc(col) / draws - ref.delta(col)) / ref.delta(col);
        worst_var = std::max(worst_var, rel);
        const double scale = std::sqrt(ref.varsigma(col) * ref.delta(col));
        const double corr = std::abs(cross_acc(col)) / (draws * scale);
        worst_corr = std::max(worst_corr, corr * std::sqrt(static_cast<double>(draws * n)));
    }
    log.require(worst_var <= 0.03,
                fmt("worst |empirical var - delta|/delta = %.4f (tol 0.03)", worst_var));
    log.require(worst_corr <= 3.0,
                fmt("worst estimate/error correlation = %.2f standard errors (tol 3)", worst_corr));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.require(secs < 60.0, fmt("runtime %.1f s (limit 60 s)", secs));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 2
// Closed-form reuse variances agree with the general pipeline to 1e-9
// relative on 100 random codebook instances; delta + varsigma = beta sigma^2
// to 1e-12.
bool criterion_2(std::string &detail)
{
    CheckLog log;
    double worst_rel = 0.0, worst_identity = 0.0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const int q = 1 + static_cast<int>(trial % 3);
        const int m = 1 + static_cast<int>((trial * 7) % 4);
        const int tau = 1 + static_cast<int>((trial * 3) % 8);
        Scenario sc = make_scenario(9200 + trial, q, m, tau, 1e-4 * (1.0 + trial % 13));
        const StackedInstance inst = sc.instance();
        EstimateBlock general = mmse_estimate(ComplexMatrix::Zero(2, tau), inst, sc.n0);
        error_variances(general, inst, sc.n0);
        for (Eigen::Index col = 0; col < inst.size(); ++col) {
            const ReuseVariance rv = reuse_variance(inst, col, sc.n0);
            const double b = inst.users[static_cast<std::size_t>(col)].gain;
            worst_rel = std::max(worst_rel,
                                 std::abs(rv.varsigma - general.varsigma(col)) / rv.varsigma);
            worst_rel = std::max(worst_rel, std::abs(rv.delta - general.delta(col)) /
                                                std::max(rv.delta, 1e-300));
            worst_identity =
                std::max(worst_identity, std::abs(general.delta(col) + general.varsigma(col) - b) / b);
            worst_identity = std::max(worst_identity, std::abs(rv.delta + rv.varsigma - b) / b);
        }
    }
    log.require(worst_rel <= 1e-9,
                fmt("closed form vs general pipeline: worst rel diff %.2e (tol 1e-9)", worst_rel));
    log.require(worst_identity <= 1e-12,
                fmt("delta = beta*sigma_h^2 - varsigma: worst rel defect %.2e (tol 1e-12)",
                    worst_identity));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 3
// The two estimator forms and the two combiner forms agree to 1e-9 relative
// on 100 random instances spanning tau < M_bar and tau > M_bar.
bool criterion_3(std::string &detail)
{
    CheckLog log;
    double worst_est = 0.0, worst_comb = 0.0;
    int tall = 0, wide = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const int tau = 2 + static_cast<int>(trial % 9);
        const int m_bar = 1 + static_cast<int>((trial * 5) % 14);
        (m_bar > tau ? wide : tall) += 1;
        const RawInstance raw = random_raw_instance(9300 + trial, tau, m_bar);
        const double n0 = 1e-4 * (1.0 + trial % 7);

        const ComplexMatrix c1 = mmse_correlation(raw.pilots, raw.gains, n0, EstimatorForm::kMBar);
        const ComplexMatrix c2 = mmse_correlation(raw.pilots, raw.gains, n0, EstimatorForm::kTau);
        worst_est = std::max(worst_est, max_abs(c1 - c2) / std::max(max_abs(c1), 1e-300));

        EstimateBlock block;
        block.h_hat = complex_gaussian(derive_stream(9350 + trial, {0}),
                                       2 + static_cast<Eigen::Index>(trial % 6), m_bar, 1.0);
        block.delta = RealVector::Zero(m_bar);
        block.in_cell_count = raw.in_cell_count;
        const double est_power = 0.01 * static_cast<double>(trial % 5);
        const ComplexMatrix a1 = mmse_combiner(block, raw.powers, n0, est_power, CombinerForm::kN);
        const ComplexMatrix a2 =
            mmse_combiner(block, raw.powers, n0, est_power, CombinerForm::kMBar);
        worst_comb = std::max(worst_comb, max_abs(a1 - a2) / std::max(max_abs(a1), 1e-300));
    }
    log.require(tall >= 20 && wide >= 20,
                fmt("instances span both shapes (tau>=M_bar: %d, tau<M_bar: %d)", tall, wide));
    log.require(worst_est <= 1e-9,
                fmt("estimator forms: worst rel diff %.2e (tol 1e-9)", worst_est));
    log.require(worst_comb <= 1e-9,
                fmt("combiner forms: worst rel diff %.2e (tol 1e-9)", worst_comb));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 4
// The Monte Carlo power decomposition reproduces all five SINR components
// within 3 standard errors on 20 random instances, 1e5 symbol draws each.
bool criterion_4(std::string &detail)
{
    CheckLog log;
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const int q = 1 + static_cast<int>(trial % 2);
        const int m = 1 + static_cast<int>((trial * 3) % 3);
        const int tau = 2 + static_cast<int>(trial % 3);
        Scenario sc = make_scenario(9400 + trial, q, m, tau, 1e-3);
        const StackedInstance inst = sc.instance();
        const auto [channels, obs] = sc.realize(9450 + trial, 0, 4);
        EstimateBlock block = mmse_estimate(obs.at(0, 0), inst, sc.n0);
        error_variances(block, inst, sc.n0);
        const RealVector p = inst.data_powers();

        ComplexVector a;
        if (trial % 2 == 0) {
            a = block.h_hat.col(0); // MRC column
        } else {
            const double est = estimation_error_power(block, p);
            a = mmse_combiner(block, p, sc.n0, est).col(0);
        }
        const OraclePowers op = post_combined_power_oracle(derive_stream(9470 + trial, {0}),
                                                           block, p, sc.n0, a, 0, 100000);
        for (std::size_t i = 0; i < 5; ++i) {
            const double gap = std::abs(op.empirical[i] - op.predicted[i]);
            const double se = std::max(op.std_error[i], 1e-300);
            if (op.predicted[i] == 0.0 && op.empirical[i] == 0.0)
                continue; // structurally absent term
            worst = std::max(worst, gap / se);
        }
        const double total_gap =
            std::abs(op.total_empirical - op.total_predicted) / std::max(op.total_std_error, 1e-300);
        worst = std::max(worst, total_gap);
    }
    log.require(worst <= 3.0,
                fmt("worst |empirical - predicted| over 20 instances = %.2f standard errors (tol 3)",
                    worst));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 5
// Exact MRC SINR converges to the deterministic equivalent: the median gap
// over 200 fading draws decreases over N in {64, 256, 1024} and is <= 0.1 at
// N = 1024, on fixed instances.
bool criterion_5(std::string &detail)
{
    CheckLog log;
    // Instances where the target user is pilot-contamination limited: the
    // coherent interference scales with N and dominates, so the SINR
    // concentrates around the deterministic equivalent. Targets without
    // meaningful reuse keep an O(1) random interference residual at every N
    // and no convergence is claimed for them.
    std::vector<Scenario> picked;
    for (std::uint64_t seed = 9500; picked.size() < 3 && seed < 9600; ++seed) {
        Scenario sc = make_scenario(seed, 2, 4, 2, 1e-3);
        const StackedInstance probe = sc.instance();
        EstimateBlock ref = mmse_estimate(ComplexMatrix::Zero(2, sc.book.tau), probe, sc.n0);
        error_variances(ref, probe, sc.n0);
        const AsymptoticBreakdown a64 = asymptotic_sinr_mrc(ref, probe, sc.n0, 0, 64);
        if (a64.int_c >= a64.epsilon * (a64.int_nc + sc.n0))
            picked.push_back(std::move(sc));
    }
    for (std::size_t instance = 0; instance < picked.size(); ++instance) {
        Scenario &sc = picked[instance];
        const StackedInstance inst = sc.instance();
        EstimateBlock ref = mmse_estimate(ComplexMatrix::Zero(2, sc.book.tau), inst, sc.n0);
        error_variances(ref, inst, sc.n0);
        const RealVector p = inst.data_powers();

        std::vector<double> medians;
        for (const int n : {64, 256, 1024}) {
            const AsymptoticBreakdown asym = asymptotic_sinr_mrc(ref, inst, sc.n0, 0, n);
            std::vector<double> gaps;
            gaps.reserve(200);
            for (int d = 0; d < 200; ++d) {
                const auto [channels, obs] =
                    sc.realize(9550 + instance, static_cast<std::uint64_t>(d), n);
                EstimateBlock block = mmse_estimate(obs.at(0, 0), inst, sc.n0);
                error_variances(block, inst, sc.n0);
                const double rho =
                    sinr(block, p, sc.n0, ComplexVector(block.h_hat.col(0)), 0).sinr;
                gaps.push_back(std::abs(rho / asym.sinr_bar - 1.0));
            }
            std::sort(gaps.begin(), gaps.end());
            medians.push_back(gaps[gaps.size() / 2]);
        }
        log.require(medians[0] > medians[1] && medians[1] > medians[2],
                    fmt("instance %llu medians decrease: %.4f > %.4f > %.4f",
                        static_cast<unsigned long long>(instance), medians[0], medians[1],
                        medians[2]));
        log.require(medians[2] <= 0.1,
                    fmt("instance %llu median at N=1024: %.4f (tol 0.1)",
                        static_cast<unsigned long long>(instance), medians[2]));
    }
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 6
// Multi-cell MMSE combining dominates MRC for every in-cell user on 100
// random instances.
bool criterion_6(std::string &detail)
{
    CheckLog log;
    double worst_margin = 1.0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const int q = 1 + static_cast<int>(trial % 3);
        const int m = 1 + static_cast<int>((trial * 5) % 3);
        const int tau = 1 + static_cast<int>((trial * 7) % 6);
        const int n = 2 << (trial % 3);
        Scenario sc = make_scenario(9600 + trial, q, m, tau, 1e-4 * (1.0 + trial % 9));
        const StackedInstance inst = sc.instance();
        const auto [channels, obs] = sc.realize(9650 + trial, 0, n);
        EstimateBlock block = mmse_estimate(obs.at(0, 0), inst, sc.n0);
        error_variances(block, inst, sc.n0);
        const RealVector p = inst.data_powers();
        const double est = estimation_error_power(block, p);
        const ComplexMatrix a = mmse_combiner(block, p, sc.n0, est);
        for (Eigen::Index col = 0; col < block.in_cell_count; ++col) {
            const double rho_mmse = sinr(block, p, sc.n0, ComplexVector(a.col(col)), col).sinr;
            const double rho_mrc =
                sinr(block, p, sc.n0, ComplexVector(block.h_hat.col(col)), col).sinr;
            worst_margin = std::min(worst_margin, rho_mmse / rho_mrc);
        }
    }
    log.require(worst_margin >= 1.0 - 1e-9,
                fmt("min rho_MMSE/rho_MRC over all users = %.12f (must be >= 1 - 1e-9)",
                    worst_margin));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 7
// Desk-scale throughput-vs-load peaks (200 runs/point, gamma_th = 10,
// tau = M): multi-cell peaks near (L, T_C) = (4, 4), (2.6, 2.6), (1.2, 1.2)
// for N = 32, 16, 8 within +-0.3; single-cell N=8 peak near (4, 4) within
// +-0.3; SC-vs-MC peak drop at N=8 within 10 percentage points of 70%.
struct PeakResult
{
    double best_load = 0.0;
    double best_value = 0.0;
};

PeakResult measure_peak(Mode mode, int n_antennas, const std::vector<double> &loads, int runs,
                        std::uint64_t seed)
{
    SimConfig cfg;
    cfg.mode = mode;
    cfg.antennas = n_antennas;
    cfg.runs = runs;
    cfg.master_seed = seed;
    const RngStream master(seed);
    PeakResult peak;
    std::string curve;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        cfg.load = loads[i];
        cfg.users_per_cell = 0;
        const PointResult pr = run_point(cfg, master.child(i));
        curve += fmt(" %.1f:%.3f", loads[i], pr.mean);
        if (pr.mean > peak.best_value) {
            peak.best_value = pr.mean;
            peak.best_load = loads[i];
        }
    }
    std::printf("    %s N=%-2d curve:%s\n", mode == Mode::kSingleCell ? "SC" : "MC", n_antennas,
                curve.c_str());
    std::fflush(stdout);
    return peak;
}

bool criterion_7(std::string &detail)
{
    CheckLog log;
    const int runs = 200;
    const std::vector<double> high{3.4, 3.7, 4.0, 4.3, 4.6};
    const std::vector<double> mid{2.0, 2.3, 2.6, 2.9, 3.2};
    const std::vector<double> low{0.6, 0.9, 1.2, 1.5, 1.8};

    const PeakResult mc32 = measure_peak(Mode::kMultiCell, 32, high, runs, 777001);
    const PeakResult mc16 = measure_peak(Mode::kMultiCell, 16, mid, runs, 777002);
    const PeakResult mc8 = measure_peak(Mode::kMultiCell, 8, low, runs, 777003);
    const PeakResult sc8 = measure_peak(Mode::kSingleCell, 8, high, runs, 777004);

    const auto check_peak = [&log](const char *name, const PeakResult &peak, double l_target,
                                   double v_target) {
        log.require(std::abs(peak.best_value - v_target) <= 0.3,
                    fmt("%s peak value %.3f vs %.1f (tol 0.3)", name, peak.best_value, v_target));
        log.require(std::abs(peak.best_load - l_target) <= 0.3,
                    fmt("%s peak load %.2f vs %.1f (tol 0.3)", name, peak.best_load, l_target));
    };
    check_peak("MC N=32", mc32, 4.0, 4.0);
    check_peak("MC N=16", mc16, 2.6, 2.6);
    check_peak("MC N=8", mc8, 1.2, 1.2);
    check_peak("SC N=8", sc8, 4.0, 4.0);

    const double drop = 1.0 - mc8.best_value / sc8.best_value;
    log.require(std::abs(drop - 0.70) <= 0.10,
                fmt("SC-vs-MC peak drop at N=8: %.1f%% vs 70%% (tol 10pp)", 100.0 * drop));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 8
// Pilot-length trend at N=32 (200 runs): throughput >= 0.95 at (L=1,
// tau=10) and >= 1.9 at (L=2, tau=30).
bool criterion_8(std::string &detail)
{
    CheckLog log;
    SimConfig cfg;
    cfg.antennas = 32;
    cfg.runs = 200;
    cfg.master_seed = 778001;
    const RngStream master(cfg.master_seed);

    cfg.load = 1.0;
    cfg.users_per_cell = 0;
    cfg.tau = 10;
    const PointResult p1 = run_point(cfg, master.child(0));
    log.require(p1.mean >= 0.95,
                fmt("L=1, tau=10: throughput %.3f (needs >= 0.95)", p1.mean));

    cfg.load = 2.0;
    cfg.users_per_cell = 0;
    cfg.tau = 30;
    const PointResult p2 = run_point(cfg, master.child(1));
    log.require(p2.mean >= 1.9, fmt("L=2, tau=30: throughput %.3f (needs >= 1.9)", p2.mean));
    detail = log.detail;
    return log.ok;
}

// ---------------------------------------------------------------- criterion 9
// Linear region: mean throughput equals L within 5% relative for
// L in {0.2, 0.5} at N=32, tau=M, SNR 10 dB.
bool criterion_9(std::string &detail)
{
    CheckLog log;
    SimConfig cfg;
    cfg.antennas = 32;
    cfg.runs = 200;
    cfg.master_seed = 779001;
    const RngStream master(cfg.master_seed);
    int i = 0;
    for (const double load : {0.2, 0.5}) {
        cfg.load = load;
        cfg.users_per_cell = 0;
        const PointResult pr = run_point(cfg, master.child(static_cast<std::uint64_t>(i++)));
        log.require(std::abs(pr.mean - load) <= 0.05 * load,
                    fmt("L=%.1f: mean throughput %.4f (tol 5%% relative)", load, pr.mean));
    }
    detail = log.detail;
    return log.ok;
}

// --------------------------------------------------------------- criterion 10
// Determinism: identical (config, master_seed) produces byte-identical CSV
// under worker counts 1 and 8.
bool criterion_10(std::string &detail)
{
    CheckLog log;
    SimConfig cfg;
    cfg.rb_count = 20;
    cfg.load = 1.0;
    cfg.antennas = 8;
    cfg.runs = 16;
    cfg.master_seed = 780001;
    const std::vector<double> values{0.5, 1.0};

    const auto emit = [&cfg, &values](int threads, const std::string &path) {
        SimConfig c = cfg;
        c.threads = threads;
        write_csv(run_sweep(c, SweepVariable::kLoad, values), path);
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        std::remove(path.c_str());
        return ss.str();
    };
    const std::string csv1 = emit(1, "acceptance_workers1.csv");
    const std::string csv8 = emit(8, "acceptance_workers8.csv");
    log.require(!csv1.empty(), "CSV with 1 worker is non-empty");
    log.require(csv1 == csv8, "CSV bytes identical for 1 and 8 workers");
    detail = log.detail;
    return log.ok;
}

struct Criterion
{
    int id;
    const char *title;
    std::function<bool(std::string &)> run;
};

const std::vector<Criterion> &criteria()
{
    static const std::vector<Criterion> all = {
        {1, "estimation error statistics match the closed-form variances", criterion_1},
        {2, "codebook closed form consistent with the general estimator", criterion_2},
        {3, "estimator and combiner form equivalences", criterion_3},
        {4, "five-term power decomposition oracle", criterion_4},
        {5, "asymptotic MRC SINR convergence", criterion_5},
        {6, "multi-cell MMSE dominates MRC", criterion_6},
        {7, "throughput-vs-load peaks, desk scale", criterion_7},
        {8, "pilot-length trend, desk scale", criterion_8},
        {9, "linear region throughput", criterion_9},
        {10, "byte-identical output across worker counts", criterion_10},
    };
    return all;
}

} // namespace

int main(int argc, char **argv)
{
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected.insert(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (const Criterion &c : criteria())
                std::printf("%2d  %s\n", c.id, c.title);
            return 0;
        } else {
            std::fprintf(stderr, "usage: %s [--list] [--criterion k]...\n", argv[0]);
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion &c : criteria()) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        failures += !ok;
        std::printf("criterion %2d [%s] %s%s%s\n", c.id, ok ? "PASS" : "FAIL", c.title,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
