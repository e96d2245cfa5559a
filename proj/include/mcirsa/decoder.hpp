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

#ifndef MCIRSA_DECODER_HPP
#define MCIRSA_DECODER_HPP

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "receiver.hpp"

namespace mcirsa
{

enum class CombinerKind
{
    kMmse,
    kMrc,
};

enum class DecodeOrder
{
    kBatch,  // all users above threshold decode together, then recompute
    kGreedy, // one user per iteration, highest SINR first
};

enum class EstimatorRoute
{
    kCodebook, // per-class closed form (requires codebook pilots)
    kGeneral,  // matrix MMSE path, any pilots
};

struct DecodeSettings
{
    double gamma_th = 10.0;
    CombinerKind combiner = CombinerKind::kMmse;
    DecodeOrder order = DecodeOrder::kBatch;
    EstimatorRoute route = EstimatorRoute::kCodebook;
};

/// Per-cell decoding progress. decode_iteration is 0 while undecoded.
struct DecoderState
{
    std::vector<std::uint8_t> decoded;
    std::vector<int> decode_iteration;
    int iterations_used = 0;

    [[nodiscard]] int decoded_count() const
    {
        return static_cast<int>(std::count(decoded.begin(), decoded.end(), std::uint8_t{1}));
    }

    [[nodiscard]] std::vector<int> undecoded_set() const
    {
        std::vector<int> s;
        for (std::size_t i = 0; i < decoded.size(); ++i)
            if (!decoded[i])
                s.push_back(static_cast<int>(i));
        return s;
    }
};

struct RunMetrics
{
    int decoded = 0;
    double throughput = 0.0;
    int iterations = 0;
};

/// decoded packets / RB count
inline double throughput(const DecoderState &state, int rb_count)
{
    return static_cast<double>(state.decoded_count()) / rb_count;
}

/**
 * Everything one BS sees for one RB. Transmitters are ordered in-cell first
 * (all of them, decoded or not), then out-of-cell in ascending order; the
 * stacked population of an iteration is the undecoded in-cell prefix subset
 * plus every out-of-cell column. y is updated in place by SIC.
 */
struct RbRealization
{
    std::vector<StackedUser> transmitters;
    int in_cell_count = 0;
    ComplexMatrix in_cell_channels; // N x in_cell_count, kept for SIC removal
    ComplexMatrix y;                // N x tau
};

/// One cell's decode inputs: per-RB observations plus replica bookkeeping.
struct CellRealization
{
    int cell = 0;
    int users_per_cell = 0;
    int n_antennas = 0;
    int rb_count = 0;
    double n0 = 0.0;
    double sigma_h2 = 1.0;
    std::vector<RbRealization> rbs;
    // per in-cell user: (rb, in-cell column position) of each replica
    std::vector<std::vector<std::pair<int, int>>> replicas;
};

/**
 * Draw channels and noise for one observing BS and synthesize its received
 * pilot signals. Out-of-cell channel columns are folded into Y and dropped;
 * in-cell columns are retained so decoded users can be removed exactly.
 */
inline CellRealization build_cell_realization(const RngStream &run_stream, const Deployment &dep,
                                              const AccessMatrix &access, const PilotBook &book,
                                              const PilotAssignment &asg, int n_antennas, int cell,
                                              double n0, double sigma_h2)
{
    CellRealization real;
    real.cell = cell;
    real.users_per_cell = dep.M;
    real.n_antennas = n_antennas;
    real.rb_count = access.T;
    real.n0 = n0;
    real.sigma_h2 = sigma_h2;
    real.rbs.resize(static_cast<std::size_t>(access.T));
    real.replicas.resize(static_cast<std::size_t>(dep.M));

    for (int t = 0; t < access.T; ++t) {
        RbRealization &rb = real.rbs[static_cast<std::size_t>(t)];
        std::vector<int> in_cell, out_cell;
        for (int u : access.rb_users[static_cast<std::size_t>(t)])
            (u / dep.M == cell ? in_cell : out_cell).push_back(u);
        rb.in_cell_count = static_cast<int>(in_cell.size());

        std::vector<int> order = in_cell;
        order.insert(order.end(), out_cell.begin(), out_cell.end());
        rb.transmitters.resize(order.size());
        rb.in_cell_channels.resize(n_antennas, rb.in_cell_count);
        rb.y = noise_matrix(run_stream, t, cell, n_antennas, book.tau, n0);
        for (std::size_t n = 0; n < order.size(); ++n) {
            const int u = order[n];
            StackedUser &su = rb.transmitters[n];
            su.cell = u / dep.M;
            su.user = u % dep.M;
            su.global = u;
            su.pilot_index = asg.index[static_cast<std::size_t>(u)];
            su.gain = dep.beta(u, cell) * sigma_h2;
            su.data_power = dep.data_power(u);
            su.pilot_power = dep.pilot_power(u);
            const ComplexVector h =
                channel_column(run_stream, t, cell, u, n_antennas, su.gain);
            rb.y.noalias() += h * user_pilot(dep, book, asg, u).adjoint();
            if (su.cell == cell) {
                rb.in_cell_channels.col(static_cast<Eigen::Index>(n)) = h;
                real.replicas[static_cast<std::size_t>(su.user)].emplace_back(
                    t, static_cast<int>(n));
            }
        }
    }
    return real;
}

namespace detail
{

// Cached per-RB pilot-class state for the codebook route. z_s = Y phi_s is
// computed once and updated by the same rank-1 terms SIC removes from Y.
struct RbClassCache
{
    std::vector<int> class_of_col;   // per transmitter column
    std::vector<int> class_pilot;    // class -> codebook index
    ComplexMatrix z;                 // N x classes
};

inline RbClassCache build_class_cache(const RbRealization &rb, const PilotBook &book)
{
    RbClassCache cache;
    cache.class_of_col.resize(rb.transmitters.size(), -1);
    std::vector<int> class_id(static_cast<std::size_t>(book.tau), -1);
    for (std::size_t n = 0; n < rb.transmitters.size(); ++n) {
        const int s = rb.transmitters[n].pilot_index;
        if (s < 0)
            throw std::logic_error("sic_decode: codebook route needs codebook pilots");
        if (class_id[static_cast<std::size_t>(s)] < 0) {
            class_id[static_cast<std::size_t>(s)] = static_cast<int>(cache.class_pilot.size());
            cache.class_pilot.push_back(s);
        }
        cache.class_of_col[n] = class_id[static_cast<std::size_t>(s)];
    }
    const auto n_classes = static_cast<Eigen::Index>(cache.class_pilot.size());
    ComplexMatrix phi(book.tau, n_classes);
    for (Eigen::Index c = 0; c < n_classes; ++c)
        phi.col(c) = book.columns.col(cache.class_pilot[static_cast<std::size_t>(c)]);
    cache.z.noalias() = rb.y * phi;
    return cache;
}

// Stacked view of the currently active population of one RB.
struct ActiveView
{
    std::vector<int> cols;   // indices into rb.transmitters, in-cell first
    int in_cell_active = 0;
    RealVector powers;
};

inline ActiveView active_view(const RbRealization &rb, const std::vector<std::uint8_t> &decoded)
{
    ActiveView v;
    for (int n = 0; n < rb.in_cell_count; ++n)
        if (!decoded[static_cast<std::size_t>(
                rb.transmitters[static_cast<std::size_t>(n)].user)])
            v.cols.push_back(n);
    v.in_cell_active = static_cast<int>(v.cols.size());
    for (int n = rb.in_cell_count; n < static_cast<int>(rb.transmitters.size()); ++n)
        v.cols.push_back(n);
    v.powers.resize(static_cast<Eigen::Index>(v.cols.size()));
    for (std::size_t i = 0; i < v.cols.size(); ++i)
        v.powers(static_cast<Eigen::Index>(i)) =
            rb.transmitters[static_cast<std::size_t>(v.cols[i])].data_power;
    return v;
}

// Estimate block of the active population from the cached class projections.
inline EstimateBlock estimate_from_cache(const RbRealization &rb, const RbClassCache &cache,
                                         const ActiveView &view, const PilotBook &book, double n0)
{
    std::vector<double> den(cache.class_pilot.size(), n0);
    for (int col : view.cols) {
        const StackedUser &su = rb.transmitters[static_cast<std::size_t>(col)];
        den[static_cast<std::size_t>(cache.class_of_col[static_cast<std::size_t>(col)])] +=
            book.tau * su.pilot_power * su.gain;
    }
    EstimateBlock block;
    block.in_cell_count = view.in_cell_active;
    block.h_hat.resize(cache.z.rows(), static_cast<Eigen::Index>(view.cols.size()));
    block.delta.resize(static_cast<Eigen::Index>(view.cols.size()));
    block.varsigma.resize(static_cast<Eigen::Index>(view.cols.size()));
    for (std::size_t i = 0; i < view.cols.size(); ++i) {
        const StackedUser &su = rb.transmitters[static_cast<std::size_t>(view.cols[i])];
        const int cls = cache.class_of_col[static_cast<std::size_t>(view.cols[i])];
        const double d = den[static_cast<std::size_t>(cls)];
        const double u_scale = std::sqrt(su.pilot_power / book.P_tau);
        const auto n = static_cast<Eigen::Index>(i);
        block.h_hat.col(n) = cache.z.col(cls) * (su.gain * u_scale / d);
        block.varsigma(n) = book.tau * su.pilot_power * su.gain * su.gain / d;
        block.delta(n) = su.gain - block.varsigma(n);
    }
    return block;
}

// General-route estimate block: stacked pilots assembled per call.
inline EstimateBlock estimate_general(const RbRealization &rb, const ActiveView &view,
                                      const PilotBook &book, double n0)
{
    ComplexMatrix pilots(book.tau, static_cast<Eigen::Index>(view.cols.size()));
    RealVector gains(static_cast<Eigen::Index>(view.cols.size()));
    for (std::size_t i = 0; i < view.cols.size(); ++i) {
        const StackedUser &su = rb.transmitters[static_cast<std::size_t>(view.cols[i])];
        pilots.col(static_cast<Eigen::Index>(i)) =
            book.columns.col(su.pilot_index) * std::sqrt(su.pilot_power / book.P_tau);
        gains(static_cast<Eigen::Index>(i)) = su.gain;
    }
    EstimateBlock block = mmse_estimate(rb.y, pilots, gains, n0);
    block.in_cell_count = view.in_cell_active;
    error_variances(block, pilots, gains, n0);
    return block;
}

// Combiner columns for the in-cell targets only (prefix of the stack).
inline ComplexMatrix target_combiner(const EstimateBlock &block, const RealVector &powers,
                                     double n0, const DecodeSettings &cfg)
{
    const Eigen::Index n_targets = block.in_cell_count;
    if (cfg.combiner == CombinerKind::kMrc)
        return block.h_hat.leftCols(n_targets);
    const double est = estimation_error_power(block, powers);
    const double reg = n0 + est;
    const ComplexMatrix u = block.h_hat * powers.cwiseSqrt().asDiagonal();
    ComplexMatrix r = u * u.adjoint();
    r.diagonal().array() += reg;
    Eigen::LLT<ComplexMatrix> llt(r);
    if (llt.info() != Eigen::Success)
        throw singular_system_error("sic_decode: combiner system not positive definite");
    return llt.solve(block.h_hat.leftCols(n_targets));
}

} // namespace detail

/**
 * Iterative SIC threshold decoding of one cell.
 *
 * Every iteration recomputes the channel estimates and SINRs of each
 * (undecoded user, replica RB) pair; a user decodes once its SINR reaches
 * gamma_th in at least one RB. Decoded users are removed from all their
 * replica RBs by exact rank-1 subtraction before the next iteration.
 * Out-of-cell users are never removed. The loop stops on the first
 * iteration that decodes nobody; under deterministic recomputation a second
 * unproductive sweep would reproduce the same SINRs, so one suffices.
 */
inline std::pair<RunMetrics, DecoderState> sic_decode(CellRealization &real,
                                                      const PilotBook &book,
                                                      const DecodeSettings &cfg)
{
    if (cfg.gamma_th <= 0.0)
        throw std::invalid_argument("sic_decode: gamma_th must be > 0");

    DecoderState state;
    state.decoded.assign(static_cast<std::size_t>(real.users_per_cell), 0);
    state.decode_iteration.assign(static_cast<std::size_t>(real.users_per_cell), 0);

    const bool codebook = cfg.route == EstimatorRoute::kCodebook;
    std::vector<detail::RbClassCache> caches;
    if (codebook) {
        caches.reserve(real.rbs.size());
        for (const RbRealization &rb : real.rbs)
            caches.push_back(detail::build_class_cache(rb, book));
    }

    const int max_iterations = real.users_per_cell + 1;
    int undecoded_left = real.users_per_cell;
    std::vector<double> best_sinr(static_cast<std::size_t>(real.users_per_cell));

    for (int k = 1; k <= max_iterations && undecoded_left > 0; ++k) {
        state.iterations_used = k;
        std::fill(best_sinr.begin(), best_sinr.end(), -1.0);

        for (std::size_t t = 0; t < real.rbs.size(); ++t) {
            const RbRealization &rb = real.rbs[t];
            const detail::ActiveView view = detail::active_view(rb, state.decoded);
            if (view.in_cell_active == 0)
                continue;
            const EstimateBlock block =
                codebook ? detail::estimate_from_cache(rb, caches[t], view, book, real.n0)
                         : detail::estimate_general(rb, view, book, real.n0);
            const ComplexMatrix a =
                detail::target_combiner(block, view.powers, real.n0, cfg);
            std::vector<Eigen::Index> targets(static_cast<std::size_t>(view.in_cell_active));
            std::iota(targets.begin(), targets.end(), Eigen::Index{0});
            const std::vector<SinrBreakdown> rows =
                sinr_table(block, view.powers, real.n0, a, targets);
            for (int i = 0; i < view.in_cell_active; ++i) {
                const int user =
                    rb.transmitters[static_cast<std::size_t>(view.cols[static_cast<std::size_t>(i)])]
                        .user;
                best_sinr[static_cast<std::size_t>(user)] =
                    std::max(best_sinr[static_cast<std::size_t>(user)],
                             rows[static_cast<std::size_t>(i)].sinr);
            }
        }

        std::vector<int> newly_decoded;
        if (cfg.order == DecodeOrder::kBatch) {
            for (int i = 0; i < real.users_per_cell; ++i)
                if (!state.decoded[static_cast<std::size_t>(i)] &&
                    best_sinr[static_cast<std::size_t>(i)] >= cfg.gamma_th)
                    newly_decoded.push_back(i);
        } else {
            int best = -1;
            for (int i = 0; i < real.users_per_cell; ++i) {
                if (state.decoded[static_cast<std::size_t>(i)] ||
                    best_sinr[static_cast<std::size_t>(i)] < cfg.gamma_th)
                    continue;
                if (best < 0 ||
                    best_sinr[static_cast<std::size_t>(i)] > best_sinr[static_cast<std::size_t>(best)])
                    best = i;
            }
            if (best >= 0)
                newly_decoded.push_back(best);
        }
        if (newly_decoded.empty())
            break;

        for (int user : newly_decoded) {
            state.decoded[static_cast<std::size_t>(user)] = 1;
            state.decode_iteration[static_cast<std::size_t>(user)] = k;
            --undecoded_left;
            // perfect SIC: subtract this user's rank-1 term from every replica RB
            for (const auto &[t, col] : real.replicas[static_cast<std::size_t>(user)]) {
                RbRealization &rb = real.rbs[static_cast<std::size_t>(t)];
                const StackedUser &su = rb.transmitters[static_cast<std::size_t>(col)];
                const double u_scale = std::sqrt(su.pilot_power / book.P_tau);
                const auto h = rb.in_cell_channels.col(col);
                rb.y.noalias() -=
                    h * (book.columns.col(su.pilot_index) * u_scale).adjoint();
                if (codebook) {
                    const int cls =
                        caches[static_cast<std::size_t>(t)]
                            .class_of_col[static_cast<std::size_t>(col)];
                    caches[static_cast<std::size_t>(t)].z.col(cls).noalias() -=
                        h * (u_scale * book.tau * book.P_tau);
                }
            }
        }
    }

    RunMetrics metrics;
    metrics.decoded = state.decoded_count();
    metrics.iterations = state.iterations_used;
    metrics.throughput = throughput(state, real.rb_count);
    return {metrics, state};
}

/**
 * SINR of one in-cell user in one RB against the current decoder state,
 * with the contract guards: the user must still be undecoded and must
 * transmit in the RB.
 */
inline SinrBreakdown evaluate_user_sinr(const CellRealization &real, const DecoderState &state,
                                        const PilotBook &book, int rb_index, int user,
                                        const DecodeSettings &cfg)
{
    if (state.decoded[static_cast<std::size_t>(user)])
        throw already_decoded_error("evaluate_user_sinr: user already decoded");
    const RbRealization &rb = real.rbs[static_cast<std::size_t>(rb_index)];
    const detail::ActiveView view = detail::active_view(rb, state.decoded);
    int target = -1;
    for (int i = 0; i < view.in_cell_active; ++i)
        if (rb.transmitters[static_cast<std::size_t>(view.cols[static_cast<std::size_t>(i)])].user ==
            user)
            target = i;
    if (target < 0)
        throw not_transmitting_error("evaluate_user_sinr: user does not transmit in this RB");
    const EstimateBlock block = detail::estimate_general(rb, view, book, real.n0);
    const ComplexMatrix a = detail::target_combiner(block, view.powers, real.n0, cfg);
    return sinr(block, view.powers, real.n0, a.col(target), target);
}

} // namespace mcirsa

#endif
