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

#ifndef MCIRSA_CHANNEL_HPP
#define MCIRSA_CHANNEL_HPP

#include <stdexcept>
#include <vector>

#include "access.hpp"
#include "linalg.hpp"
#include "pilots.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace mcirsa
{

/**
 * One user's channel toward one BS in one RB, h ~ CN(0, beta * sigma_h^2 I_N).
 * The substream is keyed by (run stream, RB, BS, user), so every column is an
 * independent draw and any subset of the tensor can be regenerated in
 * isolation, in any order, on any thread.
 */
inline ComplexVector channel_column(const RngStream &run_stream, int rb, int bs, int global_user,
                                    int n_antennas, double variance)
{
    const RngStream s = run_stream.child(kTagChannel)
                            .child(static_cast<std::uint64_t>(rb))
                            .child(static_cast<std::uint64_t>(bs))
                            .child(static_cast<std::uint64_t>(global_user));
    return complex_gaussian(s, n_antennas, 1, variance);
}

/// Additive receiver noise for one (RB, BS) pair, N x tau, i.i.d. CN(0, N0).
inline ComplexMatrix noise_matrix(const RngStream &run_stream, int rb, int bs, int n_antennas,
                                  int tau, double n0)
{
    const RngStream s = run_stream.child(kTagNoise)
                            .child(static_cast<std::uint64_t>(rb))
                            .child(static_cast<std::uint64_t>(bs));
    if (n0 == 0.0)
        return ComplexMatrix::Zero(n_antennas, tau);
    return complex_gaussian(s, n_antennas, tau, n0);
}

/**
 * Dense block-fading tensor: for every (RB t, BS q) an N x (Q*M) matrix whose
 * column (j, i) is h_{tji}^q. Channels are constant within an RB and redrawn
 * independently across RBs. Intended for tests and small instances; the
 * simulation loop draws only the columns it needs via channel_column().
 */
struct ChannelBlock
{
    int N = 0;
    int T = 0;
    int Q = 0;
    int n_users = 0;
    double sigma_h2 = 1.0;
    std::vector<ComplexMatrix> h; // T*Q entries, index t*Q + q

    [[nodiscard]] const ComplexMatrix &at(int t, int q) const
    {
        return h[static_cast<std::size_t>(t) * Q + static_cast<std::size_t>(q)];
    }
};

inline ChannelBlock draw_channels(const RngStream &run_stream, const Deployment &dep,
                                  int n_antennas, int rb_count, double sigma_h2)
{
    if (n_antennas < 1 || rb_count < 1)
        throw std::invalid_argument("draw_channels: N and T must be >= 1");
    ChannelBlock block;
    block.N = n_antennas;
    block.T = rb_count;
    block.Q = dep.Q;
    block.n_users = dep.Q * dep.M;
    block.sigma_h2 = sigma_h2;
    block.h.resize(static_cast<std::size_t>(rb_count) * dep.Q);
    for (int t = 0; t < rb_count; ++t)
        for (int q = 0; q < dep.Q; ++q) {
            ComplexMatrix &m = block.h[static_cast<std::size_t>(t) * dep.Q + q];
            m.resize(n_antennas, block.n_users);
            for (int u = 0; u < block.n_users; ++u)
                m.col(u) = channel_column(run_stream, t, q, u, n_antennas,
                                          dep.beta(u, q) * sigma_h2);
        }
    return block;
}

/// Per-cell undecoded sets S_kq; sets[j] holds the in-cell user indices 0..M-1.
using ActiveSets = std::vector<std::vector<int>>;

inline ActiveSets full_sets(int q_cells, int users_per_cell)
{
    ActiveSets sets(static_cast<std::size_t>(q_cells));
    for (auto &s : sets) {
        s.resize(static_cast<std::size_t>(users_per_cell));
        std::iota(s.begin(), s.end(), 0);
    }
    return sets;
}

/// Received pilot signals Y_tq^p for every (RB, BS) pair.
struct PilotObservation
{
    int N = 0;
    int T = 0;
    int Q = 0;
    int tau = 0;
    double n0 = 0.0;
    std::vector<ComplexMatrix> y; // T*Q entries, index t*Q + q

    [[nodiscard]] const ComplexMatrix &at(int t, int q) const
    {
        return y[static_cast<std::size_t>(t) * Q + static_cast<std::size_t>(q)];
    }
    [[nodiscard]] ComplexMatrix &at(int t, int q)
    {
        return y[static_cast<std::size_t>(t) * Q + static_cast<std::size_t>(q)];
    }
};

/**
 * Synthesize the received pilot signal at every BS:
 * Y_tq = sum over transmitters of h_{tji}^q p_{ji}^H plus CN(0, N0) noise.
 *
 * The in-cell sum at BS q is restricted to the undecoded set sets[q]; users
 * of other cells always contribute in full since no BS coordination exists
 * and out-of-cell users are never removed. Noise is keyed only by
 * (run stream, t, q), so rebuilding with shrunken sets reuses the identical
 * noise realization, which is the re-expression an SIC iteration sees.
 */
inline PilotObservation received_pilot(const ChannelBlock &channels, const AccessMatrix &access,
                                       const Deployment &dep, const PilotBook &book,
                                       const PilotAssignment &asg, const ActiveSets &sets,
                                       double n0, const RngStream &run_stream)
{
    PilotObservation obs;
    obs.N = channels.N;
    obs.T = channels.T;
    obs.Q = channels.Q;
    obs.tau = book.tau;
    obs.n0 = n0;
    obs.y.resize(static_cast<std::size_t>(channels.T) * channels.Q);
    for (int t = 0; t < channels.T; ++t)
        for (int q = 0; q < channels.Q; ++q) {
            ComplexMatrix y = noise_matrix(run_stream, t, q, channels.N, book.tau, n0);
            for (int u : access.rb_users[static_cast<std::size_t>(t)]) {
                const int cell = u / dep.M;
                const int user = u % dep.M;
                if (cell == q &&
                    !std::binary_search(sets[static_cast<std::size_t>(q)].begin(),
                                        sets[static_cast<std::size_t>(q)].end(), user))
                    continue; // decoded in-cell user, removed by SIC
                y.noalias() += channels.at(t, q).col(u) * user_pilot(dep, book, asg, u).adjoint();
            }
            obs.at(t, q) = std::move(y);
        }
    return obs;
}

} // namespace mcirsa

#endif
