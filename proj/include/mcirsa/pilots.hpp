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

#ifndef MCIRSA_PILOTS_HPP
#define MCIRSA_PILOTS_HPP

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace mcirsa
{

/**
 * Orthogonal DFT pilot codebook: tau columns of the tau x tau DFT matrix,
 * scaled so every column has squared norm tau * P_tau. The codebook is
 * shared by all cells.
 */
struct PilotBook
{
    int tau = 0;
    double P_tau = 0.0;
    ComplexMatrix columns; // tau x tau

    [[nodiscard]] ComplexVector column(int s) const { return columns.col(s); }
};

inline PilotBook dft_codebook(int tau, double p_tau_watts)
{
    if (tau < 1)
        throw std::invalid_argument("dft_codebook: tau must be >= 1");
    if (p_tau_watts <= 0.0)
        throw std::invalid_argument("dft_codebook: P_tau must be > 0");
    PilotBook book;
    book.tau = tau;
    book.P_tau = p_tau_watts;
    book.columns.resize(tau, tau);
    const double amp = std::sqrt(p_tau_watts);
    for (int c = 0; c < tau; ++c)
        for (int r = 0; r < tau; ++r) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(r) *
                                 static_cast<double>(c) / static_cast<double>(tau);
            book.columns(r, c) = Complex(amp * std::cos(phase), amp * std::sin(phase));
        }
    return book;
}

enum class PilotPolicy
{
    kAuto, // distinct within each cell when tau >= M, i.i.d. uniform otherwise
    kIid,  // every user draws a uniform index independently
};

/**
 * Codebook index per user plus the induced reuse classes. The reuse relation
 * is an equivalence: every user belongs to its own class, and two users are
 * in the same class iff they share a codebook index (within or across cells).
 */
struct PilotAssignment
{
    int Q = 0;
    int M = 0;
    int tau = 0;
    std::vector<int> index;                       // per global user
    std::vector<std::vector<int>> users_of_pilot; // per codebook index, ascending users

    [[nodiscard]] const std::vector<int> &reuse_set(int global_user) const
    {
        return users_of_pilot[static_cast<std::size_t>(index[static_cast<std::size_t>(global_user)])];
    }
};

inline PilotAssignment assign_pilots(const RngStream &stream, int q_cells, int users_per_cell,
                                     const PilotBook &book, PilotPolicy policy = PilotPolicy::kAuto)
{
    PilotAssignment asg;
    asg.Q = q_cells;
    asg.M = users_per_cell;
    asg.tau = book.tau;
    asg.index.resize(static_cast<std::size_t>(q_cells) * users_per_cell);
    asg.users_of_pilot.resize(static_cast<std::size_t>(book.tau));

    RngEngine eng(stream);
    const bool distinct_in_cell = policy == PilotPolicy::kAuto && book.tau >= users_per_cell;
    std::vector<int> pool(static_cast<std::size_t>(book.tau));
    for (int j = 0; j < q_cells; ++j) {
        if (distinct_in_cell) {
            // uniformly random M-permutation slice of the codebook
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < users_per_cell; ++i) {
                const auto pick = i + static_cast<int>(eng.uniform_below(
                                          static_cast<std::uint64_t>(book.tau - i)));
                std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
                asg.index[static_cast<std::size_t>(j * users_per_cell + i)] =
                    pool[static_cast<std::size_t>(i)];
            }
        } else {
            for (int i = 0; i < users_per_cell; ++i)
                asg.index[static_cast<std::size_t>(j * users_per_cell + i)] =
                    static_cast<int>(eng.uniform_below(static_cast<std::uint64_t>(book.tau)));
        }
    }
    for (int u = 0; u < q_cells * users_per_cell; ++u)
        asg.users_of_pilot[static_cast<std::size_t>(asg.index[static_cast<std::size_t>(u)])]
            .push_back(u);
    return asg;
}

/// Amplitude scale applied to a user's codebook column so ||p||^2 = tau * p^P.
inline double pilot_scale(const Deployment &dep, const PilotBook &book, int global_user)
{
    return std::sqrt(dep.pilot_power(global_user) / book.P_tau);
}

/// The transmitted pilot vector of one user (codebook column times power scale).
inline ComplexVector user_pilot(const Deployment &dep, const PilotBook &book,
                                const PilotAssignment &asg, int global_user)
{
    return book.columns.col(asg.index[static_cast<std::size_t>(global_user)]) *
           pilot_scale(dep, book, global_user);
}

} // namespace mcirsa

#endif
