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

#ifndef MCIRSA_ACCESS_HPP
#define MCIRSA_ACCESS_HPP

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace mcirsa
{

/// Probability distribution over repetition degrees {1, ..., d_max}.
struct RepetitionDistribution
{
    int d_max = 0;
    std::vector<double> pmf; // pmf[d-1] = P(degree = d)

    [[nodiscard]] double mean() const
    {
        double m = 0.0;
        for (int d = 1; d <= d_max; ++d)
            m += d * pmf[static_cast<std::size_t>(d - 1)];
        return m;
    }

    void validate() const
    {
        if (d_max < 1 || pmf.size() != static_cast<std::size_t>(d_max))
            throw std::invalid_argument("RepetitionDistribution: bad support");
        double sum = 0.0;
        for (double p : pmf) {
            if (p < 0.0)
                throw std::invalid_argument("RepetitionDistribution: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("RepetitionDistribution: pmf does not sum to 1");
    }
};

/**
 * Ideal soliton distribution truncated at d_max:
 * p(1) = 1/d_max, p(d) = 1/(d(d-1)) for 2 <= d <= d_max. The telescoping sum
 * 1/d_max + sum_{d=2}^{d_max} 1/(d(d-1)) equals 1 exactly.
 */
inline RepetitionDistribution soliton_pmf(int d_max)
{
    if (d_max < 1)
        throw std::invalid_argument("soliton_pmf: d_max must be >= 1");
    RepetitionDistribution dist;
    dist.d_max = d_max;
    dist.pmf.resize(static_cast<std::size_t>(d_max), 0.0);
    dist.pmf[0] = 1.0 / d_max;
    for (int d = 2; d <= d_max; ++d)
        dist.pmf[static_cast<std::size_t>(d - 1)] = 1.0 / (static_cast<double>(d) * (d - 1));
    return dist;
}

/**
 * Binary access pattern: T RBs by Q*M users, stored as per-user replica
 * lists plus the per-RB transmitter lists the decoder iterates over.
 * Column sums equal the sampled repetition degrees; replica RBs within a
 * column are distinct (sampled without replacement).
 */
struct AccessMatrix
{
    int T = 0;
    int n_users = 0;                         // Q*M
    std::vector<std::vector<int>> user_rbs;  // per user, ascending RB indices
    std::vector<std::vector<int>> rb_users;  // per RB, ascending global user indices

    [[nodiscard]] int degree(int user) const
    {
        return static_cast<int>(user_rbs[static_cast<std::size_t>(user)].size());
    }

    [[nodiscard]] bool transmits(int user, int rb) const
    {
        const auto &rbs = user_rbs[static_cast<std::size_t>(user)];
        return std::binary_search(rbs.begin(), rbs.end(), rb);
    }
};

/**
 * Sample one access matrix: every user draws d from `dist`, then a uniform
 * d-subset of the T RBs. A pure function of (stream, arguments), so the
 * pattern is regenerable from the seed path alone and never needs to be
 * exchanged between transmitter and receiver.
 */
inline AccessMatrix build_access_matrix(const RngStream &stream, int q_cells, int users_per_cell,
                                        int rb_count, const RepetitionDistribution &dist)
{
    dist.validate();
    if (rb_count < 1)
        throw std::invalid_argument("build_access_matrix: T must be >= 1");
    if (dist.d_max > rb_count)
        throw std::invalid_argument("build_access_matrix: d_max must be <= T");
    const int n = q_cells * users_per_cell;
    AccessMatrix acc;
    acc.T = rb_count;
    acc.n_users = n;
    acc.user_rbs.resize(static_cast<std::size_t>(n));
    acc.rb_users.resize(static_cast<std::size_t>(rb_count));

    RngEngine eng(stream);
    std::vector<int> pool(static_cast<std::size_t>(rb_count));
    for (int u = 0; u < n; ++u) {
        // inverse-CDF degree draw
        const double x = eng.uniform01();
        int d = dist.d_max;
        double cum = 0.0;
        for (int k = 1; k <= dist.d_max; ++k) {
            cum += dist.pmf[static_cast<std::size_t>(k - 1)];
            if (x < cum) {
                d = k;
                break;
            }
        }
        // partial Fisher-Yates for a uniform d-subset without replacement
        std::iota(pool.begin(), pool.end(), 0);
        auto &rbs = acc.user_rbs[static_cast<std::size_t>(u)];
        rbs.resize(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const auto pick =
                k + static_cast<int>(eng.uniform_below(static_cast<std::uint64_t>(rb_count - k)));
            std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
            rbs[static_cast<std::size_t>(k)] = pool[static_cast<std::size_t>(k)];
        }
        std::sort(rbs.begin(), rbs.end());
        for (int t : rbs)
            acc.rb_users[static_cast<std::size_t>(t)].push_back(u);
    }
    return acc;
}

} // namespace mcirsa

#endif
