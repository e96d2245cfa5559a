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

#ifndef MCIRSA_TOPOLOGY_HPP
#define MCIRSA_TOPOLOGY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace mcirsa
{

using Point2d = Eigen::Vector2d;

/**
 * Path loss (linear scale) at a given distance:
 * beta_dB = -37.6 log10(d / 10 m), with d clamped below at 1 m so the
 * coefficient stays bounded for users dropped arbitrarily close to a BS.
 */
inline double path_loss(double distance_m)
{
    if (distance_m <= 0.0)
        throw std::invalid_argument("path_loss: distance must be > 0");
    const double d = std::max(distance_m, 1.0);
    return std::pow(10.0, -3.76 * std::log10(d / 10.0));
}

/// Square-cell grid: grid_side x grid_side cells, one BS at each cell center.
struct Grid
{
    int grid_side = 0;
    double cell_size_m = 0.0;
    std::vector<Point2d> bs_positions; // row-major cell order
    int center_cell_index = 0;

    [[nodiscard]] int cells() const { return grid_side * grid_side; }

    /// Lower-left corner of cell j.
    [[nodiscard]] Point2d cell_origin(int j) const
    {
        const int row = j / grid_side;
        const int col = j % grid_side;
        return {col * cell_size_m, row * cell_size_m};
    }

    [[nodiscard]] bool contains(int j, const Point2d &p) const
    {
        const Point2d o = cell_origin(j);
        return p.x() >= o.x() && p.x() <= o.x() + cell_size_m && p.y() >= o.y() &&
               p.y() <= o.y() + cell_size_m;
    }
};

/**
 * Build the cell grid. grid_side must be odd so a unique center cell exists;
 * the center cell is the measurement target of every experiment.
 */
inline Grid build_grid(int grid_side, double cell_size_m)
{
    if (grid_side < 1)
        throw std::invalid_argument("build_grid: grid_side must be >= 1");
    if (grid_side % 2 == 0)
        throw std::invalid_argument("build_grid: grid_side must be odd (unique center cell)");
    if (cell_size_m <= 0.0)
        throw std::invalid_argument("build_grid: cell_size_m must be > 0");
    Grid g;
    g.grid_side = grid_side;
    g.cell_size_m = cell_size_m;
    g.bs_positions.reserve(static_cast<std::size_t>(grid_side) * grid_side);
    for (int row = 0; row < grid_side; ++row)
        for (int col = 0; col < grid_side; ++col)
            g.bs_positions.emplace_back((col + 0.5) * cell_size_m, (row + 0.5) * cell_size_m);
    g.center_cell_index = (grid_side * grid_side - 1) / 2;
    return g;
}

/**
 * Multi-cell deployment: geometry, path-loss table and power-control
 * coefficients. Immutable after construction; user (j, i) maps to the flat
 * index j*M + i used throughout.
 */
struct Deployment
{
    int Q = 0; // cells
    int M = 0; // users per cell
    Grid grid;
    std::vector<Point2d> user_positions; // Q*M
    RealMatrix beta;                     // (Q*M) x Q, beta(user, bs) linear scale
    RealVector data_power;               // p_{ji},  Q*M
    RealVector pilot_power;              // p^P_{ji}, Q*M
    double P = 0.0;                      // target received data power (linear W)
    double P_tau = 0.0;                  // target received pilot power (linear W)

    [[nodiscard]] int user_index(int cell, int user) const { return cell * M + user; }
    [[nodiscard]] int center_cell() const { return grid.center_cell_index; }
};

/// M i.i.d. uniform user positions per cell.
inline std::vector<Point2d> drop_users(const RngStream &stream, const Grid &grid, int users_per_cell)
{
    if (users_per_cell < 1)
        throw std::invalid_argument("drop_users: users_per_cell must be >= 1");
    std::vector<Point2d> positions;
    positions.reserve(static_cast<std::size_t>(grid.cells()) * users_per_cell);
    RngEngine eng(stream);
    for (int j = 0; j < grid.cells(); ++j) {
        const Point2d o = grid.cell_origin(j);
        for (int i = 0; i < users_per_cell; ++i) {
            const double x = o.x() + eng.uniform01() * grid.cell_size_m;
            const double y = o.y() + eng.uniform01() * grid.cell_size_m;
            positions.emplace_back(x, y);
        }
    }
    return positions;
}

/// Path-loss table beta(user, bs) from positions.
inline RealMatrix compute_path_losses(const Grid &grid, const std::vector<Point2d> &user_positions)
{
    const int q = grid.cells();
    const auto n_users = static_cast<Eigen::Index>(user_positions.size());
    RealMatrix beta(n_users, q);
    for (Eigen::Index u = 0; u < n_users; ++u)
        for (int b = 0; b < q; ++b) {
            const double d = (user_positions[static_cast<std::size_t>(u)] -
                              grid.bs_positions[static_cast<std::size_t>(b)])
                                 .norm();
            beta(u, b) = path_loss(std::max(d, 1e-12));
        }
    return beta;
}

/**
 * Path-loss inversion toward the home BS: p_{ji} = P / beta_{ji}^j and
 * p^P_{ji} = P_tau / beta_{ji}^j. No transmit power cap is applied, so the
 * received data SNR is uniform across users.
 */
inline void apply_power_control(Deployment &dep, double p_watts, double p_tau_watts)
{
    if (p_watts <= 0.0)
        throw std::invalid_argument("apply_power_control: P must be > 0");
    if (p_tau_watts < p_watts)
        throw std::invalid_argument("apply_power_control: P_tau must be >= P");
    const Eigen::Index n = dep.beta.rows();
    dep.data_power.resize(n);
    dep.pilot_power.resize(n);
    for (int j = 0; j < dep.Q; ++j)
        for (int i = 0; i < dep.M; ++i) {
            const int u = dep.user_index(j, i);
            const double home_beta = dep.beta(u, j);
            dep.data_power(u) = p_watts / home_beta;
            dep.pilot_power(u) = p_tau_watts / home_beta;
        }
    dep.P = p_watts;
    dep.P_tau = p_tau_watts;
}

/// Full deployment: grid, user drop, path loss, power control.
inline Deployment make_deployment(const RngStream &stream, const Grid &grid, int users_per_cell,
                                  double p_watts, double p_tau_watts)
{
    Deployment dep;
    dep.Q = grid.cells();
    dep.M = users_per_cell;
    dep.grid = grid;
    dep.user_positions = drop_users(stream, grid, users_per_cell);
    dep.beta = compute_path_losses(grid, dep.user_positions);
    apply_power_control(dep, p_watts, p_tau_watts);
    return dep;
}

} // namespace mcirsa

#endif
