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

#include <catch2/catch.hpp>

#include <cmath>

#include "mcirsa/topology.hpp"

using namespace mcirsa;

TEST_CASE("3x3 grid geometry", "[topology]")
{
    const Grid g = build_grid(3, 250.0);
    REQUIRE(g.cells() == 9);
    CHECK(g.center_cell_index == 4); // fifth cell in row-major order
    CHECK(g.bs_positions[4].x() == Approx(375.0));
    CHECK(g.bs_positions[4].y() == Approx(375.0));
    // adjacent BS separation is exactly one cell size
    CHECK((g.bs_positions[1] - g.bs_positions[0]).norm() == Approx(250.0));
    CHECK((g.bs_positions[3] - g.bs_positions[0]).norm() == Approx(250.0));
}

TEST_CASE("degenerate and invalid grids", "[topology]")
{
    const Grid g1 = build_grid(1, 250.0);
    CHECK(g1.cells() == 1);
    CHECK(g1.center_cell_index == 0);
    CHECK_THROWS_AS(build_grid(2, 250.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0, 250.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, 0.0), std::invalid_argument);
}

TEST_CASE("path loss formula and clamp", "[topology]")
{
    CHECK(path_loss(10.0) == Approx(1.0));
    CHECK(path_loss(100.0) == Approx(std::pow(10.0, -3.76)).epsilon(1e-12));
    // below 1 m the distance is clamped to 1 m
    CHECK(path_loss(0.5) == Approx(path_loss(1.0)));
    CHECK(path_loss(1.0) == Approx(std::pow(10.0, 3.76)).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss(0.0), std::invalid_argument);
    CHECK_THROWS_AS(path_loss(-3.0), std::invalid_argument);
}

TEST_CASE("path loss is monotone beyond the clamp", "[topology]")
{
    double prev = path_loss(1.0);
    for (double d = 2.0; d < 600.0; d += 7.3) {
        const double b = path_loss(d);
        CHECK(b < prev);
        CHECK(b > 0.0);
        prev = b;
    }
}

TEST_CASE("uniform user drop", "[topology]")
{
    const Grid g = build_grid(1, 250.0);
    const auto pos = drop_users(derive_stream(13, {0}), g, 100000);
    Point2d mean(0.0, 0.0);
    for (const Point2d &p : pos) {
        REQUIRE(g.contains(0, p));
        mean += p;
    }
    mean /= static_cast<double>(pos.size());
    CHECK((mean - Point2d(125.0, 125.0)).norm() < 1.0);

    // distinct substreams produce different drops
    const auto pos2 = drop_users(derive_stream(13, {1}), g, 5);
    const auto pos3 = drop_users(derive_stream(13, {0}), g, 5);
    CHECK((pos2[0] - pos[0]).norm() > 0.0);
    CHECK((pos3[0] - pos[0]).norm() == 0.0);
}

TEST_CASE("power control inverts the home path loss", "[topology]")
{
    const Grid g = build_grid(3, 250.0);
    const double p = 0.01, p_tau = 0.01; // 10 dBm
    const Deployment dep = make_deployment(derive_stream(17, {0}), g, 20, p, p_tau);
    for (int j = 0; j < dep.Q; ++j)
        for (int i = 0; i < dep.M; ++i) {
            const int u = dep.user_index(j, i);
            CHECK(dep.data_power(u) * dep.beta(u, j) == Approx(p).epsilon(1e-12));
            CHECK(dep.pilot_power(u) * dep.beta(u, j) == Approx(p_tau).epsilon(1e-12));
            CHECK(dep.beta(u, j) > 0.0);
        }
}

TEST_CASE("power control special values", "[topology]")
{
    Deployment dep;
    dep.Q = 1;
    dep.M = 2;
    dep.beta.resize(2, 1);
    dep.beta << 1.0, 1e-4;
    apply_power_control(dep, 0.01, 0.01);
    CHECK(dep.data_power(0) == Approx(0.01));
    CHECK(dep.data_power(1) == Approx(100.0)); // no transmit power cap
    CHECK_THROWS_AS(apply_power_control(dep, 0.01, 0.001), std::invalid_argument);
    CHECK_THROWS_AS(apply_power_control(dep, 0.0, 0.01), std::invalid_argument);
}
