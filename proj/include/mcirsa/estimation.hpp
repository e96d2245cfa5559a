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

#ifndef MCIRSA_ESTIMATION_HPP
#define MCIRSA_ESTIMATION_HPP

#include <stdexcept>
#include <vector>

#include "access.hpp"
#include "channel.hpp"
#include "linalg.hpp"
#include "pilots.hpp"
#include "topology.hpp"

namespace mcirsa
{

/// One column of the stacked per-RB population, seen from the observing BS.
struct StackedUser
{
    int cell = 0;
    int user = 0;        // index within its cell
    int global = 0;      // cell * M + user
    int pilot_index = -1; // codebook index, -1 for arbitrary pilots
    double gain = 0.0;        // beta_{ji}^q * sigma_h^2 toward the observer
    double data_power = 0.0;  // p_{ji}
    double pilot_power = 0.0; // p^P_{ji}
};

/**
 * The stacked population of one (RB, BS, iteration) triple: in-cell
 * undecoded transmitters first, then the transmitters of every other cell in
 * ascending cell order. Out-of-cell users always appear in full since they
 * are never decoded by this BS.
 */
struct StackedInstance
{
    int observer_cell = 0;
    int in_cell_count = 0; // M_tq^{qk}
    int tau = 0;
    std::vector<StackedUser> users;
    ComplexMatrix pilots; // tau x M_bar, power-scaled per-user pilot columns

    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(users.size()); }

    [[nodiscard]] RealVector gains() const
    {
        RealVector b(size());
        for (Eigen::Index n = 0; n < size(); ++n)
            b(n) = users[static_cast<std::size_t>(n)].gain;
        return b;
    }

    [[nodiscard]] RealVector data_powers() const
    {
        RealVector p(size());
        for (Eigen::Index n = 0; n < size(); ++n)
            p(n) = users[static_cast<std::size_t>(n)].data_power;
        return p;
    }
};

inline StackedInstance build_stacked_instance(const Deployment &dep, const AccessMatrix &access,
                                              const PilotBook &book, const PilotAssignment &asg,
                                              const ActiveSets &sets, int rb, int observer_cell,
                                              double sigma_h2)
{
    StackedInstance inst;
    inst.observer_cell = observer_cell;
    inst.tau = book.tau;
    std::vector<int> in_cell, out_cell;
    for (int u : access.rb_users[static_cast<std::size_t>(rb)]) {
        const int cell = u / dep.M;
        if (cell == observer_cell) {
            if (std::binary_search(sets[static_cast<std::size_t>(cell)].begin(),
                                   sets[static_cast<std::size_t>(cell)].end(), u % dep.M))
                in_cell.push_back(u);
        } else {
            out_cell.push_back(u);
        }
    }
    inst.in_cell_count = static_cast<int>(in_cell.size());
    std::vector<int> order = std::move(in_cell);
    order.insert(order.end(), out_cell.begin(), out_cell.end());

    inst.users.resize(order.size());
    inst.pilots.resize(book.tau, static_cast<Eigen::Index>(order.size()));
    for (std::size_t n = 0; n < order.size(); ++n) {
        const int u = order[n];
        StackedUser &su = inst.users[n];
        su.cell = u / dep.M;
        su.user = u % dep.M;
        su.global = u;
        su.pilot_index = asg.index[static_cast<std::size_t>(u)];
        su.gain = dep.beta(u, observer_cell) * sigma_h2;
        su.data_power = dep.data_power(u);
        su.pilot_power = dep.pilot_power(u);
        inst.pilots.col(static_cast<Eigen::Index>(n)) = user_pilot(dep, book, asg, u);
    }
    return inst;
}

/**
 * Joint MMSE channel estimate of the stacked population plus the correlation
 * matrix whose columns drive the error variances; delta/varsigma are filled
 * by error_variances() or the codebook closed form.
 */
struct EstimateBlock
{
    ComplexMatrix h_hat;   // N x M_bar
    ComplexMatrix c;       // tau x M_bar, C_bar columns c_{tji}^{qk}
    RealVector delta;      // estimation error variance per column
    RealVector varsigma;   // estimate variance per column
    int in_cell_count = 0;
};

enum class EstimatorForm
{
    kAuto,  // whichever inverse is smaller, M_bar x M_bar vs tau x tau
    kMBar,  // C = P B (P^H P B + N0 I)^{-1}
    kTau,   // C = (P B P^H + N0 I)^{-1} P B
};

/**
 * The correlation matrix C = P B (P^H P B + N0 I)^{-1}.
 *
 * Both inverses are evaluated through a Hermitian positive-definite solve:
 * with W = P B^{1/2}, P B (P^H P B + N0 I)^{-1} = W (W^H W + N0 I)^{-1} B^{1/2}
 * = (W W^H + N0 I)^{-1} W B^{1/2}, where the middle factors are HPD for
 * N0 > 0 and the two forms are connected by the push-through identity.
 */
inline ComplexMatrix mmse_correlation(const ComplexMatrix &pilots, const RealVector &gains,
                                      double n0, EstimatorForm form = EstimatorForm::kAuto)
{
    if (n0 <= 0.0)
        throw std::invalid_argument("mmse_correlation: N0 must be > 0");
    const Eigen::Index m_bar = pilots.cols();
    const Eigen::Index tau = pilots.rows();
    if (gains.size() != m_bar)
        throw std::invalid_argument("mmse_correlation: gains/pilots dimension mismatch");
    if (m_bar == 0)
        return ComplexMatrix(tau, 0);
    if ((gains.array() <= 0.0).any())
        throw std::invalid_argument("mmse_correlation: gains must be > 0");

    const RealVector sqrt_b = gains.cwiseSqrt();
    const ComplexMatrix w = pilots * sqrt_b.asDiagonal();
    const bool use_mbar = form == EstimatorForm::kMBar ||
                          (form == EstimatorForm::kAuto && m_bar <= tau);
    if (use_mbar) {
        ComplexMatrix g = w.adjoint() * w;
        g.diagonal().array() += n0;
        ComplexMatrix rhs = ComplexMatrix::Zero(m_bar, m_bar);
        rhs.diagonal() = sqrt_b.cast<Complex>();
        return w * hermitian_solve(g, rhs);
    }
    ComplexMatrix g = w * w.adjoint();
    g.diagonal().array() += n0;
    return hermitian_solve(g, w) * sqrt_b.asDiagonal();
}

/// Estimate of the stacked channel matrix: H_hat = Y * C.
inline EstimateBlock mmse_estimate(const ComplexMatrix &y, const ComplexMatrix &pilots,
                                   const RealVector &gains, double n0,
                                   EstimatorForm form = EstimatorForm::kAuto)
{
    if (y.cols() != pilots.rows())
        throw std::invalid_argument("mmse_estimate: Y and pilot dimensions mismatch");
    EstimateBlock block;
    block.c = mmse_correlation(pilots, gains, n0, form);
    block.h_hat = y * block.c;
    block.delta = RealVector::Zero(pilots.cols());
    block.varsigma = RealVector::Zero(pilots.cols());
    return block;
}

inline EstimateBlock mmse_estimate(const ComplexMatrix &y, const StackedInstance &inst, double n0,
                                   EstimatorForm form = EstimatorForm::kAuto)
{
    EstimateBlock block = mmse_estimate(y, inst.pilots, inst.gains(), n0, form);
    block.in_cell_count = inst.in_cell_count;
    return block;
}

/**
 * Estimation error variances per stacked column. For target column n with
 * correlation vector c_n, the denominator accumulates the matched power of
 * every stacked transmitter plus noise; the numerator omits the target's own
 * matched term:
 *
 *   den_n = N0 ||c_n||^2 + sum_m |p_m^H c_n|^2 b_m
 *   delta_n = b_n (den_n - |p_n^H c_n|^2 b_n) / den_n
 *
 * den_n is also the per-entry variance of the estimate itself (varsigma).
 */
inline void error_variances(EstimateBlock &block, const ComplexMatrix &pilots,
                            const RealVector &gains, double n0)
{
    const Eigen::Index m_bar = pilots.cols();
    block.delta.resize(m_bar);
    block.varsigma.resize(m_bar);
    if (m_bar == 0)
        return;
    const ComplexMatrix matched = pilots.adjoint() * block.c; // (m, n) = p_m^H c_n
    for (Eigen::Index n = 0; n < m_bar; ++n) {
        double den = n0 * block.c.col(n).squaredNorm();
        for (Eigen::Index m = 0; m < m_bar; ++m)
            den += std::norm(matched(m, n)) * gains(m);
        const double num = den - std::norm(matched(n, n)) * gains(n);
        block.varsigma(n) = den;
        block.delta(n) = den > 0.0 ? gains(n) * num / den : gains(n);
    }
}

inline void error_variances(EstimateBlock &block, const StackedInstance &inst, double n0)
{
    error_variances(block, inst.pilots, inst.gains(), n0);
}

/// Estimate variance and error variance of one user under the closed form.
struct ReuseVariance
{
    double varsigma = 0.0;
    double delta = 0.0;
};

/**
 * Closed-form estimate variance under the orthogonal codebook. The pilot
 * classes decouple, so for a target in class s,
 *
 *   varsigma = tau p^P_n b_n^2 / (N0 + sum over active sharers tau p^P_m b_m)
 *   delta    = b_n - varsigma
 *
 * where the sharer sum runs over the stacked population members of class s
 * (in-cell undecoded and all out-of-cell transmitters) and each term uses
 * the sharer's own received pilot power toward the observer.
 */
inline ReuseVariance reuse_variance(const StackedInstance &inst, Eigen::Index target, double n0)
{
    const StackedUser &tu = inst.users[static_cast<std::size_t>(target)];
    if (tu.pilot_index < 0)
        throw std::logic_error("reuse_variance: target does not use a codebook pilot");
    double den = n0;
    for (const StackedUser &su : inst.users) {
        if (su.pilot_index < 0)
            throw std::logic_error("reuse_variance: stacked user without codebook pilot");
        if (su.pilot_index == tu.pilot_index)
            den += inst.tau * su.pilot_power * su.gain;
    }
    ReuseVariance rv;
    rv.varsigma = inst.tau * tu.pilot_power * tu.gain * tu.gain / den;
    rv.delta = tu.gain - rv.varsigma;
    return rv;
}

/**
 * Codebook fast route: the full estimate block from per-class pilot
 * projections z_s = Y phi_s. Numerically identical (to solver precision) to
 * mmse_estimate + error_variances whenever every pilot is a scaled codebook
 * column; the per-class denominators replace the matrix inverse.
 */
inline EstimateBlock codebook_estimate(const ComplexMatrix &y, const StackedInstance &inst,
                                       const PilotBook &book, double n0)
{
    if (n0 <= 0.0)
        throw std::invalid_argument("codebook_estimate: N0 must be > 0");
    const Eigen::Index m_bar = inst.size();
    EstimateBlock block;
    block.in_cell_count = inst.in_cell_count;
    block.h_hat.resize(y.rows(), m_bar);
    block.c = ComplexMatrix::Zero(book.tau, m_bar);
    block.delta.resize(m_bar);
    block.varsigma.resize(m_bar);
    if (m_bar == 0)
        return block;

    // class denominators: N0 + sum over sharers tau p^P b
    std::vector<double> den(static_cast<std::size_t>(book.tau), n0);
    for (const StackedUser &su : inst.users) {
        if (su.pilot_index < 0)
            throw std::logic_error("codebook_estimate: stacked user without codebook pilot");
        den[static_cast<std::size_t>(su.pilot_index)] += book.tau * su.pilot_power * su.gain;
    }
    // one projection z_s = Y phi_s per class present, shared by its members
    std::vector<ComplexVector> z(static_cast<std::size_t>(book.tau));
    for (Eigen::Index n = 0; n < m_bar; ++n) {
        const StackedUser &su = inst.users[static_cast<std::size_t>(n)];
        const auto s = static_cast<std::size_t>(su.pilot_index);
        if (z[s].size() == 0)
            z[s].noalias() = y * book.columns.col(su.pilot_index);
        const double d = den[s];
        const double u_scale = std::sqrt(su.pilot_power / book.P_tau);
        const double weight = su.gain * u_scale / d; // v_n / den
        block.h_hat.col(n) = z[s] * weight;
        block.c.col(n) = book.columns.col(su.pilot_index) * weight;
        block.varsigma(n) = book.tau * su.pilot_power * su.gain * su.gain / d;
        block.delta(n) = su.gain - block.varsigma(n);
    }
    return block;
}

} // namespace mcirsa

#endif
