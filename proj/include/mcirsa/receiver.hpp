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

#ifndef MCIRSA_RECEIVER_HPP
#define MCIRSA_RECEIVER_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "estimation.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace mcirsa
{

/// Per-user SINR split into its power components (all linear, >= 0).
struct SinrBreakdown
{
    double gain = 0.0;  // useful signal
    double noise = 0.0; // N0
    double inci = 0.0;  // intra-cell interference
    double est = 0.0;   // estimation-error power (target-independent)
    double ici = 0.0;   // inter-cell interference
    double sinr = 0.0;  // gain / (noise + inci + est + ici)
};

/// The estimation-error power term: sum of p_n delta_n over the whole stack.
inline double estimation_error_power(const EstimateBlock &block, const RealVector &powers)
{
    return powers.dot(block.delta);
}

enum class CombinerForm
{
    kAuto, // whichever inverse is smaller, N x N vs M_bar x M_bar
    kN,    // A = ((N0+Est) I_N + H D H^H)^{-1} H D
    kMBar, // A = H D ((N0+Est) I_M + H^H H D)^{-1}
};

/**
 * Multi-cell MMSE combining matrix (one column per stacked user; only the
 * in-cell columns are ever used for decoding). Both algebraic forms are
 * realized through an HPD solve with U = H D^{1/2} and connected by the
 * push-through identity; est_power is target-independent, so one matrix
 * serves every in-cell target of the (RB, iteration) pair.
 */
inline ComplexMatrix mmse_combiner(const EstimateBlock &block, const RealVector &powers, double n0,
                                   double est_power, CombinerForm form = CombinerForm::kAuto)
{
    const Eigen::Index n_ant = block.h_hat.rows();
    const Eigen::Index m_bar = block.h_hat.cols();
    if (powers.size() != m_bar)
        throw std::invalid_argument("mmse_combiner: powers/estimate dimension mismatch");
    if (!std::isfinite(n0) || !std::isfinite(est_power) || n0 <= 0.0 || est_power < 0.0)
        throw std::invalid_argument("mmse_combiner: non-finite or negative noise/error power");
    if (!powers.allFinite() || (powers.array() <= 0.0).any())
        throw std::invalid_argument("mmse_combiner: powers must be finite and > 0");
    if (m_bar == 0)
        return ComplexMatrix(n_ant, 0);

    const double reg = n0 + est_power;
    const RealVector sqrt_p = powers.cwiseSqrt();
    const ComplexMatrix u = block.h_hat * sqrt_p.asDiagonal();
    const bool use_n = form == CombinerForm::kN || (form == CombinerForm::kAuto && n_ant <= m_bar);
    if (use_n) {
        ComplexMatrix r = u * u.adjoint();
        r.diagonal().array() += reg;
        return hermitian_solve(r, u) * sqrt_p.asDiagonal();
    }
    ComplexMatrix g = u.adjoint() * u;
    g.diagonal().array() += reg;
    ComplexMatrix rhs = ComplexMatrix::Zero(m_bar, m_bar);
    rhs.diagonal() = sqrt_p.cast<Complex>();
    return u * hermitian_solve(g, rhs);
}

/// Maximal ratio combining: each user's own estimate column is its combiner.
inline const ComplexMatrix &mrc_combiner(const EstimateBlock &block)
{
    return block.h_hat;
}

namespace detail
{
// Shared SINR assembly from the precomputed row of |a^H h_hat_n|^2 products.
inline SinrBreakdown sinr_from_products(const RealVector &prod_over_norm, double a_norm2,
                                        const EstimateBlock &block, const RealVector &powers,
                                        double n0, double est_power, Eigen::Index target)
{
    SinrBreakdown out;
    out.noise = n0;
    out.est = est_power;
    out.gain = powers(target) * prod_over_norm(target) / a_norm2;
    for (Eigen::Index n = 0; n < prod_over_norm.size(); ++n) {
        if (n == target)
            continue;
        const double term = powers(n) * prod_over_norm(n) / a_norm2;
        if (n < block.in_cell_count)
            out.inci += term;
        else
            out.ici += term;
    }
    out.sinr = out.gain / (out.noise + out.inci + out.est + out.ici);
    return out;
}
} // namespace detail

/**
 * Exact per-user SINR of in-cell target column `target` under combiner
 * column `a`. The ratio |a^H h_hat|^2 / ||a||^2 makes the value invariant to
 * any nonzero complex scaling of `a`.
 */
inline SinrBreakdown sinr(const EstimateBlock &block, const RealVector &powers, double n0,
                          const ComplexVector &a, Eigen::Index target)
{
    if (target < 0 || target >= block.h_hat.cols())
        throw std::logic_error("sinr: target column out of range");
    if (target >= block.in_cell_count)
        throw std::logic_error("sinr: target must be an in-cell column");
    const double a_norm2 = a.squaredNorm();
    if (a_norm2 <= 0.0)
        throw std::invalid_argument("sinr: combiner column is zero");
    RealVector prods(block.h_hat.cols());
    for (Eigen::Index n = 0; n < block.h_hat.cols(); ++n)
        prods(n) = std::norm(a.dot(block.h_hat.col(n)));
    const double est = estimation_error_power(block, powers);
    return detail::sinr_from_products(prods, a_norm2, block, powers, n0, est, target);
}

/**
 * SINRs of several in-cell targets under the corresponding columns of a
 * combining matrix; one batched product replaces per-target loops.
 */
inline std::vector<SinrBreakdown> sinr_table(const EstimateBlock &block, const RealVector &powers,
                                             double n0, const ComplexMatrix &combiner,
                                             const std::vector<Eigen::Index> &targets)
{
    const double est = estimation_error_power(block, powers);
    std::vector<SinrBreakdown> out;
    out.reserve(targets.size());
    if (targets.empty())
        return out;
    ComplexMatrix a_cols(block.h_hat.rows(), static_cast<Eigen::Index>(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i)
        a_cols.col(static_cast<Eigen::Index>(i)) = combiner.col(targets[i]);
    const ComplexMatrix prods = a_cols.adjoint() * block.h_hat; // targets x M_bar
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double a_norm2 = a_cols.col(row).squaredNorm();
        RealVector p2 = prods.row(row).cwiseAbs2().transpose();
        out.push_back(
            detail::sinr_from_products(p2, a_norm2, block, powers, n0, est, targets[i]));
    }
    return out;
}

/**
 * Monte Carlo check of the five-term post-combining power decomposition.
 * Conditioned on the estimates, data symbols, estimation errors and noise
 * are redrawn each sample; empirical per-term powers are compared against
 * the SinrBreakdown components scaled by ||a||^2.
 */
struct OraclePowers
{
    // order: signal, estimation error, intra-cell, inter-cell, noise
    std::array<double, 5> empirical{};
    std::array<double, 5> std_error{};
    std::array<double, 5> predicted{};
    double total_empirical = 0.0;
    double total_std_error = 0.0;
    double total_predicted = 0.0;
};

inline OraclePowers post_combined_power_oracle(const RngStream &stream, const EstimateBlock &block,
                                               const RealVector &powers, double n0,
                                               const ComplexVector &a, Eigen::Index target,
                                               int n_samples)
{
    if (n_samples < 1000)
        throw std::invalid_argument("post_combined_power_oracle: n_samples must be >= 1000");
    const Eigen::Index m_bar = block.h_hat.cols();
    const double a_norm2 = a.squaredNorm();

    // fixed projections a^H h_hat_n; unknown parts are drawn per sample
    ComplexVector proj(m_bar);
    for (Eigen::Index n = 0; n < m_bar; ++n)
        proj(n) = a.dot(block.h_hat.col(n));

    RngEngine eng(stream.child(kTagDataSymbols));
    std::array<double, 5> sum{}, sum_sq{};
    double total_sum = 0.0, total_sum_sq = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        std::array<Complex, 5> terms{};
        for (Eigen::Index n = 0; n < m_bar; ++n) {
            const Complex x = eng.complex_gaussian(powers(n));
            // a^H (h_hat - h) ~ CN(0, delta ||a||^2); only the projection matters
            const Complex err = eng.complex_gaussian(std::max(block.delta(n), 0.0) * a_norm2);
            if (n == target) {
                terms[0] += x * proj(n);
                terms[1] -= x * err;
            } else {
                const Complex through = x * (proj(n) - err); // a^H h_n x_n
                if (n < block.in_cell_count)
                    terms[2] += through;
                else
                    terms[3] += through;
            }
        }
        terms[4] = eng.complex_gaussian(n0 * a_norm2);
        Complex y_tilde = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double p = std::norm(terms[i]);
            sum[i] += p;
            sum_sq[i] += p * p;
            y_tilde += terms[i];
        }
        const double pt = std::norm(y_tilde);
        total_sum += pt;
        total_sum_sq += pt * pt;
    }

    OraclePowers out;
    const double inv_n = 1.0 / n_samples;
    for (std::size_t i = 0; i < 5; ++i) {
        out.empirical[i] = sum[i] * inv_n;
        const double var = std::max(sum_sq[i] * inv_n - out.empirical[i] * out.empirical[i], 0.0);
        out.std_error[i] = std::sqrt(var * inv_n);
    }
    out.total_empirical = total_sum * inv_n;
    const double tvar = std::max(total_sum_sq * inv_n - out.total_empirical * out.total_empirical, 0.0);
    out.total_std_error = std::sqrt(tvar * inv_n);

    const SinrBreakdown bd = sinr(block, powers, n0, a, target);
    double delta_in = 0.0, delta_out = 0.0;
    for (Eigen::Index n = 0; n < m_bar; ++n) {
        if (n == target)
            continue;
        if (n < block.in_cell_count)
            delta_in += powers(n) * block.delta(n);
        else
            delta_out += powers(n) * block.delta(n);
    }
    out.predicted[0] = bd.gain * a_norm2;
    out.predicted[1] = powers(target) * block.delta(target) * a_norm2;
    out.predicted[2] = (bd.inci + delta_in) * a_norm2;
    out.predicted[3] = (bd.ici + delta_out) * a_norm2;
    out.predicted[4] = n0 * a_norm2;
    out.total_predicted = out.predicted[0] + out.predicted[1] + out.predicted[2] +
                          out.predicted[3] + out.predicted[4];
    return out;
}

/// Large-N deterministic equivalent of the MRC SINR, split into its parts.
struct AsymptoticBreakdown
{
    double epsilon = 0.0;  // per-entry estimate variance of the target
    double sig = 0.0;      // N p g epsilon^2
    double int_nc = 0.0;   // non-coherent interference (does not scale with N)
    double int_c = 0.0;    // coherent interference (linear in N)
    double sinr_bar = 0.0; // sig / (epsilon (N0 + int_nc) + int_c)
};

/**
 * Asymptotic MRC SINR of an in-cell target from the correlation columns:
 * matched powers |p_n^H c_m|^2 split interference into the coherent part
 * (pilot reuse, scales with N) and the rest. The target's own matched term
 * is excluded from both interference sums; it is the signal.
 */
inline AsymptoticBreakdown asymptotic_sinr_mrc(const EstimateBlock &block,
                                               const ComplexMatrix &pilots,
                                               const RealVector &gains, const RealVector &powers,
                                               double n0, Eigen::Index target, int n_antennas)
{
    if (target < 0 || target >= block.c.cols() || target >= block.in_cell_count)
        throw std::logic_error("asymptotic_sinr_mrc: bad target column");
    const Eigen::Index m_bar = block.c.cols();
    const ComplexVector c = block.c.col(target);
    const ComplexVector matched = pilots.adjoint() * c; // p_n^H c_m

    AsymptoticBreakdown out;
    out.epsilon = n0 * c.squaredNorm();
    for (Eigen::Index n = 0; n < m_bar; ++n)
        out.epsilon += std::norm(matched(n)) * gains(n);
    out.sig = n_antennas * powers(target) * out.epsilon * out.epsilon;
    out.int_nc = powers(target) * block.delta(target);
    for (Eigen::Index n = 0; n < m_bar; ++n) {
        if (n == target)
            continue;
        out.int_nc += powers(n) * gains(n);
        out.int_c += std::norm(matched(n)) * powers(n) * gains(n) * gains(n);
    }
    out.int_c *= n_antennas;
    out.sinr_bar = out.sig / (out.epsilon * (n0 + out.int_nc) + out.int_c);
    return out;
}

inline AsymptoticBreakdown asymptotic_sinr_mrc(const EstimateBlock &block,
                                               const StackedInstance &inst, double n0,
                                               Eigen::Index target, int n_antennas)
{
    return asymptotic_sinr_mrc(block, inst.pilots, inst.gains(), inst.data_powers(), n0, target,
                               n_antennas);
}

} // namespace mcirsa

#endif
