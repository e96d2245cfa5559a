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

#ifndef MCIRSA_LINALG_HPP
#define MCIRSA_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "errors.hpp"
#include "rng.hpp"

namespace mcirsa
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline double max_abs(const ComplexMatrix &a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// max|A - A^H| <= tol * max|A|
inline bool is_hermitian(const ComplexMatrix &a, double tol = 1e-12)
{
    if (a.rows() != a.cols())
        return false;
    if (a.size() == 0)
        return true;
    return max_abs(a - a.adjoint()) <= tol * max_abs(a);
}

/**
 * i.i.d. circularly-symmetric complex Gaussian matrix, zero mean,
 * per-entry variance `variance` (real and imaginary parts variance/2 each).
 * Entries are filled in column-major order, one Box-Muller pair per entry.
 */
inline ComplexMatrix complex_gaussian(const RngStream &stream, Eigen::Index rows,
                                      Eigen::Index cols, double variance)
{
    if (variance <= 0.0)
        throw std::invalid_argument("complex_gaussian: variance must be > 0");
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("complex_gaussian: negative dimension");
    ComplexMatrix m(rows, cols);
    RngEngine eng(stream);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = eng.complex_gaussian(variance);
    return m;
}

/**
 * Solve A X = B for Hermitian positive-definite A via Cholesky (LLT).
 *
 * Throws std::invalid_argument on shape violations or a clearly
 * non-Hermitian A, and singular_system_error when the factorization fails
 * (A not positive definite).
 */
inline ComplexMatrix hermitian_solve(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("hermitian_solve: A must be square");
    if (a.rows() != b.rows())
        throw std::invalid_argument("hermitian_solve: A.rows() must equal B.rows()");
    if (a.size() == 0)
        return ComplexMatrix(0, b.cols());
    if (!is_hermitian(a))
        throw std::invalid_argument("hermitian_solve: A is not Hermitian");
    Eigen::LLT<ComplexMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw singular_system_error("hermitian_solve: Cholesky factorization failed");
    return llt.solve(b);
}

} // namespace mcirsa

#endif
