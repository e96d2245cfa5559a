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

#ifndef MCIRSA_RNG_HPP
#define MCIRSA_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>

namespace mcirsa
{

namespace detail
{
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer. Pure 64-bit integer arithmetic, so the produced
// stream is identical on every platform and thread schedule.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

/**
 * Identity of a deterministic random substream.
 *
 * A stream is fully determined by (master_seed, path), where the path is a
 * list of integers (run index, RB index, purpose tag, ...). Derivation is a
 * pure function with no shared state, so distinct paths can be consumed
 * concurrently and re-derived in any order.
 */
class RngStream
{
  public:
    explicit constexpr RngStream(std::uint64_t master_seed)
        : base_(detail::mix64(master_seed + detail::kGoldenGamma))
    {
    }

    /// Substream for one additional path element.
    [[nodiscard]] constexpr RngStream child(std::uint64_t element) const
    {
        RngStream s(*this);
        s.base_ = detail::mix64(base_ ^ detail::mix64(element + detail::kGoldenGamma));
        return s;
    }

    [[nodiscard]] constexpr std::uint64_t base() const { return base_; }

    friend constexpr bool operator==(const RngStream &a, const RngStream &b) = default;

  private:
    std::uint64_t base_;
};

/// Stream identified by (master_seed, path).
[[nodiscard]] constexpr RngStream derive_stream(std::uint64_t master_seed,
                                                std::span<const std::uint64_t> path)
{
    RngStream s(master_seed);
    for (std::uint64_t e : path)
        s = s.child(e);
    return s;
}

[[nodiscard]] constexpr RngStream derive_stream(std::uint64_t master_seed,
                                                std::initializer_list<std::uint64_t> path)
{
    return derive_stream(master_seed, std::span<const std::uint64_t>(path.begin(), path.size()));
}

/**
 * Counter-based sampler over a stream. Word i of the stream is
 * mix64(base + (i+1)*gamma), so the whole sequence is a pure function of the
 * stream identity and needs no sequential generator state.
 */
class RngEngine
{
  public:
    explicit constexpr RngEngine(const RngStream &stream) : base_(stream.base()) {}

    constexpr std::uint64_t next_u64()
    {
        return detail::mix64(base_ + (++counter_) * detail::kGoldenGamma);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1); safe as a logarithm argument.
    double uniform_open01()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_below(std::uint64_t n)
    {
        __extension__ using uint128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<uint128>(next_u64()) * n) >> 64);
    }

    /// One Box-Muller pair of independent standard normals.
    void gaussian_pair(double &z0, double &z1)
    {
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(phi);
        z1 = r * std::sin(phi);
    }

    /// Circularly-symmetric complex Gaussian, per-sample variance `variance`.
    std::complex<double> complex_gaussian(double variance)
    {
        double re = 0.0, im = 0.0;
        gaussian_pair(re, im);
        const double s = std::sqrt(0.5 * variance);
        return {re * s, im * s};
    }

  private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// Purpose tags used as stream path elements; keeps substreams disjoint by role.
enum StreamTag : std::uint64_t
{
    kTagUserDrop = 1,
    kTagAccess = 2,
    kTagPilotAssign = 3,
    kTagChannel = 4,
    kTagNoise = 5,
    kTagDataSymbols = 6,
    kTagFading = 7,
};

} // namespace mcirsa

#endif
