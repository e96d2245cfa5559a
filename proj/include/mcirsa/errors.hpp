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

#ifndef MCIRSA_ERRORS_HPP
#define MCIRSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcirsa
{

/// A Hermitian positive-definite factorization failed (matrix not PD).
class singular_system_error : public std::runtime_error
{
  public:
    explicit singular_system_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// SINR was requested for a user that does not transmit in the given RB.
class not_transmitting_error : public std::logic_error
{
  public:
    explicit not_transmitting_error(const std::string &msg) : std::logic_error(msg) {}
};

/// SINR was requested for a user that has already been decoded and removed.
class already_decoded_error : public std::logic_error
{
  public:
    explicit already_decoded_error(const std::string &msg) : std::logic_error(msg) {}
};

/// File output failed; the message carries the offending path.
class io_error : public std::runtime_error
{
  public:
    explicit io_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace mcirsa

#endif
