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

#ifndef MCIRSA_MCIRSA_HPP
#define MCIRSA_MCIRSA_HPP

#include "access.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "decoder.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "linalg.hpp"
#include "output.hpp"
#include "pilots.hpp"
#include "receiver.hpp"
#include "rng.hpp"
#include "simulate.hpp"
#include "topology.hpp"

#endif
