// SPDX-License-Identifier: Apache-2.0
//
// rxlin: DSP linearization library for fully digital receiver arrays
// Copyright (C) 2026 the rxlin authors
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

#ifndef RXLIN_RXLIN_HPP
#define RXLIN_RXLIN_HPP

#include "rxlin/channel.hpp"
#include "rxlin/errors.hpp"
#include "rxlin/harness.hpp"
#include "rxlin/impairments.hpp"
#include "rxlin/linalg.hpp"
#include "rxlin/linearize.hpp"
#include "rxlin/metrics.hpp"
#include "rxlin/rng.hpp"
#include "rxlin/signal.hpp"

#endif // RXLIN_RXLIN_HPP
