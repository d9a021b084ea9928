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

#ifndef RXLIN_ERRORS_HPP
#define RXLIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rxlin {

/// Invalid or inconsistent configuration supplied by the caller.
class config_error : public std::invalid_argument {
  public:
    explicit config_error(const std::string &msg) : std::invalid_argument(msg) {}
};

/// A matrix was rank deficient or too ill-conditioned to factorize.
class conditioning_error : public std::runtime_error {
  public:
    explicit conditioning_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// A geometric argument places a signal outside visible space.
class visible_space_error : public std::domain_error {
  public:
    explicit visible_space_error(const std::string &msg) : std::domain_error(msg) {}
};

} // namespace rxlin

#endif // RXLIN_ERRORS_HPP
