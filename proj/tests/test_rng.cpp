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

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "rxlin/rng.hpp"

TEST_CASE("derive_seed is deterministic and separates streams") {
    REQUIRE(rxlin::derive_seed(1, 2, 3) == rxlin::derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b)
            seen.insert(rxlin::derive_seed(42, a, b));
    REQUIRE(seen.size() == 400);
}

TEST_CASE("uniform stays in range and covers both halves") {
    rxlin::Rng rng(11);
    int low = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        if (u < 0.5)
            ++low;
    }
    REQUIRE(low > 4500);
    REQUIRE(low < 5500);
}

TEST_CASE("uniform_index hits every bucket of a non-power-of-two range") {
    rxlin::Rng rng(3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 14000; ++i)
        ++counts[rng.uniform_index(7)];
    for (const int c : counts) {
        REQUIRE(c > 1600);
        REQUIRE(c < 2400);
    }
}

TEST_CASE("gaussian has near-standard moments") {
    rxlin::Rng rng(17);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sq += g * g;
    }
    REQUIRE(std::abs(sum / n) < 0.01);
    REQUIRE(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("identical seeds reproduce identical streams") {
    rxlin::Rng a(987654321);
    rxlin::Rng b(987654321);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}
