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

#include <cmath>

#include "rxlin/metrics.hpp"
#include "rxlin/rng.hpp"

using rxlin::cxd;

namespace {

std::vector<cxd> random_block(std::uint64_t seed, std::size_t n) {
    rxlin::Rng rng(seed);
    std::vector<cxd> v(n);
    for (cxd &x : v)
        x = cxd(rng.gaussian(), rng.gaussian());
    return v;
}

// Removes the component of v along s on the sample set (exact Gram-Schmidt).
void orthogonalize(std::vector<cxd> &v, const std::vector<cxd> &s) {
    cxd cross(0.0, 0.0);
    double ps = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        cross += std::conj(s[i]) * v[i];
        ps += std::norm(s[i]);
    }
    const cxd c = cross / ps;
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] -= c * s[i];
}

} // namespace

TEST_CASE("pure scaling gives zero distortion and the inverse scale") {
    const std::vector<cxd> s = random_block(1, 5000);
    std::vector<cxd> s_hat(s);
    for (cxd &v : s_hat)
        v *= 2.0;
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, s_hat);
    REQUIRE(std::abs(rep.alpha - cxd(0.5, 0.0)) < 1e-12);
    REQUIRE(rep.d_bar < 1e-14);
}

TEST_CASE("an uncorrelated estimate carries no signal") {
    const std::vector<cxd> s = random_block(2, 5000);
    std::vector<cxd> noise = random_block(3, 5000);
    orthogonalize(noise, s);
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, noise);
    REQUIRE(rep.d_bar == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("orthogonal additive noise follows the closed form") {
    const std::vector<cxd> s = random_block(4, 20000);
    std::vector<cxd> noise = random_block(5, 20000);
    orthogonalize(noise, s);
    double ps = 0.0;
    double pn = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ps += std::norm(s[i]);
        pn += std::norm(noise[i]);
    }
    const double rho = pn / ps;
    std::vector<cxd> s_hat(s);
    for (std::size_t i = 0; i < s.size(); ++i)
        s_hat[i] += noise[i];
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, s_hat);
    REQUIRE(rep.d_bar == Catch::Approx(rho / (1.0 + rho)).epsilon(1e-10));
}

TEST_CASE("report satisfies its internal identities") {
    const std::vector<cxd> s = random_block(6, 3000);
    std::vector<cxd> s_hat = random_block(7, 3000);
    for (std::size_t i = 0; i < s.size(); ++i)
        s_hat[i] = 0.7 * s[i] + 0.4 * s_hat[i];
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, s_hat);

    double ps = 0.0;
    for (const cxd &v : s)
        ps += std::norm(v);
    ps /= static_cast<double>(s.size());
    REQUIRE(rep.d == Catch::Approx(ps * rep.d_bar).margin(1e-12));
    REQUIRE(rep.d <= rep.mse + 1e-12);
    REQUIRE(rep.d_bar >= 0.0);
    REQUIRE(rep.d_bar <= 1.0);
}

TEST_CASE("distortion is invariant to complex rescaling of the estimate") {
    const std::vector<cxd> s = random_block(8, 4000);
    std::vector<cxd> s_hat = random_block(9, 4000);
    for (std::size_t i = 0; i < s.size(); ++i)
        s_hat[i] += 0.5 * s[i];
    const rxlin::DistortionReport base = rxlin::bussgang_distortion(s, s_hat);
    rxlin::Rng rng(10);
    for (int rep = 0; rep < 10; ++rep) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const cxd c = std::polar(rng.uniform(0.1, 10.0), phi);
        std::vector<cxd> scaled(s_hat);
        for (cxd &v : scaled)
            v *= c;
        const rxlin::DistortionReport r = rxlin::bussgang_distortion(s, scaled);
        REQUIRE(r.d_bar == Catch::Approx(base.d_bar).epsilon(1e-9));
        REQUIRE(r.d == Catch::Approx(base.d).epsilon(1e-9));
    }
}

TEST_CASE("the optimal scale beats random alternatives") {
    const std::vector<cxd> s = random_block(11, 4000);
    std::vector<cxd> s_hat = random_block(12, 4000);
    for (std::size_t i = 0; i < s.size(); ++i)
        s_hat[i] += s[i];
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, s_hat);
    rxlin::Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        const cxd alt = rep.alpha + cxd(0.2 * rng.gaussian(), 0.2 * rng.gaussian());
        double mse = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            mse += std::norm(s[i] - alt * s_hat[i]);
        mse /= static_cast<double>(s.size());
        REQUIRE(mse >= rep.d - 1e-12);
    }
}

TEST_CASE("degenerate inputs") {
    const std::vector<cxd> s = random_block(14, 100);
    const std::vector<cxd> zeros(100, cxd(0.0, 0.0));
    const rxlin::DistortionReport rep = rxlin::bussgang_distortion(s, zeros);
    REQUIRE(rep.alpha == cxd(0.0, 0.0));
    REQUIRE(rep.d_bar == Catch::Approx(1.0));

    REQUIRE_THROWS_AS(rxlin::bussgang_distortion(zeros, s), rxlin::config_error);
    const std::vector<cxd> short_block(3, cxd(1.0, 0.0));
    REQUIRE_THROWS_AS(rxlin::bussgang_distortion(s, short_block), rxlin::config_error);
}

TEST_CASE("link budget reference cases") {
    const rxlin::LinkBudget case1 = rxlin::link_budget(23.0, 12.0, 75.0, 3.0, 10.0);
    REQUIRE(case1.rx_dbm == -37.0);
    REQUIRE(case1.rx_peak_dbm == -27.0);

    const rxlin::LinkBudget zero = rxlin::link_budget(0.0, 0.0, 0.0, 0.0, 0.0);
    REQUIRE(zero.rx_dbm == 0.0);
    REQUIRE(zero.rx_peak_dbm == 0.0);

    // Plain affine sum for the 73 GHz case.
    const rxlin::LinkBudget case2 = rxlin::link_budget(23.0, 15.0, 83.0, 3.0, 10.0);
    REQUIRE(case2.rx_dbm == -42.0);
    REQUIRE(case2.rx_peak_dbm == -32.0);
}
