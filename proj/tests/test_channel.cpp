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

#include "rxlin/channel.hpp"
#include "rxlin/rng.hpp"

using rxlin::cxd;
using rxlin::CxMat;

TEST_CASE("steering vector reference points") {
    const std::vector<cxd> broadside = rxlin::steering_vector(0.0, 4);
    for (const cxd &v : broadside)
        REQUIRE(std::abs(v - cxd(1.0, 0.0)) < 1e-15);

    const std::vector<cxd> endfire = rxlin::steering_vector(M_PI / 2.0, 2);
    REQUIRE(std::abs(endfire[0] - cxd(1.0, 0.0)) < 1e-15);
    REQUIRE(std::abs(endfire[1] - cxd(-1.0, 0.0)) < 1e-12);

    // sin(pi/6) = 1/2 puts successive elements a quarter turn apart.
    const std::vector<cxd> thirty = rxlin::steering_vector(M_PI / 6.0, 3);
    REQUIRE(std::abs(thirty[0] - cxd(1.0, 0.0)) < 1e-12);
    REQUIRE(std::abs(thirty[1] - cxd(0.0, 1.0)) < 1e-12);
    REQUIRE(std::abs(thirty[2] - cxd(-1.0, 0.0)) < 1e-12);

    for (const cxd &v : rxlin::steering_vector(0.7, 16))
        REQUIRE(std::abs(v) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-antenna single-user channel has the expected null space") {
    const double aoas[] = {M_PI / 2.0};
    const rxlin::MultiUserChannel ch = rxlin::build_channel(aoas, 2);
    REQUIRE(std::abs(ch.h(0, 0) - cxd(1.0, 0.0)) < 1e-12);
    REQUIRE(std::abs(ch.h(1, 0) - cxd(-1.0, 0.0)) < 1e-12);
    REQUIRE(ch.null_basis.rows() == 1);
    // Orthogonal complement of [1, -1] is [1, 1]/sqrt(2) up to a unit phase.
    const cxd n0 = ch.null_basis(0, 0);
    const cxd n1 = ch.null_basis(0, 1);
    REQUIRE(std::abs(std::abs(n0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    REQUIRE(std::abs(n0 - n1) < 1e-12);
    REQUIRE(std::abs(n0 * ch.h(0, 0) + n1 * ch.h(1, 0)) < 1e-12);
}

TEST_CASE("channel invariants hold for random admissible draws") {
    rxlin::Rng rng(314);
    for (int rep = 0; rep < 100; ++rep) {
        const std::vector<double> aoas = rxlin::draw_aoas(rng, 8, 64);
        const rxlin::MultiUserChannel ch = rxlin::build_channel(aoas, 64);

        for (const cxd &v : ch.h.data())
            REQUIRE(std::abs(std::abs(v) - 1.0) < 1e-12);

        const CxMat nh = rxlin::mul(ch.null_basis, ch.h);
        REQUIRE(rxlin::frobenius_norm(nh) < 1e-10 * rxlin::frobenius_norm(ch.h));

        CxMat nnh = rxlin::mul(ch.null_basis, rxlin::adjoint(ch.null_basis));
        for (std::size_t i = 0; i < nnh.rows(); ++i)
            nnh(i, i) -= 1.0;
        REQUIRE(rxlin::max_abs(nnh) < 1e-10);

        CxMat wh_h = rxlin::mul(ch.zf_combiner, ch.h);
        for (std::size_t i = 0; i < wh_h.rows(); ++i)
            wh_h(i, i) -= 1.0;
        REQUIRE(rxlin::max_abs(wh_h) < 1e-10);
    }
}

TEST_CASE("duplicate angles make the channel rank deficient") {
    const std::vector<double> aoas{0.3, 0.3, -0.2};
    REQUIRE_THROWS_AS(rxlin::build_channel(aoas, 16), rxlin::conditioning_error);
}

TEST_CASE("apply_channel matches a naive per-entry product") {
    rxlin::Rng rng(12);
    const std::vector<double> aoas = rxlin::draw_aoas(rng, 4, 16);
    const rxlin::MultiUserChannel ch = rxlin::build_channel(aoas, 16);
    CxMat s(4, 50);
    for (cxd &v : s.data())
        v = cxd(rng.gaussian(), rng.gaussian());
    const CxMat x = rxlin::apply_channel(ch, s);
    double max_diff = 0.0;
    for (std::size_t n = 0; n < 16; ++n)
        for (std::size_t t = 0; t < 50; ++t) {
            cxd acc(0.0, 0.0);
            for (std::size_t u = 0; u < 4; ++u)
                acc += ch.h(n, u) * s(u, t);
            max_diff = std::max(max_diff, std::abs(acc - x(n, t)));
        }
    REQUIRE(max_diff < 1e-12);

    CxMat zeros(4, 10);
    const CxMat out = rxlin::apply_channel(ch, zeros);
    REQUIRE(rxlin::max_abs(out) == 0.0);

    CxMat wrong(5, 10);
    REQUIRE_THROWS_AS(rxlin::apply_channel(ch, wrong), rxlin::config_error);
}

TEST_CASE("single constant stream reproduces the steering vector per column") {
    const std::vector<double> aoas{0.4};
    const rxlin::MultiUserChannel ch = rxlin::build_channel(aoas, 8);
    CxMat s(1, 5);
    for (cxd &v : s.data())
        v = cxd(1.0, 0.0);
    const CxMat x = rxlin::apply_channel(ch, s);
    for (std::size_t t = 0; t < 5; ++t)
        for (std::size_t n = 0; n < 8; ++n)
            REQUIRE(std::abs(x(n, t) - ch.h(n, 0)) < 1e-14);
}

TEST_CASE("zero-forcing reconstructs the clean streams") {
    rxlin::Rng rng(88);
    const std::vector<double> aoas = rxlin::draw_aoas(rng, 6, 32);
    const rxlin::MultiUserChannel ch = rxlin::build_channel(aoas, 32);
    CxMat s(6, 200);
    for (cxd &v : s.data())
        v = cxd(rng.gaussian(), rng.gaussian());
    const CxMat x = rxlin::apply_channel(ch, s);
    const CxMat s_hat = rxlin::mul(ch.zf_combiner, x);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < s.data().size(); ++i)
        max_diff = std::max(max_diff, std::abs(s.data()[i] - s_hat.data()[i]));
    REQUIRE(max_diff < 1e-9);

    // No clean signal leaks into the null space.
    for (std::size_t t = 0; t < 10; ++t) {
        std::vector<cxd> col(32);
        for (std::size_t n = 0; n < 32; ++n)
            col[n] = x(n, t);
        const std::vector<cxd> p = rxlin::mul_vec(ch.null_basis, col);
        REQUIRE(rxlin::norm2(p) < 1e-9 * rxlin::norm2(col));
    }
}

TEST_CASE("imd_kernel matches the brute-force partial sum") {
    rxlin::Rng rng(71);
    for (int rep = 0; rep < 1000; ++rep) {
        const double tl = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
        const double tm = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
        const double tn = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
        const double s = std::sin(tl) + std::sin(tm) - std::sin(tn);
        if (std::abs(s) > 1.0)
            continue;
        const int nr = 64;
        cxd ref(0.0, 0.0);
        for (int n = 0; n < nr; ++n) {
            const double phase = M_PI * n * s;
            ref += cxd(std::cos(phase), std::sin(phase));
        }
        const cxd k = rxlin::imd_kernel(tl, tm, tn, nr);
        REQUIRE(std::abs(k - ref) < 1e-10);
        REQUIRE(std::abs(k) <= nr * (1.0 + 1e-12));
    }
}

TEST_CASE("imd_kernel limits and zeros") {
    // Image aligned with broadside gives the coherent limit Nr; the same
    // happens whenever the three sines cancel.
    const cxd k = rxlin::imd_kernel(0.0, 0.0, 0.0, 64);
    REQUIRE(std::abs(k - cxd(64.0, 0.0)) < 1e-9);
    const cxd k2 = rxlin::imd_kernel(0.0, 0.3, 0.3, 64);
    REQUIRE(std::abs(k2 - cxd(64.0, 0.0)) < 1e-9);

    // sin(omega) = 2/Nr lands on the first Dirichlet zero.
    const int nr = 64;
    const double target = 2.0 / nr;
    const double theta = std::asin(target); // l = theta, m = n = 0
    const cxd z = rxlin::imd_kernel(theta, 0.0, 0.0, nr);
    REQUIRE(std::abs(z) < 1e-9);
}

TEST_CASE("imd_kernel flags images outside visible space") {
    REQUIRE_THROWS_AS(rxlin::imd_kernel(1.2, 1.2, -1.2, 16), rxlin::visible_space_error);
}

TEST_CASE("draw_aoas respects range and minimum separation") {
    rxlin::Rng rng(5150);
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<double> aoas = rxlin::draw_aoas(rng, 8, 64);
        for (const double a : aoas)
            REQUIRE(std::abs(a) <= M_PI / 3.0);
        for (std::size_t i = 0; i < aoas.size(); ++i)
            for (std::size_t j = i + 1; j < aoas.size(); ++j)
                REQUIRE(std::abs(std::sin(aoas[i]) - std::sin(aoas[j])) >= 2.0 / 64.0);
    }
}
