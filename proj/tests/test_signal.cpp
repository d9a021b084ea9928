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

#include "rxlin/signal.hpp"

using rxlin::cxd;

TEST_CASE("dbm_to_amplitude reference points") {
    REQUIRE(rxlin::dbm_to_amplitude(-10.0, 50.0) == Catch::Approx(0.1).epsilon(1e-12));
    REQUIRE(rxlin::dbm_to_amplitude(0.0, 50.0) == Catch::Approx(0.31622776601).epsilon(1e-10));
    REQUIRE(rxlin::dbm_to_amplitude(-40.0, 50.0) == Catch::Approx(3.1622776601e-3).epsilon(1e-10));
}

TEST_CASE("dbm_to_amplitude is strictly increasing and scales by 10 per 20 dB") {
    double prev = 0.0;
    for (double p = -100.0; p <= 0.0; p += 2.5) {
        const double a = rxlin::dbm_to_amplitude(p);
        REQUIRE(a > prev);
        prev = a;
        const double a20 = rxlin::dbm_to_amplitude(p + 20.0);
        REQUIRE(a20 == Catch::Approx(10.0 * a).epsilon(1e-14));
    }
}

TEST_CASE("scale_to_power hits the target RMS") {
    rxlin::WaveformConfig cfg;
    cfg.modulation_order = 4;
    cfg.oversampling_factor = 1;
    cfg.symbol_count = 4096;
    cfg.pulse_shape = rxlin::PulseShape::rect_hold;
    cfg.seed = 9;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 1);

    const std::vector<cxd> scaled = rxlin::scale_to_power(frame.row_span(0), -70.0, 50.0);
    const double rms = std::sqrt(rxlin::mean_square(scaled));
    REQUIRE(rms == Catch::Approx(7.0710678e-5).epsilon(1e-7));

    // Already at target: returned unchanged.
    const std::vector<cxd> again = rxlin::scale_to_power(scaled, -70.0, 50.0);
    for (std::size_t i = 0; i < again.size(); ++i)
        REQUIRE(std::abs(again[i] - scaled[i]) <= 1e-12 * std::abs(scaled[i]));

    // Very low targets scale without underflow to zero.
    const std::vector<cxd> tiny = rxlin::scale_to_power(frame.row_span(0), -200.0, 50.0);
    const double tiny_rms = std::sqrt(rxlin::mean_square(tiny));
    REQUIRE(tiny_rms ==
            Catch::Approx(rxlin::dbm_to_amplitude(-200.0, 50.0) / std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(tiny_rms == Catch::Approx(2.2360680e-11).epsilon(1e-7));
    REQUIRE(tiny_rms > 0.0);
}

TEST_CASE("scale_to_power rejects an all-zero input") {
    const std::vector<cxd> zeros(16, cxd(0.0, 0.0));
    REQUIRE_THROWS_AS(rxlin::scale_to_power(zeros, -30.0), rxlin::config_error);
}

TEST_CASE("power calibration round-trips within 0.05 dB") {
    rxlin::WaveformConfig cfg;
    cfg.symbol_count = 20000;
    cfg.oversampling_factor = 5;
    cfg.seed = 31;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 1);
    for (const double target : {-100.0, -70.0, -43.0, -10.0, 0.0}) {
        const std::vector<cxd> scaled = rxlin::scale_to_power(frame.row_span(0), target);
        REQUIRE(rxlin::measure_power_dbm(scaled) == Catch::Approx(target).margin(0.05));
    }
}

TEST_CASE("QPSK rect-hold frame stays on the constellation with exact unit power") {
    rxlin::WaveformConfig cfg;
    cfg.modulation_order = 4;
    cfg.oversampling_factor = 1;
    cfg.symbol_count = 2000;
    cfg.pulse_shape = rxlin::PulseShape::rect_hold;
    cfg.seed = 1;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 2);
    const double lvl = 1.0 / std::sqrt(2.0);
    for (const cxd &v : frame.data()) {
        REQUIRE(std::abs(std::abs(v.real()) - lvl) < 1e-15);
        REQUIRE(std::abs(std::abs(v.imag()) - lvl) < 1e-15);
        REQUIRE(std::abs(v) == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("16-QAM rect-hold samples come from the scaled constellation") {
    rxlin::WaveformConfig cfg;
    cfg.modulation_order = 16;
    cfg.oversampling_factor = 1;
    cfg.symbol_count = 800;
    cfg.pulse_shape = rxlin::PulseShape::rect_hold;
    cfg.seed = 77;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 1);
    const double norm = 1.0 / std::sqrt(10.0);
    for (const cxd &v : frame.data()) {
        const double re = v.real() / norm;
        const double im = v.imag() / norm;
        const bool re_ok = std::abs(std::abs(re) - 1.0) < 1e-12 || std::abs(std::abs(re) - 3.0) < 1e-12;
        const bool im_ok = std::abs(std::abs(im) - 1.0) < 1e-12 || std::abs(std::abs(im) - 3.0) < 1e-12;
        REQUIRE(re_ok);
        REQUIRE(im_ok);
    }
}

TEST_CASE("16-QAM empirical power approaches unity") {
    rxlin::WaveformConfig cfg;
    cfg.modulation_order = 16;
    cfg.oversampling_factor = 1;
    cfg.symbol_count = 100000;
    cfg.pulse_shape = rxlin::PulseShape::rect_hold;
    cfg.seed = 4242;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 1);
    REQUIRE(rxlin::mean_square(frame.row_span(0)) == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("RRC-shaped frames keep unit power within 0.1 dB") {
    rxlin::WaveformConfig cfg;
    cfg.symbol_count = 5000;
    cfg.oversampling_factor = 5;
    cfg.seed = 555;
    const rxlin::CxMat frame = rxlin::gen_qam_frame(cfg, 3);
    for (std::size_t u = 0; u < frame.rows(); ++u) {
        const double db = 10.0 * std::log10(rxlin::mean_square(frame.row_span(u)));
        REQUIRE(std::abs(db) < 0.1);
    }
}

TEST_CASE("frames are bit-identical under repeated generation") {
    rxlin::WaveformConfig cfg;
    cfg.symbol_count = 500;
    cfg.seed = 66;
    const rxlin::CxMat a = rxlin::gen_qam_frame(cfg, 4);
    const rxlin::CxMat b = rxlin::gen_qam_frame(cfg, 4);
    REQUIRE(a == b);
    cfg.seed = 67;
    const rxlin::CxMat c = rxlin::gen_qam_frame(cfg, 4);
    REQUIRE(!(a == c));
}

TEST_CASE("invalid modulation order is rejected") {
    rxlin::WaveformConfig cfg;
    cfg.modulation_order = 8; // not a perfect square
    REQUIRE_THROWS_AS(rxlin::gen_qam_frame(cfg, 1), rxlin::config_error);
    cfg.modulation_order = 16;
    cfg.oversampling_factor = 0;
    REQUIRE_THROWS_AS(rxlin::gen_qam_frame(cfg, 1), rxlin::config_error);
}

TEST_CASE("rrc taps are symmetric with energy equal to the oversampling factor") {
    const std::vector<double> h = rxlin::rrc_taps(5, 0.3, 8);
    REQUIRE(h.size() == 41);
    double e = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        e += h[i] * h[i];
        REQUIRE(h[i] == Catch::Approx(h[h.size() - 1 - i]).margin(1e-12));
    }
    REQUIRE(e == Catch::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("make_transmit_frame scales each user to its power") {
    rxlin::WaveformConfig cfg;
    cfg.symbol_count = 2000;
    cfg.seed = 12;
    const std::vector<double> powers{-50.0, -60.0, -70.0};
    const rxlin::TransmitFrame frame = rxlin::make_transmit_frame(cfg, powers);
    for (std::size_t u = 0; u < 3; ++u)
        REQUIRE(rxlin::measure_power_dbm(frame.samples.row_span(u)) ==
                Catch::Approx(powers[u]).margin(1e-9));
}
