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
//
// Multi-user baseband waveform generation and power bookkeeping. Signal
// levels are volt amplitudes at the receive-antenna reference plane; a
// stream "at p dBm" has mean-square envelope 10^((p-30)/10) * R volt^2,
// i.e. the peak amplitude of the equivalent sinusoid is sqrt(2*P*R).

#ifndef RXLIN_SIGNAL_HPP
#define RXLIN_SIGNAL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rxlin/errors.hpp"
#include "rxlin/linalg.hpp"
#include "rxlin/rng.hpp"

namespace rxlin {

constexpr double kDefaultImpedanceOhm = 50.0;

enum class PulseShape { rect_hold, root_raised_cosine };

struct WaveformConfig {
    int modulation_order = 16;
    int oversampling_factor = 5;
    int symbol_count = 10000;
    PulseShape pulse_shape = PulseShape::root_raised_cosine;
    double rrc_rolloff = 0.3;
    int rrc_span_symbols = 8;
    std::uint64_t seed = 0;

    void validate() const {
        if (modulation_order < 4)
            throw config_error("WaveformConfig: modulation_order must be >= 4");
        const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(modulation_order))));
        if (m * m != modulation_order)
            throw config_error("WaveformConfig: modulation_order must be a perfect square");
        if (oversampling_factor < 1)
            throw config_error("WaveformConfig: oversampling_factor must be >= 1");
        if (symbol_count < 1)
            throw config_error("WaveformConfig: symbol_count must be >= 1");
        if (pulse_shape == PulseShape::root_raised_cosine) {
            if (!(rrc_rolloff > 0.0 && rrc_rolloff < 1.0))
                throw config_error("WaveformConfig: rrc_rolloff must be in (0, 1)");
            if (rrc_span_symbols < 1)
                throw config_error("WaveformConfig: rrc_span_symbols must be >= 1");
        }
    }

    int samples_per_frame() const { return symbol_count * oversampling_factor; }
};

/// Peak volt amplitude of a sinusoid that dissipates power_dbm in the given
/// impedance: A = sqrt(2 * P * R).
inline double dbm_to_amplitude(double power_dbm, double impedance_ohm = kDefaultImpedanceOhm) {
    const double watts = std::pow(10.0, (power_dbm - 30.0) / 10.0);
    return std::sqrt(2.0 * watts * impedance_ohm);
}

/// Mean-square envelope (volt^2) of a stream at power_dbm.
inline double dbm_to_mean_square(double power_dbm, double impedance_ohm = kDefaultImpedanceOhm) {
    return std::pow(10.0, (power_dbm - 30.0) / 10.0) * impedance_ohm;
}

/// Back-conversion: power in dBm of a stream with the given mean-square
/// envelope in volt^2.
inline double mean_square_to_dbm(double mean_square, double impedance_ohm = kDefaultImpedanceOhm) {
    return 10.0 * std::log10(mean_square / impedance_ohm) + 30.0;
}

inline double mean_square(std::span<const cxd> samples) {
    double acc = 0.0;
    for (const cxd &v : samples)
        acc += std::norm(v);
    return acc / static_cast<double>(samples.size());
}

/// Empirical power of a sample sequence in dBm.
inline double measure_power_dbm(std::span<const cxd> samples,
                                double impedance_ohm = kDefaultImpedanceOhm) {
    return mean_square_to_dbm(mean_square(samples), impedance_ohm);
}

/// Rescales a sequence by a positive real constant so that its RMS amplitude
/// equals dbm_to_amplitude(target_dbm)/sqrt(2).
inline std::vector<cxd> scale_to_power(std::span<const cxd> samples, double target_dbm,
                                       double impedance_ohm = kDefaultImpedanceOhm) {
    if (samples.empty())
        throw config_error("scale_to_power: empty input");
    const double ms = mean_square(samples);
    if (!(ms > 0.0))
        throw config_error("scale_to_power: input has zero power");
    const double c = std::sqrt(dbm_to_mean_square(target_dbm, impedance_ohm) / ms);
    std::vector<cxd> out(samples.begin(), samples.end());
    for (cxd &v : out)
        v *= c;
    return out;
}

/// Root-raised-cosine taps at oversampling L, normalized so the sum of
/// squared taps equals L (a unit-power upsampled symbol stream keeps unit
/// power after filtering).
inline std::vector<double> rrc_taps(int oversampling, double rolloff, int span_symbols) {
    const int half = span_symbols * oversampling / 2;
    const int len = 2 * half + 1;
    std::vector<double> h(len);
    const double a = rolloff;
    for (int k = 0; k < len; ++k) {
        const double t = static_cast<double>(k - half) / oversampling;
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 - a + 4.0 * a / M_PI;
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * a)) < 1e-9) {
            v = (a / std::sqrt(2.0)) *
                ((1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * a)) +
                 (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * a)));
        } else {
            const double num = std::sin(M_PI * t * (1.0 - a)) +
                               4.0 * a * t * std::cos(M_PI * t * (1.0 + a));
            const double den = M_PI * t * (1.0 - 16.0 * a * a * t * t);
            v = num / den;
        }
        h[k] = v;
    }
    double e = 0.0;
    for (double v : h)
        e += v * v;
    const double scale = std::sqrt(static_cast<double>(oversampling) / e);
    for (double &v : h)
        v *= scale;
    return h;
}

namespace detail {

/// Unit-average-energy square QAM constellation point for symbol index
/// idx in [0, M).
inline cxd qam_point(int idx, int levels_per_dim, double norm) {
    const int a = idx % levels_per_dim;
    const int b = idx / levels_per_dim;
    const double re = static_cast<double>(2 * a - (levels_per_dim - 1));
    const double im = static_cast<double>(2 * b - (levels_per_dim - 1));
    return cxd(re * norm, im * norm);
}

inline std::vector<cxd> gen_user_stream(const WaveformConfig &cfg, std::uint64_t user_seed) {
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.modulation_order))));
    const double norm = std::sqrt(3.0 / (2.0 * (static_cast<double>(cfg.modulation_order) - 1.0)));
    Rng rng(user_seed);
    std::vector<cxd> symbols(cfg.symbol_count);
    for (cxd &s : symbols)
        s = qam_point(static_cast<int>(rng.uniform_index(cfg.modulation_order)), m, norm);

    const int total = cfg.samples_per_frame();
    std::vector<cxd> out(total, cxd(0.0, 0.0));
    const int l = cfg.oversampling_factor;
    if (cfg.pulse_shape == PulseShape::rect_hold) {
        for (int i = 0; i < cfg.symbol_count; ++i)
            for (int j = 0; j < l; ++j)
                out[i * l + j] = symbols[i];
        return out;
    }
    // Circular RRC shaping keeps the frame power stationary (no edge
    // transients) and the output deterministic.
    const std::vector<double> h = rrc_taps(l, cfg.rrc_rolloff, cfg.rrc_span_symbols);
    const int half = static_cast<int>(h.size()) / 2;
    for (int i = 0; i < cfg.symbol_count; ++i) {
        const cxd s = symbols[i];
        const int base = i * l - half;
        for (std::size_t k = 0; k < h.size(); ++k) {
            int t = base + static_cast<int>(k);
            t %= total;
            if (t < 0)
                t += total;
            out[t] += s * h[k];
        }
    }
    return out;
}

} // namespace detail

/// Generates a U x T matrix of i.i.d. QAM sample streams, one row per user,
/// each with unit average power (exact for rect-hold, empirical for RRC).
/// Rows use independent sub-seeds derived from cfg.seed, so the result does
/// not depend on generation order.
inline CxMat gen_qam_frame(const WaveformConfig &cfg, int num_users) {
    cfg.validate();
    if (num_users < 1)
        throw config_error("gen_qam_frame: num_users must be >= 1");
    CxMat frame(num_users, cfg.samples_per_frame());
    for (int u = 0; u < num_users; ++u) {
        const std::vector<cxd> row = detail::gen_user_stream(cfg, derive_seed(cfg.seed, 0x5157u, u));
        for (std::size_t t = 0; t < row.size(); ++t)
            frame(u, t) = row[t];
    }
    return frame;
}

struct TransmitFrame {
    CxMat samples;                          // U x T, volts at the receive reference plane
    std::vector<double> per_user_power_dbm; // length U
};

/// Generates a frame and scales each user row to its target power.
inline TransmitFrame make_transmit_frame(const WaveformConfig &cfg,
                                         std::span<const double> per_user_power_dbm,
                                         double impedance_ohm = kDefaultImpedanceOhm) {
    const int num_users = static_cast<int>(per_user_power_dbm.size());
    TransmitFrame frame;
    frame.samples = gen_qam_frame(cfg, num_users);
    frame.per_user_power_dbm.assign(per_user_power_dbm.begin(), per_user_power_dbm.end());
    for (int u = 0; u < num_users; ++u) {
        const std::vector<cxd> scaled =
            scale_to_power(frame.samples.row_span(u), per_user_power_dbm[u], impedance_ohm);
        for (std::size_t t = 0; t < scaled.size(); ++t)
            frame.samples(u, t) = scaled[t];
    }
    return frame;
}

} // namespace rxlin

#endif // RXLIN_SIGNAL_HPP
