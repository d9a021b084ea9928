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
// Front-end impairments: the LNA AM-AM model (third-order polynomial up to
// the saturation knee, hard magnitude limit beyond it) and the low-resolution
// mid-rise ADC with an AGC-set clip level.

#ifndef RXLIN_IMPAIRMENTS_HPP
#define RXLIN_IMPAIRMENTS_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "rxlin/errors.hpp"
#include "rxlin/linalg.hpp"
#include "rxlin/metrics.hpp"
#include "rxlin/signal.hpp"

namespace rxlin {

struct LnaParams {
    double beta1 = 1.0; // linear voltage gain
    double beta3 = 0.0; // third-order coefficient, volt^-2 (negative = compressive)
    double v_sat = 0.0; // input magnitude at the saturation knee, volts
    double v_max = 0.0; // output magnitude in saturation, volts

    void validate() const {
        if (!(beta1 > 0.0))
            throw config_error("LnaParams: beta1 must be > 0");
        if (!(v_sat >= 0.0))
            throw config_error("LnaParams: v_sat must be >= 0");
        const double knee = beta1 * v_sat + beta3 * v_sat * v_sat * v_sat;
        if (std::abs(knee - v_max) > 1e-9 * std::max(1.0, std::abs(v_max)))
            throw config_error("LnaParams: v_max must equal beta1*v_sat + beta3*v_sat^3");
        if (beta3 < 0.0) {
            // Monotone magnitude response on [0, v_sat] keeps the small-scale
            // branch invertible.
            const double peak = std::sqrt(beta1 / (3.0 * -beta3));
            if (v_sat > peak * (1.0 + 1e-12))
                throw config_error("LnaParams: v_sat exceeds the monotone range of the polynomial");
        }
    }
};

/// Derives the polynomial model from a gain/IIP3 specification. The IIP3
/// amplitude follows the two-tone identity A_ip3^2 = 4*beta1 / (3*|beta3|),
/// and the saturation knee sits at a quarter of that amplitude.
inline LnaParams lna_params_from_spec(double gain_db, double iip3_dbm,
                                      double impedance_ohm = kDefaultImpedanceOhm) {
    LnaParams p;
    p.beta1 = std::pow(10.0, gain_db / 20.0);
    const double a_ip3 = dbm_to_amplitude(iip3_dbm, impedance_ohm);
    p.beta3 = -4.0 * p.beta1 / (3.0 * a_ip3 * a_ip3);
    p.v_sat = a_ip3 / 4.0;
    p.v_max = p.beta1 * p.v_sat + p.beta3 * p.v_sat * p.v_sat * p.v_sat;
    return p;
}

/// Back-computes the IIP3 in dBm from the polynomial coefficients.
inline double iip3_dbm_from_params(const LnaParams &p,
                                   double impedance_ohm = kDefaultImpedanceOhm) {
    const double a2 = 4.0 * p.beta1 / (3.0 * std::abs(p.beta3));
    return mean_square_to_dbm(a2 / 2.0, impedance_ohm);
}

/// Memoryless AM-AM nonlinearity. Phase is preserved exactly; the magnitude
/// follows beta1*r + beta3*r^3 up to v_sat and is pinned at v_max beyond it.
inline cxd lna(cxd x, const LnaParams &p) {
    const double r = std::abs(x);
    if (r <= p.v_sat)
        return x * (p.beta1 + p.beta3 * r * r);
    return x * (p.v_max / r);
}

struct AdcConfig {
    int bits = 6;                  // B, per real dimension
    double clip_level = 0.0;       // c, volts (half-range per real dimension)
    double loading_fraction = 3.0; // c / sigma per real dimension, set by AGC

    void validate() const {
        if (bits < 1 || bits > 12)
            throw config_error("AdcConfig: bits must be in [1, 12]");
        if (!(loading_fraction > 0.0 && loading_fraction <= 4.0))
            throw config_error("AdcConfig: loading_fraction must be in (0, 4]");
    }

    double step() const {
        return 2.0 * clip_level / static_cast<double>(1 << bits);
    }
};

/// Per-real-dimension RMS of a complex sequence (assumes circular symmetry;
/// the two dimensions are pooled).
inline double rms_per_dim(std::span<const cxd> samples) {
    if (samples.empty())
        throw config_error("rms_per_dim: empty input");
    double acc = 0.0;
    for (const cxd &v : samples)
        acc += std::norm(v);
    return std::sqrt(acc / (2.0 * static_cast<double>(samples.size())));
}

/// AGC rule: one common clip level for the whole array per frame,
/// clip = loading_fraction * rms_per_dim.
inline double agc_clip_level(double rms_per_dimension, const AdcConfig &cfg) {
    if (!(rms_per_dimension > 0.0))
        throw config_error("agc_clip_level: rms must be > 0");
    return cfg.loading_fraction * rms_per_dimension;
}

namespace detail {

inline double quantize_dim(double v, double step, int bits) {
    // Mid-rise codebook {(k + 1/2) * step : k in [-2^(B-1), 2^(B-1) - 1]}.
    const long half_codes = 1L << (bits - 1);
    long k = static_cast<long>(std::floor(v / step));
    if (k < -half_codes)
        k = -half_codes;
    if (k > half_codes - 1)
        k = half_codes - 1;
    return (static_cast<double>(k) + 0.5) * step;
}

} // namespace detail

/// Mid-rise uniform quantizer applied independently to the real and
/// imaginary parts. Values beyond the clip level land on the outermost code
/// (overload region).
inline cxd quantize(cxd y, const AdcConfig &cfg) {
    cfg.validate();
    if (!(cfg.clip_level > 0.0))
        throw config_error("quantize: clip_level not set");
    const double step = cfg.step();
    return cxd(detail::quantize_dim(y.real(), step, cfg.bits),
               detail::quantize_dim(y.imag(), step, cfg.bits));
}

/// In-place quantization of a sample block with a fixed configuration.
inline void quantize_frame(CxMat &frame, const AdcConfig &cfg) {
    cfg.validate();
    if (!(cfg.clip_level > 0.0))
        throw config_error("quantize_frame: clip_level not set");
    const double step = cfg.step();
    for (cxd &v : frame.data())
        v = cxd(detail::quantize_dim(v.real(), step, cfg.bits),
                detail::quantize_dim(v.imag(), step, cfg.bits));
}

/// Grid search for the loading fraction minimizing the Bussgang-normalized
/// distortion of the quantizer on a calibration signal. Ties break toward
/// the smaller fraction.
inline double optimize_loading_fraction(std::span<const cxd> calibration_signal, int bits,
                                        std::span<const double> grid) {
    if (calibration_signal.empty())
        throw config_error("optimize_loading_fraction: empty calibration signal");
    if (grid.empty())
        throw config_error("optimize_loading_fraction: empty grid");
    const double rms = rms_per_dim(calibration_signal);
    if (!(rms > 0.0))
        throw config_error("optimize_loading_fraction: calibration signal has zero power");

    double best_fraction = 0.0;
    double best_dbar = 0.0;
    bool first = true;
    std::vector<cxd> q(calibration_signal.size());
    for (const double fraction : grid) {
        AdcConfig cfg;
        cfg.bits = bits;
        cfg.loading_fraction = fraction;
        cfg.clip_level = agc_clip_level(rms, cfg);
        for (std::size_t i = 0; i < calibration_signal.size(); ++i)
            q[i] = quantize(calibration_signal[i], cfg);
        const double dbar = bussgang_distortion(calibration_signal, q).d_bar;
        if (first || dbar < best_dbar ||
            (dbar == best_dbar && fraction < best_fraction)) {
            best_dbar = dbar;
            best_fraction = fraction;
            first = false;
        }
    }
    return best_fraction;
}

} // namespace rxlin

#endif // RXLIN_IMPAIRMENTS_HPP
