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

#ifndef RXLIN_METRICS_HPP
#define RXLIN_METRICS_HPP

#include <cmath>
#include <complex>
#include <span>

#include "rxlin/errors.hpp"
#include "rxlin/linalg.hpp"

namespace rxlin {

/// Residual distortion after the optimal complex rescaling of an estimate:
///   d = min_alpha mean|s - alpha*s_hat|^2,  d_bar = d / mean|s|^2.
/// All expectations are sample averages over the given frame.
struct DistortionReport {
    cxd alpha{0.0, 0.0}; // optimal scale
    double d = 0.0;      // residual power, volt^2
    double d_bar = 1.0;  // normalized residual in [0, 1]
    double d_bar_db = 0.0;
    double mse = 0.0; // mean|s - s_hat|^2 (no rescaling)
};

inline DistortionReport bussgang_distortion(std::span<const cxd> s, std::span<const cxd> s_hat) {
    if (s.size() != s_hat.size())
        throw config_error("bussgang_distortion: length mismatch");
    if (s.size() < 2)
        throw config_error("bussgang_distortion: need at least two samples");
    const double n = static_cast<double>(s.size());
    double ps = 0.0;
    double ph = 0.0;
    cxd cross(0.0, 0.0);
    double mse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ps += std::norm(s[i]);
        ph += std::norm(s_hat[i]);
        cross += std::conj(s_hat[i]) * s[i];
        mse += std::norm(s[i] - s_hat[i]);
    }
    ps /= n;
    ph /= n;
    cross /= n;
    mse /= n;
    if (!(ps > 0.0))
        throw config_error("bussgang_distortion: reference signal has zero power");

    DistortionReport rep;
    rep.mse = mse;
    if (ph > 0.0) {
        rep.alpha = cross / ph;
        rep.d = ps - std::norm(cross) / ph;
    } else {
        rep.alpha = cxd(0.0, 0.0);
        rep.d = ps;
    }
    rep.d = std::max(rep.d, 0.0); // guard tiny negative round-off
    rep.d_bar = rep.d / ps;
    rep.d_bar_db = 10.0 * std::log10(std::max(rep.d_bar, 1e-300));
    return rep;
}

struct LinkBudget {
    double rx_dbm = 0.0;
    double rx_peak_dbm = 0.0;
};

/// Receive power budget of one uplink: rx = tx + tx_gain - pathloss + rx_gain,
/// peak sits papr_db above the average.
inline LinkBudget link_budget(double tx_dbm, double tx_gain_db, double pathloss_db,
                              double rx_elem_gain_db, double papr_db) {
    LinkBudget lb;
    lb.rx_dbm = tx_dbm + tx_gain_db - pathloss_db + rx_elem_gain_db;
    lb.rx_peak_dbm = lb.rx_dbm + papr_db;
    return lb;
}

} // namespace rxlin

#endif // RXLIN_METRICS_HPP
