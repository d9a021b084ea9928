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
// Geometric multi-user SIMO channel for a half-wavelength ULA, its left
// null-space basis and the zero-forcing combiner.

#ifndef RXLIN_CHANNEL_HPP
#define RXLIN_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "rxlin/errors.hpp"
#include "rxlin/linalg.hpp"
#include "rxlin/rng.hpp"
#include "rxlin/signal.hpp"

namespace rxlin {

/// ULA steering vector, element n (0-based) = exp(j*pi*n*sin(theta)).
inline std::vector<cxd> steering_vector(double theta, int num_antennas) {
    if (num_antennas < 1)
        throw config_error("steering_vector: num_antennas must be >= 1");
    if (std::abs(theta) > M_PI / 2.0 + 1e-12)
        throw config_error("steering_vector: |theta| must be <= pi/2");
    std::vector<cxd> v(num_antennas);
    const double s = std::sin(theta);
    for (int n = 0; n < num_antennas; ++n) {
        const double phase = M_PI * static_cast<double>(n) * s;
        v[n] = cxd(std::cos(phase), std::sin(phase));
    }
    return v;
}

struct MultiUserChannel {
    CxMat h;                  // Nr x U, columns are steering vectors
    std::vector<double> aoas; // radians, length U
    CxMat null_basis;         // (Nr - U) x Nr, orthonormal rows, null_basis * h = 0
    CxMat zf_combiner;        // U x Nr, zf_combiner * h = I
    CxMat null_projector;     // Nr x Nr, null_basis^H * null_basis (projector onto the null space)

    int num_antennas() const { return static_cast<int>(h.rows()); }
    int num_users() const { return static_cast<int>(h.cols()); }
};

/// Builds the channel matrix, an orthonormal basis of its left null space
/// and the zero-forcing combiner (H^H H)^-1 H^H.
inline MultiUserChannel build_channel(std::span<const double> aoas, int num_antennas) {
    const int num_users = static_cast<int>(aoas.size());
    if (num_users < 1)
        throw config_error("build_channel: need at least one user");
    if (num_users >= num_antennas)
        throw config_error("build_channel: requires num_users < num_antennas");

    MultiUserChannel ch;
    ch.aoas.assign(aoas.begin(), aoas.end());
    ch.h = CxMat(num_antennas, num_users);
    for (int u = 0; u < num_users; ++u) {
        const std::vector<cxd> col = steering_vector(aoas[u], num_antennas);
        for (int n = 0; n < num_antennas; ++n)
            ch.h(n, u) = col[n];
    }

    ch.null_basis = left_null_basis(ch.h); // throws conditioning_error when rank deficient
    ch.null_projector = mul(adjoint(ch.null_basis), ch.null_basis);

    const CxMat hh = adjoint(ch.h);
    ch.zf_combiner = solve_hpd(gram(ch.h), hh);
    return ch;
}

/// x_t = H * s_t for every column of the frame. Noise free.
inline CxMat apply_channel(const MultiUserChannel &ch, const CxMat &frame) {
    if (frame.rows() != ch.h.cols())
        throw config_error("apply_channel: frame row count must equal num_users");
    return mul(ch.h, frame);
}

/// Array response sum of an intermodulation image at the angle whose sine is
/// sin(theta_l) + sin(theta_m) - sin(theta_n):
///   sum_{n=0}^{Nr-1} exp(j*pi*n*sin(omega)) = (1 - e^{j*pi*Nr*s}) / (1 - e^{j*pi*s}).
/// Returns Nr at sin(omega) = 0. Throws visible_space_error when the image
/// falls outside visible space (|sin| > 1); callers treat such terms as
/// evanescent.
inline cxd imd_kernel(double theta_l, double theta_m, double theta_n, int num_antennas) {
    if (num_antennas < 1)
        throw config_error("imd_kernel: num_antennas must be >= 1");
    const double s = std::sin(theta_l) + std::sin(theta_m) - std::sin(theta_n);
    if (std::abs(s) > 1.0 + 1e-12)
        throw visible_space_error("imd_kernel: image direction outside visible space");
    const double a = M_PI * s;
    const double half = 0.5 * a;
    if (std::abs(std::sin(half)) < 1e-12)
        return cxd(static_cast<double>(num_antennas), 0.0);
    // Dirichlet form: e^{j a (Nr-1)/2} * sin(a Nr / 2) / sin(a / 2).
    const double ratio = std::sin(half * num_antennas) / std::sin(half);
    const double phi = half * (num_antennas - 1);
    return cxd(std::cos(phi), std::sin(phi)) * ratio;
}

/// Draws user AoAs uniformly in [-max_abs_angle, max_abs_angle] subject to a
/// minimum separation |sin(t_i) - sin(t_j)| >= 2/Nr, which keeps the
/// zero-forcing combiner well conditioned.
inline std::vector<double> draw_aoas(Rng &rng, int num_users, int num_antennas,
                                     double max_abs_angle = M_PI / 3.0) {
    const double min_sep = 2.0 / static_cast<double>(num_antennas);
    std::vector<double> aoas(num_users);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        for (double &a : aoas)
            a = rng.uniform(-max_abs_angle, max_abs_angle);
        bool ok = true;
        for (int i = 0; i < num_users && ok; ++i)
            for (int j = i + 1; j < num_users && ok; ++j)
                ok = std::abs(std::sin(aoas[i]) - std::sin(aoas[j])) >= min_sep;
        if (ok)
            return aoas;
    }
    throw config_error("draw_aoas: could not satisfy minimum separation; "
                       "too many users for the array size");
}

} // namespace rxlin

#endif // RXLIN_CHANNEL_HPP
