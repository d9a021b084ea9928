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
// Digital compensation of front-end nonlinearity:
//  * null-space assisted recovery of saturated antenna samples,
//  * beam-space LMS cancellation of intermodulation after MIMO combining,
//  * the conventional per-antenna inverse of the polynomial model.

#ifndef RXLIN_LINEARIZE_HPP
#define RXLIN_LINEARIZE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rxlin/errors.hpp"
#include "rxlin/impairments.hpp"
#include "rxlin/linalg.hpp"

namespace rxlin {

// ---------------------------------------------------------------------------
// Null-space assisted saturation recovery
// ---------------------------------------------------------------------------

struct SatRecoveryConfig {
    double gamma_ratio = 0.95; // detection threshold as a fraction of v_max
    double kappa = 0.01;       // ridge regularization, absolute volt units

    void validate() const {
        if (!(gamma_ratio > 0.0 && gamma_ratio <= 1.0))
            throw config_error("SatRecoveryConfig: gamma_ratio must be in (0, 1]");
        if (!(kappa >= 0.0))
            throw config_error("SatRecoveryConfig: kappa must be >= 0");
    }
};

struct SaturationSets {
    std::vector<int> unsaturated; // S_n: |y| below the threshold
    std::vector<int> saturated;   // S_c: complement, likely clipped
};

/// Splits antenna indices by quantized output magnitude. Indices are
/// 0-based; the two sets partition {0, ..., Nr-1}.
inline SaturationSets detect_saturated_set(std::span<const cxd> y_adc, double threshold) {
    if (!(threshold > 0.0))
        throw config_error("detect_saturated_set: threshold must be > 0");
    SaturationSets sets;
    sets.unsaturated.reserve(y_adc.size());
    for (std::size_t k = 0; k < y_adc.size(); ++k) {
        if (std::abs(y_adc[k]) < threshold)
            sets.unsaturated.push_back(static_cast<int>(k));
        else
            sets.saturated.push_back(static_cast<int>(k));
    }
    return sets;
}

enum class RecoveryPath {
    automatic, // rank-1 shortcut when exactly one antenna is flagged
    general,   // always form and factorize the Gram system
    rank1      // force the shortcut (requires exactly one flagged antenna)
};

struct RecoveryResult {
    std::vector<cxd> n_sat_hat;   // estimated clipping perturbation, zero off S_c
    std::vector<cxd> y_corrected; // y_adc - n_sat_hat
    bool underdetermined = false; // |S_c| exceeded the null-space dimension
};

/// Estimates the clipping perturbation supported on the flagged antennas by
/// minimizing the residual null-space power with ridge regularization:
///   n_hat[S_c] = (V^H V + kappa I)^-1 V^H (N y),  V = columns of N on S_c.
/// With a single flagged antenna the rank-1 shortcut V^H/(kappa + ||V||^2)
/// is used instead of a factorization.
inline RecoveryResult saturation_recovery(std::span<const cxd> y_adc, const CxMat &null_basis,
                                          std::span<const int> saturated,
                                          const SatRecoveryConfig &cfg,
                                          RecoveryPath path = RecoveryPath::automatic) {
    cfg.validate();
    const std::size_t nr = y_adc.size();
    const std::size_t dim = null_basis.rows();
    if (null_basis.cols() != nr)
        throw config_error("saturation_recovery: null basis width must equal antenna count");

    RecoveryResult res;
    res.n_sat_hat.assign(nr, cxd(0.0, 0.0));
    res.y_corrected.assign(y_adc.begin(), y_adc.end());
    const std::size_t ns = saturated.size();
    if (ns == 0)
        return res;
    for (const int k : saturated)
        if (k < 0 || static_cast<std::size_t>(k) >= nr)
            throw config_error("saturation_recovery: saturated index out of range");
    res.underdetermined = ns > dim;

    // p = N * y_adc.
    std::vector<cxd> p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const cxd *row = null_basis.row(i);
        cxd acc(0.0, 0.0);
        for (std::size_t j = 0; j < nr; ++j)
            acc += row[j] * y_adc[j];
        p[i] = acc;
    }

    std::vector<cxd> coef(ns);
    const bool use_rank1 =
        (path == RecoveryPath::rank1) || (path == RecoveryPath::automatic && ns == 1);
    if (use_rank1) {
        if (ns != 1)
            throw config_error("saturation_recovery: rank-1 path requires exactly one index");
        const int k = saturated[0];
        cxd vhp(0.0, 0.0);
        double vnorm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const cxd vik = null_basis(i, static_cast<std::size_t>(k));
            vhp += std::conj(vik) * p[i];
            vnorm2 += std::norm(vik);
        }
        const double denom = cfg.kappa + vnorm2;
        if (!(denom > 0.0))
            throw conditioning_error("saturation_recovery: degenerate rank-1 system");
        coef[0] = vhp / denom;
    } else {
        // Gram system on the flagged columns of N.
        CxMat g(ns, ns);
        for (std::size_t a = 0; a < ns; ++a) {
            for (std::size_t b = a; b < ns; ++b) {
                cxd acc(0.0, 0.0);
                for (std::size_t i = 0; i < dim; ++i)
                    acc += std::conj(null_basis(i, static_cast<std::size_t>(saturated[a]))) *
                           null_basis(i, static_cast<std::size_t>(saturated[b]));
                g(a, b) = acc;
                g(b, a) = std::conj(acc);
            }
            g(a, a) += cfg.kappa;
        }
        std::vector<cxd> rhs(ns);
        for (std::size_t a = 0; a < ns; ++a) {
            cxd acc(0.0, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                acc += std::conj(null_basis(i, static_cast<std::size_t>(saturated[a]))) * p[i];
            rhs[a] = acc;
        }
        try {
            const CxMat l = cholesky(g);
            coef = cholesky_solve(l, rhs);
        } catch (const conditioning_error &) {
            // Singular at kappa = 0 (e.g. more flagged antennas than null-space
            // dimensions); retry with a minimal ridge so a solution exists.
            double trace = 0.0;
            for (std::size_t a = 0; a < ns; ++a)
                trace += g(a, a).real();
            const double ridge = std::max(1e-14 * trace / static_cast<double>(ns), 1e-300);
            for (std::size_t a = 0; a < ns; ++a)
                g(a, a) += ridge;
            const CxMat l = cholesky(g);
            coef = cholesky_solve(l, rhs);
            res.underdetermined = true;
        }
    }

    for (std::size_t a = 0; a < ns; ++a) {
        const int k = saturated[a];
        res.n_sat_hat[static_cast<std::size_t>(k)] = coef[a];
        res.y_corrected[static_cast<std::size_t>(k)] -= coef[a];
    }
    return res;
}

/// Same estimator as saturation_recovery, but driven by the precomputed
/// null-space projector P = N^H N instead of the basis itself:
///   V^H V   = P[S_c, S_c]        (submatrix pick)
///   V^H N y = (P y)[S_c]         (|S_c| projector rows, O(|S_c| * Nr))
/// Values match the basis formulation exactly up to round-off. With one
/// flagged antenna the cost is a single projector row, O(Nr), which is what
/// makes the shortcut linear-time.
inline void saturation_recovery_fast_into(std::span<const cxd> y_adc,
                                          const CxMat &null_projector, std::size_t null_dim,
                                          std::span<const int> saturated,
                                          const SatRecoveryConfig &cfg, RecoveryPath path,
                                          RecoveryResult &res) {
    cfg.validate();
    const std::size_t nr = y_adc.size();
    if (null_projector.rows() != nr || null_projector.cols() != nr)
        throw config_error("saturation_recovery_fast: projector must be Nr x Nr");

    res.n_sat_hat.assign(nr, cxd(0.0, 0.0));
    res.y_corrected.assign(y_adc.begin(), y_adc.end());
    res.underdetermined = false;
    const std::size_t ns = saturated.size();
    if (ns == 0)
        return;
    res.underdetermined = ns > null_dim;
    for (const int k : saturated)
        if (k < 0 || static_cast<std::size_t>(k) >= nr)
            throw config_error("saturation_recovery_fast: saturated index out of range");

    const bool use_rank1 =
        (path == RecoveryPath::rank1) || (path == RecoveryPath::automatic && ns == 1);
    if (use_rank1) {
        if (ns != 1)
            throw config_error("saturation_recovery_fast: rank-1 path requires exactly one index");
        const std::size_t k = static_cast<std::size_t>(saturated[0]);
        const cxd *row = null_projector.row(k);
        cxd rhs(0.0, 0.0);
        for (std::size_t j = 0; j < nr; ++j)
            rhs += row[j] * y_adc[j];
        const double denom = cfg.kappa + null_projector(k, k).real();
        if (!(denom > 0.0))
            throw conditioning_error("saturation_recovery_fast: degenerate rank-1 system");
        const cxd coef = rhs / denom;
        res.n_sat_hat[k] = coef;
        res.y_corrected[k] -= coef;
        return;
    }
    std::vector<cxd> coef(ns);
    {
        CxMat g(ns, ns);
        for (std::size_t a = 0; a < ns; ++a) {
            const std::size_t ka = static_cast<std::size_t>(saturated[a]);
            for (std::size_t b = 0; b < ns; ++b)
                g(a, b) = null_projector(ka, static_cast<std::size_t>(saturated[b]));
            g(a, a) += cfg.kappa;
        }
        std::vector<cxd> rhs(ns);
        for (std::size_t a = 0; a < ns; ++a) {
            const cxd *row = null_projector.row(static_cast<std::size_t>(saturated[a]));
            cxd acc(0.0, 0.0);
            for (std::size_t j = 0; j < nr; ++j)
                acc += row[j] * y_adc[j];
            rhs[a] = acc;
        }
        try {
            const CxMat l = cholesky(g);
            coef = cholesky_solve(l, rhs);
        } catch (const conditioning_error &) {
            double trace = 0.0;
            for (std::size_t a = 0; a < ns; ++a)
                trace += g(a, a).real();
            const double ridge = std::max(1e-14 * trace / static_cast<double>(ns), 1e-300);
            for (std::size_t a = 0; a < ns; ++a)
                g(a, a) += ridge;
            const CxMat l = cholesky(g);
            coef = cholesky_solve(l, rhs);
            res.underdetermined = true;
        }
    }

    for (std::size_t a = 0; a < ns; ++a) {
        const std::size_t k = static_cast<std::size_t>(saturated[a]);
        res.n_sat_hat[k] = coef[a];
        res.y_corrected[k] -= coef[a];
    }
}

/// Convenience wrapper over saturation_recovery_fast_into.
inline RecoveryResult saturation_recovery_fast(std::span<const cxd> y_adc,
                                               const CxMat &null_projector, std::size_t null_dim,
                                               std::span<const int> saturated,
                                               const SatRecoveryConfig &cfg,
                                               RecoveryPath path = RecoveryPath::automatic) {
    RecoveryResult res;
    saturation_recovery_fast_into(y_adc, null_projector, null_dim, saturated, cfg, path, res);
    return res;
}

// ---------------------------------------------------------------------------
// Per-antenna inverse (conventional baseline)
// ---------------------------------------------------------------------------

/// Inverts the small-scale polynomial branch of the LNA model. The output
/// keeps the input phase; the magnitude solves beta1*r + beta3*r^3 = |y| on
/// [0, v_sat] by safeguarded Newton iteration. Magnitudes at or beyond v_max
/// are clamped to v_sat (saturation is not invertible).
inline cxd per_antenna_inverse(cxd y, const LnaParams &p) {
    const double m = std::abs(y);
    if (m == 0.0)
        return cxd(0.0, 0.0);
    const cxd phase = y / m;
    if (m >= p.v_max)
        return phase * p.v_sat;

    double lo = 0.0;
    double hi = p.v_sat;
    double r = std::min(m / p.beta1, p.v_sat); // linear-gain initial guess
    for (int it = 0; it < 200; ++it) {
        const double f = p.beta1 * r + p.beta3 * r * r * r - m;
        if (f > 0.0)
            hi = r;
        else
            lo = r;
        const double df = p.beta1 + 3.0 * p.beta3 * r * r;
        double next = (df > 0.0) ? r - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi); // bisection safeguard
        const double delta = std::abs(next - r);
        r = next;
        if (delta < 1e-13 || hi - lo < 1e-13)
            break;
    }
    return phase * r;
}

// ---------------------------------------------------------------------------
// Beam-space LMS intermodulation compensation
// ---------------------------------------------------------------------------

/// Streams whose long-term power reaches the threshold eta (linear units).
inline std::vector<int> select_streams(std::span<const double> powers_linear, double eta) {
    if (!(eta >= 0.0))
        throw config_error("select_streams: eta must be >= 0");
    std::vector<int> set;
    for (std::size_t u = 0; u < powers_linear.size(); ++u)
        if (powers_linear[u] >= eta)
            set.push_back(static_cast<int>(u));
    return set;
}

struct LmsState {
    std::vector<cxd> weights;     // one w_i per stream (only compensated entries adapt)
    double mu = 0.0;              // step size
    std::vector<int> active_set;  // streams feeding the instantaneous power sum
    double eta = 0.0;             // power threshold that produced active_set
    std::vector<int> compensated; // streams whose output is replaced by the LMS error
    double weight_bound = 1e9;    // divergence guard on |w_i|
    int mu_halvings = 0;          // divergence events recorded
};

/// Builds an LMS state compensating every stream, with the power sum taken
/// over active_set.
inline LmsState make_lms_state(int num_streams, double mu, std::vector<int> active_set,
                               double eta = 0.0) {
    if (num_streams < 1)
        throw config_error("make_lms_state: need at least one stream");
    if (!(mu > 0.0))
        throw config_error("make_lms_state: mu must be > 0");
    LmsState st;
    st.weights.assign(static_cast<std::size_t>(num_streams), cxd(0.0, 0.0));
    st.mu = mu;
    st.active_set = std::move(active_set);
    st.eta = eta;
    st.compensated.resize(static_cast<std::size_t>(num_streams));
    for (int i = 0; i < num_streams; ++i)
        st.compensated[static_cast<std::size_t>(i)] = i;
    for (const int u : st.active_set)
        if (u < 0 || u >= num_streams)
            throw config_error("make_lms_state: active stream index out of range");
    return st;
}

/// Step size of roughly 0.1 of the inverse mean regressor power, estimated
/// over a calibration block (streams x samples).
inline double calibrate_step_size(const CxMat &block, std::span<const int> active_set,
                                  std::span<const int> compensated, double factor = 0.1) {
    if (block.cols() == 0 || compensated.empty())
        throw config_error("calibrate_step_size: empty calibration block");
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < block.cols(); ++t) {
        double power = 0.0;
        for (const int u : active_set)
            power += std::norm(block(static_cast<std::size_t>(u), t));
        for (const int i : compensated) {
            acc += std::norm(block(static_cast<std::size_t>(i), t)) * power * power;
            ++count;
        }
    }
    const double mean = acc / static_cast<double>(count);
    if (!(mean > 0.0))
        throw config_error("calibrate_step_size: regressor power is zero");
    return factor / mean;
}

/// One adaptation step. For each compensated stream i:
///   P   = sum_{u in active_set} |s_hat_u|^2
///   r_i = s_hat_i * P
///   e_i = s_hat_i - w_i * r_i      (the compensated output)
///   w_i <- w_i + mu * e_i * conj(r_i)
/// Non-compensated streams pass through unchanged. When a weight magnitude
/// exceeds the bound, mu is halved and the event counted.
inline void beamspace_compensate_step(std::span<const cxd> s_hat, LmsState &state,
                                      std::span<cxd> s_comp) {
    if (s_hat.size() != state.weights.size() || s_comp.size() != s_hat.size())
        throw config_error("beamspace_compensate_step: dimension mismatch");
    if (state.active_set.empty())
        throw config_error("beamspace_compensate_step: active set is empty");
    double power = 0.0;
    for (const int u : state.active_set) {
        const cxd v = s_hat[static_cast<std::size_t>(u)];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw config_error("beamspace_compensate_step: non-finite input sample");
        power += std::norm(v);
    }
    for (std::size_t i = 0; i < s_hat.size(); ++i)
        s_comp[i] = s_hat[i];
    for (const int i : state.compensated) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const cxd regressor = s_hat[ii] * power;
        const cxd err = s_hat[ii] - state.weights[ii] * regressor;
        s_comp[ii] = err;
        state.weights[ii] += state.mu * err * std::conj(regressor);
        if (std::abs(state.weights[ii]) > state.weight_bound) {
            state.mu *= 0.5;
            ++state.mu_halvings;
        }
    }
}

} // namespace rxlin

#endif // RXLIN_LINEARIZE_HPP
