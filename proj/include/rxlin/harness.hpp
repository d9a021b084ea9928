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
// Monte-Carlo experiment harness. Composes the full receive chain
// (waveform -> channel -> LNA -> AGC/ADC -> compensation -> ZF combining ->
// distortion metric), sweeps scenario parameters and emits result tables.
// Every run is a pure function of (ScenarioConfig, master_seed): sweep
// points and trials derive independent sub-seeds, so serial and parallel
// execution produce the same rows.

#ifndef RXLIN_HARNESS_HPP
#define RXLIN_HARNESS_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rxlin/channel.hpp"
#include "rxlin/errors.hpp"
#include "rxlin/impairments.hpp"
#include "rxlin/linearize.hpp"
#include "rxlin/metrics.hpp"
#include "rxlin/signal.hpp"

namespace rxlin {

enum class LnaMode { full, clip_only, poly_only, linear };
enum class Method { none, sat_recovery, beamspace, per_antenna };
enum class AoaPolicy { random_min_sep, explicit_list };
enum class LoadingPolicy { fixed, proxy_optimized, chain_optimized };
enum class SweepAxis { input_power, iip3, adc_bits };
enum class OutputFormat { csv, json_lines };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::none: return "none";
    case Method::sat_recovery: return "sat-recovery";
    case Method::beamspace: return "beamspace";
    case Method::per_antenna: return "per-antenna";
    }
    return "?";
}

inline Method method_from_string(const std::string &s) {
    if (s == "none") return Method::none;
    if (s == "sat-recovery") return Method::sat_recovery;
    if (s == "beamspace") return Method::beamspace;
    if (s == "per-antenna") return Method::per_antenna;
    throw config_error("unknown method: " + s);
}

inline std::string to_string(LnaMode m) {
    switch (m) {
    case LnaMode::full: return "full";
    case LnaMode::clip_only: return "clip-only";
    case LnaMode::poly_only: return "poly-only";
    case LnaMode::linear: return "linear";
    }
    return "?";
}

inline LnaMode lna_mode_from_string(const std::string &s) {
    if (s == "full") return LnaMode::full;
    if (s == "clip-only") return LnaMode::clip_only;
    if (s == "poly-only") return LnaMode::poly_only;
    if (s == "linear") return LnaMode::linear;
    throw config_error("unknown lna mode: " + s);
}

inline std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::input_power: return "input-power";
    case SweepAxis::iip3: return "iip3";
    case SweepAxis::adc_bits: return "adc-bits";
    }
    return "?";
}

inline SweepAxis sweep_axis_from_string(const std::string &s) {
    if (s == "input-power" || s == "input_power") return SweepAxis::input_power;
    if (s == "iip3") return SweepAxis::iip3;
    if (s == "adc-bits" || s == "adc_bits") return SweepAxis::adc_bits;
    throw config_error("unknown sweep axis: " + s);
}

struct LnaSettings {
    double gain_db = 15.0;
    double iip3_dbm = -30.0;
    LnaMode mode = LnaMode::full;
};

inline std::vector<double> default_loading_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 12; ++i)
        g.push_back(1.0 + 0.25 * i);
    return g;
}

struct AdcSettings {
    bool enabled = true;
    int bits = 6;
    LoadingPolicy policy = LoadingPolicy::chain_optimized;
    double fixed_fraction = 3.0;
    std::vector<double> loading_grid = default_loading_grid();
};

struct BeamspaceSettings {
    double eta_dbm = -60.0;     // stream power threshold for the active set
    double mu_factor = 0.1;     // mu = mu_factor / mean |regressor|^2
    double weight_bound = 1e9;  // divergence guard
    int calibration_samples = 1000;
};

struct ScenarioConfig {
    int nr = 64;
    int num_users = 8;
    AoaPolicy aoa_policy = AoaPolicy::random_min_sep;
    std::vector<double> aoas;        // radians, used with explicit_list
    double aoa_range = M_PI / 3.0;   // random policy draws within +/- this
    double interferer_total_dbm = -43.0;
    double soi_dbm = -70.0;
    std::vector<double> user_powers_dbm; // optional per-user override
    int soi_index = -1;                  // -1: last user
    LnaSettings lna;
    AdcSettings adc;
    WaveformConfig waveform;
    SatRecoveryConfig sat_recovery;
    BeamspaceSettings beamspace;
    std::vector<Method> methods{Method::none};
    int trials = 20;
    std::uint64_t master_seed = 1;
    double impedance_ohm = kDefaultImpedanceOhm;

    int soi() const { return soi_index >= 0 ? soi_index : num_users - 1; }

    /// Per-user receive powers. Unless overridden, the interferer total is
    /// split equally among all non-SOI users and the SOI gets soi_dbm.
    std::vector<double> user_powers() const {
        if (!user_powers_dbm.empty()) {
            if (static_cast<int>(user_powers_dbm.size()) != num_users)
                throw config_error("ScenarioConfig: user_powers_dbm must have one entry per user");
            return user_powers_dbm;
        }
        std::vector<double> powers(num_users);
        const int strong = num_users - 1;
        const double per_user =
            interferer_total_dbm - 10.0 * std::log10(static_cast<double>(std::max(strong, 1)));
        for (int u = 0; u < num_users; ++u)
            powers[u] = per_user;
        powers[soi()] = soi_dbm;
        return powers;
    }

    void validate() const {
        if (num_users < 1)
            throw config_error("ScenarioConfig: num_users must be >= 1");
        if (num_users >= nr)
            throw config_error("ScenarioConfig: num_users must be < nr");
        if (trials < 1)
            throw config_error("ScenarioConfig: trials must be >= 1");
        if (soi() < 0 || soi() >= num_users)
            throw config_error("ScenarioConfig: soi_index out of range");
        if (aoa_policy == AoaPolicy::explicit_list &&
            static_cast<int>(aoas.size()) != num_users)
            throw config_error("ScenarioConfig: explicit AoA list must have one angle per user");
        if (methods.empty())
            throw config_error("ScenarioConfig: at least one method required");
        waveform.validate();
        sat_recovery.validate();
        if (adc.enabled) {
            if (adc.bits < 1 || adc.bits > 12)
                throw config_error("ScenarioConfig: adc.bits must be in [1, 12]");
            if (adc.policy != LoadingPolicy::fixed && adc.loading_grid.empty())
                throw config_error("ScenarioConfig: loading grid is empty");
        }
        for (const Method m : methods) {
            if (m == Method::sat_recovery && lna.mode != LnaMode::clip_only)
                throw config_error("ScenarioConfig: sat-recovery assumes a clip-only LNA "
                                   "(it models saturation without the cubic term); got mode '" +
                                   to_string(lna.mode) + "'");
            if (m == Method::beamspace && lna.mode != LnaMode::poly_only)
                throw config_error("ScenarioConfig: beamspace compensation targets the cubic "
                                   "term and assumes no saturation; set lna.mode=poly-only "
                                   "(got '" + to_string(lna.mode) + "')");
            if (m == Method::per_antenna && lna.mode == LnaMode::linear)
                throw config_error("ScenarioConfig: per-antenna inversion with a linear LNA "
                                   "has nothing to invert");
        }
    }
};

struct ResultRow {
    double sweep_value = 0.0;
    Method method = Method::none;
    double d_bar_db = 0.0;
    double sat_antennas = 0.0; // mean truly saturated antennas per time sample
    cxd lms_final_weight{0.0, 0.0};
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

constexpr std::uint64_t kTagAoa = 0xA0A0;
constexpr std::uint64_t kTagFrame = 0xF7A3;
constexpr std::uint64_t kTagTrial = 0x7217;
constexpr std::uint64_t kTagLoadCal = 0x10AD;

/// LNA parameters as seen by the configured mode (clip-only and linear zero
/// the cubic term; v_max keeps the continuity identity).
inline LnaParams effective_lna_params(const LnaSettings &s, double impedance_ohm) {
    LnaParams p = lna_params_from_spec(s.gain_db, s.iip3_dbm, impedance_ohm);
    if (s.mode == LnaMode::clip_only || s.mode == LnaMode::linear) {
        p.beta3 = 0.0;
        p.v_max = p.beta1 * p.v_sat;
    }
    return p;
}

inline cxd apply_lna_mode(cxd x, const LnaParams &p, LnaMode mode) {
    switch (mode) {
    case LnaMode::linear:
        return x * p.beta1;
    case LnaMode::poly_only: {
        const double r2 = std::norm(x);
        return x * (p.beta1 + p.beta3 * r2);
    }
    case LnaMode::clip_only:
    case LnaMode::full:
        return lna(x, p);
    }
    return x;
}

inline bool mode_saturates(LnaMode mode) {
    return mode == LnaMode::clip_only || mode == LnaMode::full;
}

struct MethodOutcome {
    DistortionReport report;
    cxd lms_final_weight{0.0, 0.0};
    long underdetermined_samples = 0;
};

/// Runs one compensation method over an impaired frame and scores the SOI
/// stream. y_lna is the LNA output (antennas x samples); quantization happens
/// here because the clip level may differ per method.
inline MethodOutcome process_method(Method method, const ScenarioConfig &cfg,
                                    const MultiUserChannel &ch, const CxMat &y_lna,
                                    std::span<const cxd> soi_ref, const LnaParams &lna_eff,
                                    double loading_fraction) {
    const std::size_t nr = y_lna.rows();
    const std::size_t t_total = y_lna.cols();
    const int soi = cfg.soi();

    AdcConfig adc_cfg;
    const bool use_adc = cfg.adc.enabled;
    double step = 0.0;
    if (use_adc) {
        adc_cfg.bits = cfg.adc.bits;
        adc_cfg.loading_fraction = loading_fraction;
        adc_cfg.validate();
        adc_cfg.clip_level = agc_clip_level(rms_per_dim(y_lna.data()), adc_cfg);
        step = adc_cfg.step();
    }
    const double gamma = cfg.sat_recovery.gamma_ratio * lna_eff.v_max;

    MethodOutcome out;
    const bool full_combine = (method == Method::beamspace);
    CxMat s_hat_all; // streams x samples, only for beam-space
    std::vector<cxd> s_hat_soi(t_total);
    if (full_combine)
        s_hat_all = CxMat(static_cast<std::size_t>(cfg.num_users), t_total);

    std::vector<cxd> y(nr);
    RecoveryResult recovery_ws;
    for (std::size_t t = 0; t < t_total; ++t) {
        for (std::size_t n = 0; n < nr; ++n) {
            cxd v = y_lna(n, t);
            if (use_adc)
                v = cxd(quantize_dim(v.real(), step, adc_cfg.bits),
                        quantize_dim(v.imag(), step, adc_cfg.bits));
            y[n] = v;
        }
        switch (method) {
        case Method::none:
        case Method::beamspace:
            break;
        case Method::sat_recovery: {
            const SaturationSets sets = detect_saturated_set(y, gamma);
            if (!sets.saturated.empty()) {
                saturation_recovery_fast_into(y, ch.null_projector, ch.null_basis.rows(),
                                              sets.saturated, cfg.sat_recovery,
                                              RecoveryPath::automatic, recovery_ws);
                if (recovery_ws.underdetermined)
                    ++out.underdetermined_samples;
                std::swap(y, recovery_ws.y_corrected);
            }
            break;
        }
        case Method::per_antenna:
            for (std::size_t n = 0; n < nr; ++n)
                y[n] = per_antenna_inverse(y[n], lna_eff);
            break;
        }
        if (full_combine) {
            for (int u = 0; u < cfg.num_users; ++u) {
                const cxd *w = ch.zf_combiner.row(static_cast<std::size_t>(u));
                cxd acc(0.0, 0.0);
                for (std::size_t n = 0; n < nr; ++n)
                    acc += w[n] * y[n];
                s_hat_all(static_cast<std::size_t>(u), t) = acc;
            }
        } else {
            const cxd *w = ch.zf_combiner.row(static_cast<std::size_t>(soi));
            cxd acc(0.0, 0.0);
            for (std::size_t n = 0; n < nr; ++n)
                acc += w[n] * y[n];
            s_hat_soi[t] = acc;
        }
    }

    if (full_combine) {
        const std::vector<double> powers_dbm = cfg.user_powers();
        std::vector<double> powers_linear(powers_dbm.size());
        for (std::size_t u = 0; u < powers_dbm.size(); ++u)
            powers_linear[u] = dbm_to_mean_square(powers_dbm[u], cfg.impedance_ohm);
        const double eta = dbm_to_mean_square(cfg.beamspace.eta_dbm, cfg.impedance_ohm);
        const std::vector<int> active = select_streams(powers_linear, eta);
        if (active.empty()) {
            // Nothing crosses the power threshold: pass-through.
            for (std::size_t t = 0; t < t_total; ++t)
                s_hat_soi[t] = s_hat_all(static_cast<std::size_t>(soi), t);
        } else {
            const std::size_t calib =
                std::min<std::size_t>(t_total, static_cast<std::size_t>(
                                                   std::max(cfg.beamspace.calibration_samples, 1)));
            CxMat block(static_cast<std::size_t>(cfg.num_users), calib);
            for (std::size_t u = 0; u < block.rows(); ++u)
                for (std::size_t t = 0; t < calib; ++t)
                    block(u, t) = s_hat_all(u, t);
            std::vector<int> compensated(static_cast<std::size_t>(cfg.num_users));
            for (int i = 0; i < cfg.num_users; ++i)
                compensated[static_cast<std::size_t>(i)] = i;
            const double mu =
                calibrate_step_size(block, active, compensated, cfg.beamspace.mu_factor);
            LmsState st = make_lms_state(cfg.num_users, mu, active, eta);
            st.weight_bound = cfg.beamspace.weight_bound;
            std::vector<cxd> in(static_cast<std::size_t>(cfg.num_users));
            std::vector<cxd> comp(static_cast<std::size_t>(cfg.num_users));
            for (std::size_t t = 0; t < t_total; ++t) {
                for (std::size_t u = 0; u < in.size(); ++u)
                    in[u] = s_hat_all(u, t);
                beamspace_compensate_step(in, st, comp);
                s_hat_soi[t] = comp[static_cast<std::size_t>(soi)];
            }
            out.lms_final_weight = st.weights[static_cast<std::size_t>(soi)];
        }
    }

    out.report = bussgang_distortion(soi_ref, s_hat_soi);
    return out;
}

struct TrialData {
    MultiUserChannel channel;
    CxMat y_lna; // antennas x samples, LNA output
    std::vector<cxd> soi_ref;
    LnaParams lna_eff;
    double sat_antennas = 0.0;
};

/// Generates one trial's frame, channel and impaired antenna samples.
inline TrialData make_trial_data(const ScenarioConfig &cfg, std::uint64_t trial_seed) {
    TrialData data;
    std::vector<double> aoas;
    if (cfg.aoa_policy == AoaPolicy::explicit_list) {
        aoas = cfg.aoas;
    } else {
        Rng rng(derive_seed(trial_seed, kTagAoa));
        aoas = draw_aoas(rng, cfg.num_users, cfg.nr, cfg.aoa_range);
    }
    data.channel = build_channel(aoas, cfg.nr);

    WaveformConfig wf = cfg.waveform;
    wf.seed = derive_seed(trial_seed, kTagFrame);
    const std::vector<double> powers = cfg.user_powers();
    const TransmitFrame frame = make_transmit_frame(wf, powers, cfg.impedance_ohm);
    const std::size_t soi = static_cast<std::size_t>(cfg.soi());
    data.soi_ref.assign(frame.samples.row(soi), frame.samples.row(soi) + frame.samples.cols());

    data.y_lna = apply_channel(data.channel, frame.samples);
    data.lna_eff = effective_lna_params(cfg.lna, cfg.impedance_ohm);

    long clipped = 0;
    const bool saturates = mode_saturates(cfg.lna.mode);
    for (cxd &v : data.y_lna.data()) {
        if (saturates && std::abs(v) > data.lna_eff.v_sat)
            ++clipped;
        v = apply_lna_mode(v, data.lna_eff, cfg.lna.mode);
    }
    data.sat_antennas = static_cast<double>(clipped) / static_cast<double>(data.y_lna.cols());
    return data;
}

/// Resolves one loading fraction per configured method.
inline std::vector<double> resolve_loading_fractions(const ScenarioConfig &cfg,
                                                     std::uint64_t point_index) {
    std::vector<double> loading(cfg.methods.size(), cfg.adc.fixed_fraction);
    if (!cfg.adc.enabled || cfg.adc.policy == LoadingPolicy::fixed)
        return loading;

    // Shared calibration frame; shorter than the measurement frames.
    ScenarioConfig cal = cfg;
    cal.waveform.symbol_count = std::min(cfg.waveform.symbol_count, 2000);
    const std::uint64_t seed = derive_seed(cfg.master_seed, kTagLoadCal, point_index);
    const TrialData data = make_trial_data(cal, seed);

    if (cfg.adc.policy == LoadingPolicy::proxy_optimized) {
        const double f = optimize_loading_fraction(data.y_lna.data(), cfg.adc.bits,
                                                   cfg.adc.loading_grid);
        for (double &v : loading)
            v = f;
        return loading;
    }

    // chain_optimized: score each grid point by the SOI distortion at the end
    // of the method's own chain, tie-breaking toward the smaller fraction.
    for (std::size_t im = 0; im < cfg.methods.size(); ++im) {
        double best_fraction = 0.0;
        double best_dbar = 0.0;
        bool first = true;
        for (const double fraction : cfg.adc.loading_grid) {
            const MethodOutcome outcome = process_method(
                cfg.methods[im], cal, data.channel, data.y_lna, data.soi_ref, data.lna_eff,
                fraction);
            const double dbar = outcome.report.d_bar;
            if (first || dbar < best_dbar || (dbar == best_dbar && fraction < best_fraction)) {
                best_dbar = dbar;
                best_fraction = fraction;
                first = false;
            }
        }
        loading[im] = best_fraction;
    }
    return loading;
}

/// One (point, trial) unit of work: all methods on a shared impairment pass.
inline std::vector<ResultRow> run_single_trial(const ScenarioConfig &cfg,
                                               std::span<const double> loading,
                                               double sweep_value, std::uint64_t point_index,
                                               int trial_index) {
    const std::uint64_t trial_seed =
        derive_seed(cfg.master_seed, kTagTrial, point_index, static_cast<std::uint64_t>(trial_index));
    const auto t0 = std::chrono::steady_clock::now();
    const TrialData data = make_trial_data(cfg, trial_seed);
    const auto t1 = std::chrono::steady_clock::now();
    const double shared_s = std::chrono::duration<double>(t1 - t0).count() /
                            static_cast<double>(cfg.methods.size());

    std::vector<ResultRow> rows;
    rows.reserve(cfg.methods.size());
    for (std::size_t im = 0; im < cfg.methods.size(); ++im) {
        const auto m0 = std::chrono::steady_clock::now();
        const MethodOutcome outcome = process_method(cfg.methods[im], cfg, data.channel,
                                                     data.y_lna, data.soi_ref, data.lna_eff,
                                                     loading[im]);
        const auto m1 = std::chrono::steady_clock::now();
        ResultRow row;
        row.sweep_value = sweep_value;
        row.method = cfg.methods[im];
        row.d_bar_db = outcome.report.d_bar_db;
        row.sat_antennas = data.sat_antennas;
        row.lms_final_weight = outcome.lms_final_weight;
        row.wall_time_s = shared_s + std::chrono::duration<double>(m1 - m0).count();
        row.seed = trial_seed;
        rows.push_back(row);
    }
    return rows;
}

/// Runs fn(0..n-1) on the given number of worker threads. Tasks may finish
/// in any order; callers must write results into per-task slots.
inline void parallel_tasks(std::size_t n, int threads, const std::function<void(std::size_t)> &fn) {
    if (threads == 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pool.emplace_back(worker);
    for (std::thread &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace detail

/// Runs every configured method over `trials` independent trials. Rows are
/// ordered by (method, trial) and stamped with the interferer total power as
/// the sweep value. Deterministic given (cfg, point_index), independent of
/// the thread count.
inline std::vector<ResultRow> run_scenario(const ScenarioConfig &cfg,
                                           std::uint64_t point_index = 0, int threads = 1) {
    cfg.validate();
    const std::vector<double> loading = detail::resolve_loading_fractions(cfg, point_index);
    std::vector<std::vector<ResultRow>> slots(static_cast<std::size_t>(cfg.trials));
    detail::parallel_tasks(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t t) {
        slots[t] = detail::run_single_trial(cfg, loading, cfg.interferer_total_dbm, point_index,
                                            static_cast<int>(t));
    });
    std::vector<ResultRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.trials) * cfg.methods.size());
    for (std::size_t im = 0; im < cfg.methods.size(); ++im)
        for (int t = 0; t < cfg.trials; ++t)
            rows.push_back(slots[static_cast<std::size_t>(t)][im]);
    return rows;
}

/// Applies one sweep-axis value to a copy of the configuration.
inline ScenarioConfig apply_sweep_value(const ScenarioConfig &cfg, SweepAxis axis, double value) {
    ScenarioConfig out = cfg;
    switch (axis) {
    case SweepAxis::input_power:
        out.interferer_total_dbm = value;
        break;
    case SweepAxis::iip3:
        out.lna.iip3_dbm = value;
        break;
    case SweepAxis::adc_bits: {
        const int bits = static_cast<int>(std::lround(value));
        if (std::abs(value - bits) > 1e-9)
            throw config_error("sweep: adc-bits values must be integers");
        out.adc.bits = bits;
        break;
    }
    }
    return out;
}

/// Sweeps one axis over the given values. Each (point, trial) pair derives
/// an independent seed from (master_seed, point index, trial index); rows
/// are ordered by (value, method, trial) regardless of thread count.
inline std::vector<ResultRow> sweep(const ScenarioConfig &cfg, SweepAxis axis,
                                    std::span<const double> values, int threads = 1) {
    if (values.empty())
        throw config_error("sweep: no axis values given");
    cfg.validate();

    const std::size_t num_points = values.size();
    std::vector<ScenarioConfig> points;
    points.reserve(num_points);
    for (const double v : values)
        points.push_back(apply_sweep_value(cfg, axis, v));
    for (const ScenarioConfig &p : points)
        p.validate();

    std::vector<std::vector<double>> loading(num_points);
    detail::parallel_tasks(num_points, threads, [&](std::size_t p) {
        loading[p] = detail::resolve_loading_fractions(points[p], p);
    });

    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<ResultRow>> slots(num_points * trials);
    detail::parallel_tasks(num_points * trials, threads, [&](std::size_t task) {
        const std::size_t p = task / trials;
        const std::size_t t = task % trials;
        slots[task] = detail::run_single_trial(points[p], loading[p], values[p], p,
                                               static_cast<int>(t));
    });

    std::vector<ResultRow> rows;
    rows.reserve(num_points * trials * cfg.methods.size());
    for (std::size_t p = 0; p < num_points; ++p)
        for (std::size_t im = 0; im < cfg.methods.size(); ++im)
            for (std::size_t t = 0; t < trials; ++t)
                rows.push_back(slots[p * trials + t][im]);
    return rows;
}

/// Linear-domain mean of the per-trial normalized distortion for one
/// (sweep value, method) group, returned in dB.
inline double aggregate_mean_dbar_db(std::span<const ResultRow> rows, Method method,
                                     std::optional<double> sweep_value = std::nullopt) {
    double acc = 0.0;
    long count = 0;
    for (const ResultRow &row : rows) {
        if (row.method != method)
            continue;
        if (sweep_value && std::abs(row.sweep_value - *sweep_value) > 1e-12)
            continue;
        acc += std::pow(10.0, row.d_bar_db / 10.0);
        ++count;
    }
    if (count == 0)
        throw config_error("aggregate_mean_dbar_db: no matching rows");
    return 10.0 * std::log10(acc / static_cast<double>(count));
}

namespace detail {

inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace detail

/// Writes rows to a stream. CSV column order is fixed; both formats print
/// numbers with 9 significant digits, so equal rows produce identical bytes.
inline void write_results(std::span<const ResultRow> rows, std::ostream &os, OutputFormat format) {
    if (rows.empty())
        throw config_error("write_results: no rows");
    if (format == OutputFormat::csv) {
        os << "sweep_value,method,d_bar_db,sat_antennas,wall_time_s,seed\n";
        for (const ResultRow &r : rows) {
            os << detail::fmt_g9(r.sweep_value) << ',' << to_string(r.method) << ','
               << detail::fmt_g9(r.d_bar_db) << ',' << detail::fmt_g9(r.sat_antennas) << ','
               << detail::fmt_g9(r.wall_time_s) << ',' << r.seed << '\n';
        }
    } else {
        for (const ResultRow &r : rows) {
            os << "{\"sweep_value\":" << detail::fmt_g9(r.sweep_value)
               << ",\"method\":\"" << to_string(r.method) << "\""
               << ",\"d_bar_db\":" << detail::fmt_g9(r.d_bar_db)
               << ",\"sat_antennas\":" << detail::fmt_g9(r.sat_antennas)
               << ",\"lms_final_weight\":[" << detail::fmt_g9(r.lms_final_weight.real()) << ','
               << detail::fmt_g9(r.lms_final_weight.imag()) << ']'
               << ",\"wall_time_s\":" << detail::fmt_g9(r.wall_time_s)
               << ",\"seed\":" << r.seed << "}\n";
        }
    }
    if (!os)
        throw std::runtime_error("write_results: stream write failed");
}

/// Writes rows to a file; see write_results.
inline void emit_results(std::span<const ResultRow> rows, const std::string &path,
                         OutputFormat format) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("emit_results: cannot open '" + path + "' for writing");
    write_results(rows, os, format);
    os.flush();
    if (!os)
        throw std::runtime_error("emit_results: write to '" + path + "' failed");
}

} // namespace rxlin

#endif // RXLIN_HARNESS_HPP
