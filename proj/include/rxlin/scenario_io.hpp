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
// JSON scenario files. Field names mirror ScenarioConfig; unknown keys are
// rejected so typos fail loudly instead of silently using defaults.

#ifndef RXLIN_SCENARIO_IO_HPP
#define RXLIN_SCENARIO_IO_HPP

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "rxlin/harness.hpp"

namespace rxlin {

namespace detail {

inline void check_keys(const nlohmann::json &j, const std::set<std::string> &allowed,
                       const std::string &context) {
    for (const auto &item : j.items())
        if (!allowed.count(item.key()))
            throw config_error("config: unknown key '" + item.key() + "' in " + context);
}

} // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json &j) {
    ScenarioConfig cfg;
    detail::check_keys(j, {"nr", "num_users", "aoa_policy", "aoas", "aoa_range",
                           "interferer_total_dbm", "soi_dbm", "user_powers_dbm", "soi_index",
                           "lna", "adc", "waveform", "sat_recovery", "beamspace", "methods",
                           "trials", "master_seed", "impedance_ohm"},
                       "scenario");
    cfg.nr = j.value("nr", cfg.nr);
    cfg.num_users = j.value("num_users", cfg.num_users);
    if (j.contains("aoa_policy")) {
        const std::string p = j["aoa_policy"].get<std::string>();
        if (p == "random")
            cfg.aoa_policy = AoaPolicy::random_min_sep;
        else if (p == "explicit")
            cfg.aoa_policy = AoaPolicy::explicit_list;
        else
            throw config_error("config: aoa_policy must be 'random' or 'explicit'");
    }
    if (j.contains("aoas")) {
        cfg.aoas = j["aoas"].get<std::vector<double>>();
        if (!j.contains("aoa_policy"))
            cfg.aoa_policy = AoaPolicy::explicit_list;
    }
    cfg.aoa_range = j.value("aoa_range", cfg.aoa_range);
    cfg.interferer_total_dbm = j.value("interferer_total_dbm", cfg.interferer_total_dbm);
    cfg.soi_dbm = j.value("soi_dbm", cfg.soi_dbm);
    if (j.contains("user_powers_dbm"))
        cfg.user_powers_dbm = j["user_powers_dbm"].get<std::vector<double>>();
    cfg.soi_index = j.value("soi_index", cfg.soi_index);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.impedance_ohm = j.value("impedance_ohm", cfg.impedance_ohm);

    if (j.contains("lna")) {
        const nlohmann::json &l = j["lna"];
        detail::check_keys(l, {"gain_db", "iip3_dbm", "mode"}, "lna");
        cfg.lna.gain_db = l.value("gain_db", cfg.lna.gain_db);
        cfg.lna.iip3_dbm = l.value("iip3_dbm", cfg.lna.iip3_dbm);
        if (l.contains("mode"))
            cfg.lna.mode = lna_mode_from_string(l["mode"].get<std::string>());
    }
    if (j.contains("adc")) {
        const nlohmann::json &a = j["adc"];
        detail::check_keys(a, {"enabled", "bits", "loading_policy", "loading_fraction",
                               "loading_grid"},
                           "adc");
        cfg.adc.enabled = a.value("enabled", cfg.adc.enabled);
        cfg.adc.bits = a.value("bits", cfg.adc.bits);
        if (a.contains("loading_policy")) {
            const std::string p = a["loading_policy"].get<std::string>();
            if (p == "fixed")
                cfg.adc.policy = LoadingPolicy::fixed;
            else if (p == "proxy")
                cfg.adc.policy = LoadingPolicy::proxy_optimized;
            else if (p == "chain")
                cfg.adc.policy = LoadingPolicy::chain_optimized;
            else
                throw config_error("config: loading_policy must be 'fixed', 'proxy' or 'chain'");
        }
        cfg.adc.fixed_fraction = a.value("loading_fraction", cfg.adc.fixed_fraction);
        if (a.contains("loading_grid"))
            cfg.adc.loading_grid = a["loading_grid"].get<std::vector<double>>();
    }
    if (j.contains("waveform")) {
        const nlohmann::json &w = j["waveform"];
        detail::check_keys(w, {"modulation_order", "oversampling_factor", "symbol_count",
                               "pulse_shape", "rrc_rolloff", "rrc_span_symbols"},
                           "waveform");
        cfg.waveform.modulation_order = w.value("modulation_order", cfg.waveform.modulation_order);
        cfg.waveform.oversampling_factor =
            w.value("oversampling_factor", cfg.waveform.oversampling_factor);
        cfg.waveform.symbol_count = w.value("symbol_count", cfg.waveform.symbol_count);
        if (w.contains("pulse_shape")) {
            const std::string p = w["pulse_shape"].get<std::string>();
            if (p == "rect-hold")
                cfg.waveform.pulse_shape = PulseShape::rect_hold;
            else if (p == "rrc" || p == "root-raised-cosine")
                cfg.waveform.pulse_shape = PulseShape::root_raised_cosine;
            else
                throw config_error("config: pulse_shape must be 'rect-hold' or 'rrc'");
        }
        cfg.waveform.rrc_rolloff = w.value("rrc_rolloff", cfg.waveform.rrc_rolloff);
        cfg.waveform.rrc_span_symbols = w.value("rrc_span_symbols", cfg.waveform.rrc_span_symbols);
    }
    if (j.contains("sat_recovery")) {
        const nlohmann::json &s = j["sat_recovery"];
        detail::check_keys(s, {"gamma_ratio", "kappa"}, "sat_recovery");
        cfg.sat_recovery.gamma_ratio = s.value("gamma_ratio", cfg.sat_recovery.gamma_ratio);
        cfg.sat_recovery.kappa = s.value("kappa", cfg.sat_recovery.kappa);
    }
    if (j.contains("beamspace")) {
        const nlohmann::json &b = j["beamspace"];
        detail::check_keys(b, {"eta_dbm", "mu_factor", "weight_bound", "calibration_samples"},
                           "beamspace");
        cfg.beamspace.eta_dbm = b.value("eta_dbm", cfg.beamspace.eta_dbm);
        cfg.beamspace.mu_factor = b.value("mu_factor", cfg.beamspace.mu_factor);
        cfg.beamspace.weight_bound = b.value("weight_bound", cfg.beamspace.weight_bound);
        cfg.beamspace.calibration_samples =
            b.value("calibration_samples", cfg.beamspace.calibration_samples);
    }
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto &m : j["methods"])
            cfg.methods.push_back(method_from_string(m.get<std::string>()));
    }
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw config_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception &e) {
        throw config_error("config: failed to parse '" + path + "': " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace rxlin

#endif // RXLIN_SCENARIO_IO_HPP
