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
// Command line front end: single-scenario runs, parameter sweeps and link
// budget arithmetic. Results go to stdout or to --out as CSV/JSON-lines.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rxlin/rxlin.hpp"
#include "rxlin/scenario_io.hpp"

namespace {

std::vector<double> parse_value_list(const std::string &list) {
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos])))
            ++pos;
        if (pos != item.size())
            throw rxlin::config_error("cannot parse value '" + item + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw rxlin::config_error("--values list is empty");
    return values;
}

void output_rows(const std::vector<rxlin::ResultRow> &rows, const std::string &out_path,
                 rxlin::OutputFormat format) {
    if (out_path.empty())
        rxlin::write_results(rows, std::cout, format);
    else
        rxlin::emit_results(rows, out_path, format);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Link-level simulator for a digital mmWave uplink receiver array with "
                 "LNA nonlinearity, low-resolution ADCs and digital linearization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format_name = "csv";
    std::string axis_name;
    std::string values_list;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 0;

    CLI::App *run_cmd = app.add_subcommand("run", "Run one scenario from a config file");
    run_cmd->add_option("--config", config_path, "Scenario config (JSON)")->required();
    run_cmd->add_option("--seed", seed_override, "Override the master seed")
        ->each([&](const std::string &) { seed_given = true; });
    run_cmd->add_option("--out", out_path, "Output file (default: stdout)");
    run_cmd->add_option("--format", format_name, "csv or jsonl")->default_str("csv");
    run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Sweep one axis over a value list");
    sweep_cmd->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sweep_cmd->add_option("--axis", axis_name, "input-power, iip3 or adc-bits")->required();
    sweep_cmd->add_option("--values", values_list, "Comma-separated values")->required();
    sweep_cmd->add_option("--seed", seed_override, "Override the master seed")
        ->each([&](const std::string &) { seed_given = true; });
    sweep_cmd->add_option("--out", out_path, "Output file (default: stdout)");
    sweep_cmd->add_option("--format", format_name, "csv or jsonl")->default_str("csv");
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    double tx_dbm = 0.0, tx_gain = 0.0, pathloss = 0.0, rx_gain = 0.0, papr = 0.0;
    CLI::App *lb_cmd = app.add_subcommand("linkbudget", "Receive power budget");
    lb_cmd->add_option("--tx-dbm", tx_dbm, "Transmit power (dBm)")->required();
    lb_cmd->add_option("--tx-gain", tx_gain, "Transmit array gain (dB)")->required();
    lb_cmd->add_option("--pathloss", pathloss, "Path loss (dB)")->required();
    lb_cmd->add_option("--rx-gain", rx_gain, "Receive element gain (dBi)")->required();
    lb_cmd->add_option("--papr", papr, "Waveform peak-to-average ratio (dB)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        rxlin::OutputFormat format = rxlin::OutputFormat::csv;
        if (format_name == "jsonl")
            format = rxlin::OutputFormat::json_lines;
        else if (format_name != "csv")
            throw rxlin::config_error("--format must be 'csv' or 'jsonl'");

        if (app.got_subcommand(run_cmd)) {
            rxlin::ScenarioConfig cfg = rxlin::load_scenario(config_path);
            if (seed_given)
                cfg.master_seed = seed_override;
            const std::vector<rxlin::ResultRow> rows = rxlin::run_scenario(cfg, 0, threads);
            output_rows(rows, out_path, format);
        } else if (app.got_subcommand(sweep_cmd)) {
            rxlin::ScenarioConfig cfg = rxlin::load_scenario(config_path);
            if (seed_given)
                cfg.master_seed = seed_override;
            const rxlin::SweepAxis axis = rxlin::sweep_axis_from_string(axis_name);
            const std::vector<double> values = parse_value_list(values_list);
            const std::vector<rxlin::ResultRow> rows = rxlin::sweep(cfg, axis, values, threads);
            output_rows(rows, out_path, format);
        } else if (app.got_subcommand(lb_cmd)) {
            const rxlin::LinkBudget lb =
                rxlin::link_budget(tx_dbm, tx_gain, pathloss, rx_gain, papr);
            std::printf("rx_dbm=%.9g\nrx_peak_dbm=%.9g\n", lb.rx_dbm, lb.rx_peak_dbm);
        }
    } catch (const rxlin::config_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
