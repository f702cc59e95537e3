// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// CLI: sweep evaluation, secure-distance solving, RIS phase optimization,
// and config validation over a single JSON experiment file.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "skrsim/error.hpp"
#include "skrsim/experiment.hpp"
#include "skrsim/objective.hpp"
#include "skrsim/pso.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string output_path;
    std::string format;
    std::int64_t seed = -1;
    int jobs = 1;
};

skrsim::ExperimentConfig load_with_overrides(const CommonFlags& flags) {
    skrsim::ExperimentConfig config = skrsim::load_config(flags.config_path);
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    if (!flags.output_path.empty()) config.output_path = flags.output_path;
    if (!flags.format.empty()) {
        if (flags.format != "csv" && flags.format != "json")
            throw skrsim::config_error("--format: expected 'csv' or 'json'");
        config.output_format = flags.format;
    }
    return config;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_jobs) {
    cmd->add_option("--config", flags.config_path, "Experiment configuration JSON")->required();
    cmd->add_option("--output", flags.output_path, "Output file (overrides config)");
    cmd->add_option("--format", flags.format, "Output format: csv or json");
    cmd->add_option("--seed", flags.seed, "Seed override (non-negative integer)");
    if (with_jobs) cmd->add_option("--jobs", flags.jobs, "Worker threads for sweep cells");
}

int run_sweep_command(const CommonFlags& flags) {
    const skrsim::ExperimentConfig config = load_with_overrides(flags);
    const auto rows = skrsim::run_sweep(config, flags.jobs);
    skrsim::emit_results(rows, config, config.output_path, config.output_format);
    size_t failed = 0;
    for (const auto& row : rows)
        if (row.failed) {
            ++failed;
            std::cerr << "row failed (" << row.sweep_variable << "=" << row.sweep_value << ", "
                      << skrsim::to_string(row.scenario) << "): " << row.error << "\n";
        }
    std::cout << rows.size() << " rows written to " << config.output_path;
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << "\n";
    return 0;
}

int run_secure_distance_command(const CommonFlags& flags, double threshold_override) {
    skrsim::ExperimentConfig config = load_with_overrides(flags);
    const double threshold =
        threshold_override >= 0.0 ? threshold_override : config.skr_threshold_bits;

    // a detector-noise sweep grid turns into one secure distance per noise level
    std::vector<double> noise_grid = {config.detector_noise};
    if (config.sweep_variable == skrsim::SweepVariable::detector_noise)
        noise_grid = config.sweep_values;

    nlohmann::json out_rows = nlohmann::json::array();
    std::string csv = "scenario,detector_noise,threshold_bits,secure_distance_m\n";
    for (double noise : noise_grid) {
        skrsim::ExperimentConfig point = config;
        point.detector_noise = noise;
        for (skrsim::Scenario scenario : config.scenarios) {
            const double distance = skrsim::max_secure_distance(point, scenario, threshold);
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g\n",
                          skrsim::to_string(scenario).c_str(), noise, threshold, distance);
            csv += line;
            out_rows.push_back({{"scenario", skrsim::to_string(scenario)},
                                {"detector_noise", noise},
                                {"threshold_bits", threshold},
                                {"secure_distance_m", distance}});
        }
    }

    std::ofstream out(config.output_path);
    if (!out) throw skrsim::config_error("output: cannot write '" + config.output_path + "'");
    if (config.output_format == "json") {
        nlohmann::json doc;
        doc["config"] = nlohmann::json::parse(skrsim::resolved_config_json(config));
        doc["rows"] = out_rows;
        out << doc.dump(2);
    } else {
        out << csv;
    }
    std::cout << "secure distances written to " << config.output_path << "\n";
    return 0;
}

int run_optimize_command(const CommonFlags& flags) {
    const skrsim::ExperimentConfig config = load_with_overrides(flags);
    const skrsim::LinkRealization link = skrsim::build_link(config, config.distance_m);
    const skrsim::NoiseVariances noise = config.noise();
    const int ris_elements = static_cast<int>(link.channels.tx_ris.rows());

    nlohmann::json results = nlohmann::json::array();
    for (skrsim::Scenario scenario : config.scenarios) {
        skrsim::SwarmConfig swarm = config.pso;
        swarm.seed = config.seed;
        const skrsim::OptimizationResult best = skrsim::optimize(
            skrsim::skr_objective(scenario, link.channels, link.dilations, noise),
            skrsim::SearchSpace::ris_link(ris_elements), swarm);
        const auto [phases, splitters] = skrsim::decode_position(best.best_position);
        std::vector<double> phase_list(phases.phases.data(),
                                       phases.phases.data() + phases.phases.size());
        results.push_back({{"scenario", skrsim::to_string(scenario)},
                           {"distance_m", config.distance_m},
                           {"best_skr_bits", best.best_value},
                           {"eta_a", splitters.eta_a},
                           {"eta_b", splitters.eta_b},
                           {"phases_rad", phase_list},
                           {"history", best.history},
                           {"evaluations", best.evaluations}});
        std::cout << skrsim::to_string(scenario) << ": best SKR " << best.best_value
                  << " bits/use after " << best.evaluations << " evaluations\n";
    }

    nlohmann::json doc;
    doc["config"] = nlohmann::json::parse(skrsim::resolved_config_json(config));
    doc["results"] = results;
    std::ofstream out(config.output_path);
    if (!out) throw skrsim::config_error("output: cannot write '" + config.output_path + "'");
    out << doc.dump(2);
    std::cout << "optimization results written to " << config.output_path << "\n";
    return 0;
}

int run_validate_command(const CommonFlags& flags) {
    const skrsim::ExperimentConfig config = load_with_overrides(flags);
    const std::string resolved = skrsim::resolved_config_json(config);
    if (!flags.output_path.empty()) {
        std::ofstream out(flags.output_path);
        if (!out) throw skrsim::config_error("output: cannot write '" + flags.output_path + "'");
        out << resolved << "\n";
    } else {
        std::cout << resolved << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secret key rate simulator for an RIS-assisted THz MIMO CV-QKD link"};
    app.require_subcommand(1);

    CommonFlags sweep_flags, secure_flags, optimize_flags, validate_flags;
    double threshold_override = -1.0;

    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate SKR over the configured sweep grid");
    add_common(sweep, sweep_flags, /*with_jobs=*/true);

    CLI::App* secure = app.add_subcommand(
        "secure-distance", "Largest distance with SKR above the security threshold");
    add_common(secure, secure_flags, /*with_jobs=*/false);
    secure->add_option("--threshold", threshold_override, "Threshold override, bits/use");

    CLI::App* optimize =
        app.add_subcommand("optimize", "PSO over RIS phases and splitter transmissivities");
    add_common(optimize, optimize_flags, /*with_jobs=*/false);

    CLI::App* validate =
        app.add_subcommand("validate-config", "Parse, validate, and print the resolved config");
    add_common(validate, validate_flags, /*with_jobs=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_command(sweep_flags);
        if (secure->parsed()) return run_secure_distance_command(secure_flags, threshold_override);
        if (optimize->parsed()) return run_optimize_command(optimize_flags);
        if (validate->parsed()) return run_validate_command(validate_flags);
    } catch (const skrsim::config_error& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
    return 0;
}
