// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/experiment.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "skrsim/error.hpp"
#include "skrsim/skr_global.hpp"

namespace skrsim {

using nlohmann::json;

namespace {

constexpr double kAngleSpread = constants::pi / 3.0;  // AoD/AoA draw range

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void check_known_keys(const json& block, const std::string& path,
                      std::initializer_list<const char*> allowed) {
    for (auto it = block.begin(); it != block.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw config_error(path + "." + it.key() + ": unknown field");
    }
}

double get_number(const json& block, const std::string& path, const char* key, double fallback) {
    if (!block.contains(key)) return fallback;
    if (!block[key].is_number())
        throw config_error(path + "." + key + ": expected a number");
    return block[key].get<double>();
}

int get_int(const json& block, const std::string& path, const char* key, int fallback) {
    if (!block.contains(key)) return fallback;
    if (!block[key].is_number_integer())
        throw config_error(path + "." + key + ": expected an integer");
    return block[key].get<int>();
}

std::string get_string(const json& block, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!block.contains(key)) return fallback;
    if (!block[key].is_string())
        throw config_error(path + "." + key + ": expected a string");
    return block[key].get<std::string>();
}

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0)) throw config_error(field + ": must be > 0");
}

void require_unit_interval(double value, const std::string& field) {
    if (value < 0.0 || value > 1.0) throw config_error(field + ": must be in [0, 1]");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

struct SegmentDraw {
    std::vector<double> aod;
    std::vector<double> aoa;
};

// Per-segment angle draws, fixed by the config seed alone so a sweep holds
// one geometry while the swept variable moves.
std::array<SegmentDraw, 3> draw_angles(const ExperimentConfig& config) {
    std::mt19937_64 rng(mix_seed(config.seed, 0xa11ce5));
    std::uniform_real_distribution<double> spread(-kAngleSpread, kAngleSpread);
    std::array<SegmentDraw, 3> draws;
    for (auto& draw : draws) {
        draw.aod.resize(static_cast<size_t>(config.paths_per_segment));
        draw.aoa.resize(static_cast<size_t>(config.paths_per_segment));
        for (int i = 0; i < config.paths_per_segment; ++i) {
            draw.aod[static_cast<size_t>(i)] = spread(rng);
            draw.aoa[static_cast<size_t>(i)] = spread(rng);
        }
    }
    return draws;
}

std::vector<PathComponent> make_paths(const ExperimentConfig& config, const SegmentDraw& draw,
                                      double base_length_m) {
    std::vector<PathComponent> paths;
    for (int i = 0; i < config.paths_per_segment; ++i) {
        PathComponent path;
        path.path_index = i + 1;
        path.is_los = (i == 0);
        path.path_length_m = base_length_m * (1.0 + 0.15 * i);
        path.delay_s = path.path_length_m / constants::speed_of_light;
        path.aod_rad = draw.aod[static_cast<size_t>(i)];
        path.aoa_rad = draw.aoa[static_cast<size_t>(i)];
        path.fresnel_coeff = config.fresnel_coeff;
        path.roughness = config.roughness;
        paths.push_back(path);
    }
    return paths;
}

RisPhaseConfig random_phases(const ExperimentConfig& config, int ris_elements) {
    std::mt19937_64 rng(mix_seed(config.seed, 0x9a5e5 + static_cast<std::uint64_t>(ris_elements)));
    std::uniform_real_distribution<double> draw(-constants::pi, constants::pi);
    RisPhaseConfig phases{Eigen::VectorXd(ris_elements)};
    for (int k = 0; k < ris_elements; ++k) phases.phases[k] = draw(rng);
    return phases;
}

struct CellResult {
    SkrBreakdown breakdown;
    PhaseSource source;
};

CellResult evaluate_cell(const ExperimentConfig& config, Scenario scenario,
                         const LinkRealization& link, const NoiseVariances& noise,
                         std::uint64_t pso_salt) {
    const int ris_elements = static_cast<int>(link.channels.tx_ris.rows());
    CellResult cell;
    cell.source = config.phase_source;
    if (config.phase_source == PhaseSource::optimized) {
        SwarmConfig swarm = config.pso;
        swarm.seed = mix_seed(config.seed, pso_salt);
        const OptimizationResult best =
            optimize(skr_objective(scenario, link.channels, link.dilations, noise),
                     SearchSpace::ris_link(ris_elements), swarm);
        const auto [phases, splitters] = decode_position(best.best_position);
        cell.breakdown =
            evaluate_scenario(scenario, link.channels, link.dilations, phases, splitters, noise);
        return cell;
    }
    const RisPhaseConfig phases = config.phase_source == PhaseSource::zero
                                      ? RisPhaseConfig::zeros(ris_elements)
                                      : random_phases(config, ris_elements);
    const SplitterSettings splitters{config.eta_a, config.eta_b};
    cell.breakdown =
        evaluate_scenario(scenario, link.channels, link.dilations, phases, splitters, noise);
    return cell;
}

}  // namespace

std::string to_string(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::distance_m: return "distance_m";
        case SweepVariable::antenna_count: return "antenna_count";
        case SweepVariable::ris_elements: return "ris_elements";
        case SweepVariable::detector_noise: return "detector_noise";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(const std::string& name) {
    if (name == "distance_m") return SweepVariable::distance_m;
    if (name == "antenna_count") return SweepVariable::antenna_count;
    if (name == "ris_elements") return SweepVariable::ris_elements;
    if (name == "detector_noise") return SweepVariable::detector_noise;
    throw config_error("sweep.variable: unknown variable '" + name + "'");
}

std::string to_string(PhaseSource source) {
    switch (source) {
        case PhaseSource::random: return "random";
        case PhaseSource::optimized: return "optimized";
        case PhaseSource::zero: return "zero";
    }
    return "?";
}

PhaseSource phase_source_from_string(const std::string& name) {
    if (name == "random") return PhaseSource::random;
    if (name == "optimized") return PhaseSource::optimized;
    if (name == "zero") return PhaseSource::zero;
    throw config_error("phases.source: unknown source '" + name + "'");
}

double ExperimentConfig::element_gain_linear() const {
    return std::pow(10.0, element_gain_dbi / 10.0);
}

NoiseVariances ExperimentConfig::noise() const {
    NoiseVariances noise = NoiseVariances::standard(signal_variance, detector_noise,
                                                    carrier_frequency_hz(), temperature_k);
    noise.splitter_vacuum = splitter_vacuum;
    noise.eve_variance_direct = eve_variance_direct;
    noise.eve_variance_alice_ris = eve_variance_alice_ris;
    noise.eve_variance_ris_bob = eve_variance_ris_bob;
    noise.eve_variance_global = eve_variance_global;
    return noise;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw config_error(std::string("config: invalid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    check_known_keys(doc, "config",
                     {"system", "noise", "splitters", "sweep", "scenarios", "phases", "pso",
                      "secure_distance", "output", "seed"});

    ExperimentConfig config;

    if (doc.contains("system")) {
        const json& sys = doc["system"];
        check_known_keys(sys, "system",
                         {"n_tx", "n_rx", "ris_nx", "ris_ny", "freq_thz",
                          "antenna_spacing_wavelengths", "ris_spacing_wavelengths",
                          "ris_elevation_rad", "element_gain_dbi", "absorption_db_per_km",
                          "temperature_k", "ris_alice_fraction", "ris_bob_fraction", "distance_m",
                          "paths_per_segment", "fresnel_coeff", "roughness"});
        config.n_tx = get_int(sys, "system", "n_tx", config.n_tx);
        config.n_rx = get_int(sys, "system", "n_rx", config.n_rx);
        config.ris_nx = get_int(sys, "system", "ris_nx", config.ris_nx);
        config.ris_ny = get_int(sys, "system", "ris_ny", config.ris_ny);
        config.freq_thz = get_number(sys, "system", "freq_thz", config.freq_thz);
        config.antenna_spacing_wavelengths = get_number(sys, "system",
                                                        "antenna_spacing_wavelengths",
                                                        config.antenna_spacing_wavelengths);
        config.ris_spacing_wavelengths =
            get_number(sys, "system", "ris_spacing_wavelengths", config.ris_spacing_wavelengths);
        config.ris_elevation_rad =
            get_number(sys, "system", "ris_elevation_rad", config.ris_elevation_rad);
        config.element_gain_dbi =
            get_number(sys, "system", "element_gain_dbi", config.element_gain_dbi);
        config.absorption_db_per_km =
            get_number(sys, "system", "absorption_db_per_km", config.absorption_db_per_km);
        config.temperature_k = get_number(sys, "system", "temperature_k", config.temperature_k);
        config.ris_alice_fraction =
            get_number(sys, "system", "ris_alice_fraction", config.ris_alice_fraction);
        config.ris_bob_fraction =
            get_number(sys, "system", "ris_bob_fraction", config.ris_bob_fraction);
        config.distance_m = get_number(sys, "system", "distance_m", config.distance_m);
        config.paths_per_segment =
            get_int(sys, "system", "paths_per_segment", config.paths_per_segment);
        config.fresnel_coeff = get_number(sys, "system", "fresnel_coeff", config.fresnel_coeff);
        config.roughness = get_number(sys, "system", "roughness", config.roughness);
    }

    if (doc.contains("noise")) {
        const json& noise = doc["noise"];
        check_known_keys(noise, "noise",
                         {"signal_variance", "detector_noise", "splitter_vacuum",
                          "eve_variance_direct", "eve_variance_alice_ris", "eve_variance_ris_bob",
                          "eve_variance_global"});
        config.signal_variance =
            get_number(noise, "noise", "signal_variance", config.signal_variance);
        config.detector_noise = get_number(noise, "noise", "detector_noise", config.detector_noise);
        config.splitter_vacuum =
            get_number(noise, "noise", "splitter_vacuum", config.splitter_vacuum);
        config.eve_variance_direct =
            get_number(noise, "noise", "eve_variance_direct", config.eve_variance_direct);
        config.eve_variance_alice_ris =
            get_number(noise, "noise", "eve_variance_alice_ris", config.eve_variance_alice_ris);
        config.eve_variance_ris_bob =
            get_number(noise, "noise", "eve_variance_ris_bob", config.eve_variance_ris_bob);
        config.eve_variance_global =
            get_number(noise, "noise", "eve_variance_global", config.eve_variance_global);
    }

    if (doc.contains("splitters")) {
        const json& split = doc["splitters"];
        check_known_keys(split, "splitters", {"eta_a", "eta_b"});
        config.eta_a = get_number(split, "splitters", "eta_a", config.eta_a);
        config.eta_b = get_number(split, "splitters", "eta_b", config.eta_b);
    }

    if (doc.contains("sweep")) {
        const json& sweep = doc["sweep"];
        check_known_keys(sweep, "sweep", {"variable", "values"});
        config.sweep_variable = sweep_variable_from_string(
            get_string(sweep, "sweep", "variable", to_string(config.sweep_variable)));
        if (sweep.contains("values")) {
            if (!sweep["values"].is_array() || sweep["values"].empty())
                throw config_error("sweep.values: expected a non-empty array");
            config.sweep_values.clear();
            for (const json& value : sweep["values"]) {
                if (!value.is_number())
                    throw config_error("sweep.values: expected numbers");
                config.sweep_values.push_back(value.get<double>());
            }
        }
    }

    if (doc.contains("scenarios")) {
        if (!doc["scenarios"].is_array() || doc["scenarios"].empty())
            throw config_error("scenarios: expected a non-empty array");
        config.scenarios.clear();
        for (const json& name : doc["scenarios"]) {
            if (!name.is_string()) throw config_error("scenarios: expected strings");
            try {
                config.scenarios.push_back(scenario_from_string(name.get<std::string>()));
            } catch (const config_error& err) {
                throw config_error(std::string("scenarios: ") + err.what());
            }
        }
    }

    if (doc.contains("phases")) {
        const json& phases = doc["phases"];
        check_known_keys(phases, "phases", {"source"});
        config.phase_source = phase_source_from_string(
            get_string(phases, "phases", "source", to_string(config.phase_source)));
    }

    if (doc.contains("pso")) {
        const json& pso = doc["pso"];
        check_known_keys(pso, "pso",
                         {"particles", "iterations", "inertia", "cognitive", "social",
                          "velocity_clamp"});
        config.pso.particle_count = get_int(pso, "pso", "particles", config.pso.particle_count);
        config.pso.iteration_count = get_int(pso, "pso", "iterations", config.pso.iteration_count);
        config.pso.inertia = get_number(pso, "pso", "inertia", config.pso.inertia);
        config.pso.cognitive_weight = get_number(pso, "pso", "cognitive",
                                                 config.pso.cognitive_weight);
        config.pso.social_weight = get_number(pso, "pso", "social", config.pso.social_weight);
        config.pso.velocity_clamp =
            get_number(pso, "pso", "velocity_clamp", config.pso.velocity_clamp);
    }

    if (doc.contains("secure_distance")) {
        const json& sd = doc["secure_distance"];
        check_known_keys(sd, "secure_distance", {"threshold_bits", "bracket_min_m", "bracket_max_m"});
        config.skr_threshold_bits =
            get_number(sd, "secure_distance", "threshold_bits", config.skr_threshold_bits);
        config.bracket_min_m =
            get_number(sd, "secure_distance", "bracket_min_m", config.bracket_min_m);
        config.bracket_max_m =
            get_number(sd, "secure_distance", "bracket_max_m", config.bracket_max_m);
    }

    if (doc.contains("output")) {
        const json& out = doc["output"];
        check_known_keys(out, "output", {"path", "format"});
        config.output_path = get_string(out, "output", "path", config.output_path);
        config.output_format = get_string(out, "output", "format", config.output_format);
        if (config.output_format != "csv" && config.output_format != "json")
            throw config_error("output.format: expected 'csv' or 'json'");
    }

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw config_error("seed: expected an integer");
        config.seed = doc["seed"].get<std::uint64_t>();
    }

    // cross-field validation
    if (config.n_tx < 1) throw config_error("system.n_tx: must be >= 1");
    if (config.n_rx < 1) throw config_error("system.n_rx: must be >= 1");
    if (config.ris_nx < 1 || config.ris_ny < 1)
        throw config_error("system.ris_nx/ris_ny: must be >= 1");
    require_positive(config.freq_thz, "system.freq_thz");
    require_positive(config.antenna_spacing_wavelengths, "system.antenna_spacing_wavelengths");
    require_positive(config.ris_spacing_wavelengths, "system.ris_spacing_wavelengths");
    require_positive(config.temperature_k, "system.temperature_k");
    require_positive(config.distance_m, "system.distance_m");
    require_positive(config.ris_alice_fraction, "system.ris_alice_fraction");
    require_positive(config.ris_bob_fraction, "system.ris_bob_fraction");
    if (config.absorption_db_per_km < 0.0)
        throw config_error("system.absorption_db_per_km: must be >= 0");
    if (config.paths_per_segment < 1)
        throw config_error("system.paths_per_segment: must be >= 1");
    require_unit_interval(config.fresnel_coeff, "system.fresnel_coeff");
    require_unit_interval(config.roughness, "system.roughness");
    if (config.signal_variance < 0.0) throw config_error("noise.signal_variance: must be >= 0");
    if (config.detector_noise < 0.0) throw config_error("noise.detector_noise: must be >= 0");
    for (auto [value, name] :
         {std::pair{config.eve_variance_direct, "noise.eve_variance_direct"},
          std::pair{config.eve_variance_alice_ris, "noise.eve_variance_alice_ris"},
          std::pair{config.eve_variance_ris_bob, "noise.eve_variance_ris_bob"},
          std::pair{config.eve_variance_global, "noise.eve_variance_global"}})
        if (value < 1.0) throw config_error(std::string(name) + ": must be >= 1");
    require_unit_interval(config.eta_a, "splitters.eta_a");
    require_unit_interval(config.eta_b, "splitters.eta_b");
    for (size_t i = 1; i < config.sweep_values.size(); ++i)
        if (config.sweep_values[i] <= config.sweep_values[i - 1])
            throw config_error("sweep.values: must be strictly ascending");
    if (config.sweep_variable == SweepVariable::ris_elements)
        for (double value : config.sweep_values) {
            const int k = static_cast<int>(std::lround(value));
            const int side = static_cast<int>(std::lround(std::sqrt(double(k))));
            if (side * side != k)
                throw config_error("sweep.values: ris_elements entries must be perfect squares");
        }
    if (config.bracket_min_m <= 0.0 || config.bracket_max_m <= config.bracket_min_m)
        throw config_error("secure_distance: bracket must satisfy 0 < min < max");
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string resolved_config_json(const ExperimentConfig& config) {
    json doc;
    doc["system"] = {{"n_tx", config.n_tx},
                     {"n_rx", config.n_rx},
                     {"ris_nx", config.ris_nx},
                     {"ris_ny", config.ris_ny},
                     {"ris_elements", config.ris_elements()},
                     {"freq_thz", config.freq_thz},
                     {"carrier_frequency_hz", config.carrier_frequency_hz()},
                     {"wavelength_m", constants::speed_of_light / config.carrier_frequency_hz()},
                     {"antenna_spacing_wavelengths", config.antenna_spacing_wavelengths},
                     {"ris_spacing_wavelengths", config.ris_spacing_wavelengths},
                     {"ris_elevation_rad", config.ris_elevation_rad},
                     {"element_gain_dbi", config.element_gain_dbi},
                     {"element_gain_linear", config.element_gain_linear()},
                     {"absorption_db_per_km", config.absorption_db_per_km},
                     {"temperature_k", config.temperature_k},
                     {"ris_alice_fraction", config.ris_alice_fraction},
                     {"ris_bob_fraction", config.ris_bob_fraction},
                     {"distance_m", config.distance_m},
                     {"paths_per_segment", config.paths_per_segment},
                     {"fresnel_coeff", config.fresnel_coeff},
                     {"roughness", config.roughness}};
    const NoiseVariances noise = config.noise();
    doc["noise"] = {{"signal_variance", noise.signal_variance},
                    {"vacuum_variance", noise.vacuum_variance},
                    {"alice_variance", noise.alice_variance()},
                    {"thermal_occupation",
                     NoiseVariances::thermal_occupation(config.carrier_frequency_hz(),
                                                        config.temperature_k)},
                    {"detector_noise", noise.detector_noise},
                    {"splitter_vacuum", noise.splitter_vacuum},
                    {"eve_variance_direct", noise.eve_variance_direct},
                    {"eve_variance_alice_ris", noise.eve_variance_alice_ris},
                    {"eve_variance_ris_bob", noise.eve_variance_ris_bob},
                    {"eve_variance_global", noise.eve_variance_global}};
    doc["splitters"] = {{"eta_a", config.eta_a}, {"eta_b", config.eta_b}};
    doc["sweep"] = {{"variable", to_string(config.sweep_variable)},
                    {"values", config.sweep_values}};
    json scenarios = json::array();
    for (Scenario scenario : config.scenarios) scenarios.push_back(to_string(scenario));
    doc["scenarios"] = scenarios;
    doc["phases"] = {{"source", to_string(config.phase_source)}};
    doc["pso"] = {{"particles", config.pso.particle_count},
                  {"iterations", config.pso.iteration_count},
                  {"inertia", config.pso.inertia},
                  {"cognitive", config.pso.cognitive_weight},
                  {"social", config.pso.social_weight},
                  {"velocity_clamp", config.pso.velocity_clamp}};
    doc["secure_distance"] = {{"threshold_bits", config.skr_threshold_bits},
                              {"bracket_min_m", config.bracket_min_m},
                              {"bracket_max_m", config.bracket_max_m}};
    doc["output"] = {{"path", config.output_path}, {"format", config.output_format}};
    doc["seed"] = config.seed;
    return doc.dump(2);
}

LinkRealization build_link(const ExperimentConfig& config, double distance_m, int antenna_count,
                           int ris_elements) {
    const int n_tx = antenna_count > 0 ? antenna_count : config.n_tx;
    const int n_rx = antenna_count > 0 ? antenna_count : config.n_rx;
    int ris_nx = config.ris_nx;
    int ris_ny = config.ris_ny;
    if (ris_elements > 0) {
        const int side = static_cast<int>(std::lround(std::sqrt(double(ris_elements))));
        if (side * side != ris_elements)
            throw config_error("ris_elements override must be a perfect square");
        ris_nx = ris_ny = side;
    }

    const double fc = config.carrier_frequency_hz();
    const double wavelength = constants::speed_of_light / fc;
    const double gain = config.element_gain_linear();

    const UlaGeometry alice{n_tx, config.antenna_spacing_wavelengths * wavelength, fc};
    const UlaGeometry bob{n_rx, config.antenna_spacing_wavelengths * wavelength, fc};
    const RisGeometry ris{ris_nx, ris_ny, config.ris_spacing_wavelengths * wavelength,
                          config.ris_spacing_wavelengths * wavelength, config.ris_elevation_rad};
    const int ris_count = ris.element_count();

    const LinkBudget budget_direct{config.absorption_db_per_km, gain, n_tx * gain, n_rx * gain};
    const LinkBudget budget_tx_ris{config.absorption_db_per_km, gain, n_tx * gain,
                                   static_cast<double>(ris_count)};
    const LinkBudget budget_ris_rx{config.absorption_db_per_km, gain,
                                   static_cast<double>(ris_count), n_rx * gain};

    const auto angles = draw_angles(config);
    LinkRealization link;
    link.channels.direct =
        build_segment(make_paths(config, angles[0], distance_m), alice, bob, budget_direct, fc,
                      SegmentTag::direct);
    link.channels.tx_ris =
        build_segment(make_paths(config, angles[1], config.ris_alice_fraction * distance_m), alice,
                      ris, budget_tx_ris, fc, SegmentTag::alice_ris);
    link.channels.ris_rx =
        build_segment(make_paths(config, angles[2], config.ris_bob_fraction * distance_m), ris,
                      bob, budget_ris_rx, fc, SegmentTag::ris_bob);
    link.dilations = dilate_segments(link.channels);
    return link;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int jobs) {
    struct Cell {
        double value;
        Scenario scenario;
        size_t index;
    };
    std::vector<Cell> cells;
    for (size_t vi = 0; vi < config.sweep_values.size(); ++vi)
        for (size_t si = 0; si < config.scenarios.size(); ++si)
            cells.push_back({config.sweep_values[vi], config.scenarios[si], cells.size()});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            SweepRow& row = rows[cell.index];
            row.sweep_variable = to_string(config.sweep_variable);
            row.sweep_value = cell.value;
            row.scenario = cell.scenario;
            row.phase_source = config.phase_source;

            const auto start = std::chrono::steady_clock::now();
            try {
                double distance = config.distance_m;
                int antennas = 0;
                int ris = 0;
                NoiseVariances noise = config.noise();
                switch (config.sweep_variable) {
                    case SweepVariable::distance_m: distance = cell.value; break;
                    case SweepVariable::antenna_count:
                        antennas = static_cast<int>(std::lround(cell.value));
                        break;
                    case SweepVariable::ris_elements:
                        ris = static_cast<int>(std::lround(cell.value));
                        break;
                    case SweepVariable::detector_noise: noise.detector_noise = cell.value; break;
                }
                const LinkRealization link = build_link(config, distance, antennas, ris);
                const CellResult result =
                    evaluate_cell(config, cell.scenario, link, noise, cell.index);
                row.mutual_information_bits = result.breakdown.mutual_information_bits;
                row.holevo_bits = result.breakdown.holevo_bits;
                row.skr_raw = result.breakdown.skr_bits;
                row.skr_clamped = std::max(0.0, row.skr_raw);
            } catch (const std::exception& err) {
                row.failed = true;
                row.error = err.what();
                row.mutual_information_bits = row.holevo_bits = row.skr_raw = row.skr_clamped =
                    std::numeric_limits<double>::quiet_NaN();
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        }
    };

    const int pool = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(pool));
        for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (std::thread& thread : threads) thread.join();
    }
    return rows;
}

double max_secure_distance(const ExperimentConfig& config, Scenario scenario,
                           double threshold_bits) {
    const NoiseVariances noise = config.noise();
    auto skr_at = [&](double distance) {
        const LinkRealization link = build_link(config, distance);
        return evaluate_cell(config, scenario, link, noise,
                             static_cast<std::uint64_t>(distance * 1024.0))
            .breakdown.skr_bits;
    };

    double lo = config.bracket_min_m;
    double hi = config.bracket_max_m;
    double skr_lo = skr_at(lo);
    if (skr_lo < threshold_bits) return 0.0;
    const double skr_hi = skr_at(hi);
    if (skr_hi >= threshold_bits)
        throw contract_error("max_secure_distance: SKR still above threshold at bracket_max_m; "
                             "extend the bracket");

    // decreasing-premise probe before bisecting
    double previous = skr_lo;
    for (int i = 1; i <= 3; ++i) {
        const double probe = lo + (hi - lo) * i / 4.0;
        const double value = skr_at(probe);
        if (value > previous + 1e-9)
            throw contract_error("max_secure_distance: SKR is not decreasing over the bracket");
        previous = value;
    }

    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        if (skr_at(mid) >= threshold_bits)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv =
        "sweep_var,sweep_value,scenario,phase_source,mi_bits,holevo_bits,skr_raw,skr_clamped,"
        "wall_ms\n";
    for (const SweepRow& row : rows) {
        csv += row.sweep_variable + ',' + format_double(row.sweep_value) + ',' +
               to_string(row.scenario) + ',' + to_string(row.phase_source) + ',' +
               format_double(row.mutual_information_bits) + ',' +
               format_double(row.holevo_bits) + ',' + format_double(row.skr_raw) + ',' +
               format_double(row.skr_clamped) + ',' + format_double(row.wall_ms) + '\n';
    }
    return csv;
}

std::string rows_to_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
    json doc;
    doc["config"] = json::parse(resolved_config_json(config));
    json out_rows = json::array();
    for (const SweepRow& row : rows) {
        json entry = {{"sweep_var", row.sweep_variable},
                      {"sweep_value", row.sweep_value},
                      {"scenario", to_string(row.scenario)},
                      {"phase_source", to_string(row.phase_source)},
                      {"mi_bits", row.mutual_information_bits},
                      {"holevo_bits", row.holevo_bits},
                      {"skr_raw", row.skr_raw},
                      {"skr_clamped", row.skr_clamped},
                      {"wall_ms", row.wall_ms}};
        if (row.failed) entry["error"] = row.error;
        out_rows.push_back(entry);
    }
    doc["rows"] = out_rows;
    return doc.dump(2);
}

void emit_results(const std::vector<SweepRow>& rows, const ExperimentConfig& config,
                  const std::string& path, const std::string& format) {
    std::ofstream out(path);
    if (!out) throw config_error("output: cannot write '" + path + "'");
    out << (format == "json" ? rows_to_json(rows, config) : rows_to_csv(rows));
    if (!out) throw config_error("output: write to '" + path + "' failed");
}

}  // namespace skrsim
