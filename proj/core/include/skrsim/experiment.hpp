// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Experiment orchestration: JSON configuration ingestion with resolved
// defaults, deterministic link synthesis from seeded geometry draws, sweep
// evaluation over one variable, secure-distance bisection, and CSV/JSON
// result emission.

#ifndef SKRSIM_EXPERIMENT_HPP
#define SKRSIM_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skrsim/objective.hpp"
#include "skrsim/protocol.hpp"
#include "skrsim/pso.hpp"
#include "skrsim/skr_localized.hpp"

namespace skrsim {

enum class SweepVariable { distance_m, antenna_count, ris_elements, detector_noise };
std::string to_string(SweepVariable variable);
SweepVariable sweep_variable_from_string(const std::string& name);

enum class PhaseSource { random, optimized, zero };
std::string to_string(PhaseSource source);
PhaseSource phase_source_from_string(const std::string& name);

// Fully resolved experiment configuration; every field has a value after
// parsing (defaults mirror the standard operating point: 15 THz, 296 K,
// 50 dB/km, 30 dBi elements, V_s = 1000, sigma_b^2 = 0.01, unit Eve and
// splitter-vacuum variances, half-wavelength spacings, RIS at 0.3/0.8 of the
// Alice-Bob distance).
struct ExperimentConfig {
    // system block
    int n_tx = 8;
    int n_rx = 8;
    int ris_nx = 8;
    int ris_ny = 8;
    double freq_thz = 15.0;
    double antenna_spacing_wavelengths = 0.5;
    double ris_spacing_wavelengths = 0.5;
    double ris_elevation_rad = 0.7853981633974483;
    double element_gain_dbi = 30.0;
    double absorption_db_per_km = 50.0;
    double temperature_k = 296.0;
    double ris_alice_fraction = 0.3;
    double ris_bob_fraction = 0.8;
    double distance_m = 20.0;
    int paths_per_segment = 1;
    double fresnel_coeff = 0.5;
    double roughness = 1.0;

    // noise block
    double signal_variance = 1000.0;
    double detector_noise = 0.01;
    double splitter_vacuum = 1.0;
    double eve_variance_direct = 1.0;
    double eve_variance_alice_ris = 1.0;
    double eve_variance_ris_bob = 1.0;
    double eve_variance_global = 1.0;

    // splitters (used when the optimizer is off)
    double eta_a = 0.5;
    double eta_b = 0.5;

    // sweep block
    SweepVariable sweep_variable = SweepVariable::distance_m;
    std::vector<double> sweep_values = {10.0, 20.0, 30.0, 40.0, 50.0};

    std::vector<Scenario> scenarios = {Scenario::direct, Scenario::alice_ris, Scenario::ris_bob,
                                       Scenario::global};

    // phase configuration
    PhaseSource phase_source = PhaseSource::random;
    SwarmConfig pso;

    // secure-distance block
    double skr_threshold_bits = 1e-3;
    double bracket_min_m = 1.0;
    double bracket_max_m = 200.0;

    std::uint64_t seed = 42;
    std::string output_path = "results.csv";
    std::string output_format = "csv";

    double carrier_frequency_hz() const { return freq_thz * 1e12; }
    double element_gain_linear() const;
    int ris_elements() const { return ris_nx * ris_ny; }
    NoiseVariances noise() const;
};

// Parse and validate a config JSON document (throws config_error with the
// offending field path). Missing fields take defaults.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Resolved configuration, derived quantities included, as a JSON document.
std::string resolved_config_json(const ExperimentConfig& config);

// Seeded per-segment geometry draws (angles held fixed across a sweep).
struct LinkRealization {
    LinkChannels channels;
    LinkDilations dilations;
};

// Synthesize the three segments for one override of the swept variable.
LinkRealization build_link(const ExperimentConfig& config, double distance_m,
                           int antenna_count = 0, int ris_elements = 0);

struct SweepRow {
    std::string sweep_variable;
    double sweep_value = 0.0;
    Scenario scenario = Scenario::direct;
    PhaseSource phase_source = PhaseSource::random;
    double mutual_information_bits = 0.0;
    double holevo_bits = 0.0;
    double skr_raw = 0.0;
    double skr_clamped = 0.0;
    double wall_ms = 0.0;
    bool failed = false;       // per-row numerical/passivity failure
    std::string error;
};

// Evaluate every (grid value x scenario) cell; rows come back in grid-major,
// then scenario-order. jobs > 1 evaluates cells on a bounded worker pool.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int jobs = 1);

// Largest distance with SKR >= threshold, to 0.1 m, via bisection on a
// verified-decreasing bracket; 0 when the threshold is unmet at the minimum.
double max_secure_distance(const ExperimentConfig& config, Scenario scenario,
                           double threshold_bits);

// CSV with the fixed header
// sweep_var,sweep_value,scenario,phase_source,mi_bits,holevo_bits,skr_raw,skr_clamped,wall_ms
std::string rows_to_csv(const std::vector<SweepRow>& rows);
// JSON document mirroring the rows plus the fully resolved config.
std::string rows_to_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config);
void emit_results(const std::vector<SweepRow>& rows, const ExperimentConfig& config,
                  const std::string& path, const std::string& format);

}  // namespace skrsim

#endif  // SKRSIM_EXPERIMENT_HPP
