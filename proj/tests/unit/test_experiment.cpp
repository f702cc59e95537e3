// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include <cmath>
#include <doctest.h>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "skrsim/error.hpp"
#include "skrsim/experiment.hpp"

using namespace skrsim;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config = parse_config(R"({
        "system": { "n_tx": 2, "n_rx": 2, "ris_nx": 2, "ris_ny": 2, "distance_m": 15.0 },
        "sweep": { "variable": "distance_m", "values": [5, 10, 20, 30, 40] },
        "scenarios": ["d", "global"],
        "seed": 11
    })");
    return config;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, sep)) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("defaults resolve the standard operating point") {
    const ExperimentConfig config = parse_config("{}");
    CHECK(config.n_tx == 8);
    CHECK(config.ris_elements() == 64);
    CHECK(config.freq_thz == 15.0);
    CHECK(config.element_gain_linear() == doctest::Approx(1000.0));
    const NoiseVariances noise = config.noise();
    CHECK(noise.signal_variance == 1000.0);
    CHECK(noise.detector_noise == 0.01);
    // V_0 = 2 nbar + 1 at 15 THz and 296 K, frozen from a 40-digit evaluation
    CHECK(noise.vacuum_variance == doctest::Approx(1.1926377950079591).epsilon(1e-12));
    CHECK(NoiseVariances::thermal_occupation(15e12, 296.0) ==
          doctest::Approx(0.09631889750397954).epsilon(1e-12));
}

TEST_CASE("config rejections carry the offending field path") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"system": {"n_tx": 0}})"),
                         doctest::Contains("system.n_tx"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"system": {"typo_field": 3}})"),
                         doctest::Contains("system.typo_field"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": {"variable": "bogus"}})"),
                         doctest::Contains("sweep.variable"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"scenarios": ["d", "x"]})"),
                         doctest::Contains("scenario"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": {"values": [3, 2]}})"),
                         doctest::Contains("ascending"), config_error);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"sweep": {"variable": "ris_elements", "values": [8]}})"),
        doctest::Contains("perfect squares"), config_error);
    CHECK_THROWS_AS(parse_config("not json"), config_error);
}

TEST_CASE("resolved config JSON carries the derived vacuum variance") {
    const ExperimentConfig config = parse_config("{}");
    const nlohmann::json doc = nlohmann::json::parse(resolved_config_json(config));
    CHECK(doc["noise"]["vacuum_variance"].get<double>() ==
          doctest::Approx(1.1926377950079591).epsilon(1e-12));
    CHECK(doc["noise"]["alice_variance"].get<double>() ==
          doctest::Approx(1001.1926377950079591).epsilon(1e-12));
    CHECK(doc["system"]["element_gain_linear"].get<double>() == doctest::Approx(1000.0));
}

TEST_CASE("sweep emits one row per grid value and scenario in order") {
    const ExperimentConfig config = small_config();
    const auto rows = run_sweep(config);
    REQUIRE(rows.size() == 10);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].sweep_value == config.sweep_values[i / 2]);
        CHECK(rows[i].scenario == config.scenarios[i % 2]);
        CHECK_FALSE(rows[i].failed);
        CHECK(rows[i].skr_clamped == std::max(0.0, rows[i].skr_raw));
    }
}

TEST_CASE("sweeps are deterministic and job-count independent") {
    const ExperimentConfig config = small_config();
    const auto first = run_sweep(config, 1);
    const auto second = run_sweep(config, 4);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].skr_raw == second[i].skr_raw);
        CHECK(first[i].mutual_information_bits == second[i].mutual_information_bits);
        CHECK(first[i].holevo_bits == second[i].holevo_bits);
    }
    const std::string csv_a = rows_to_csv(first);
    const std::string csv_b = rows_to_csv(second);
    // byte-identical except the wall-time column
    const auto lines_a = split(csv_a, '\n');
    const auto lines_b = split(csv_b, '\n');
    REQUIRE(lines_a.size() == lines_b.size());
    for (size_t i = 0; i < lines_a.size(); ++i) {
        auto fields_a = split(lines_a[i], ',');
        auto fields_b = split(lines_b[i], ',');
        REQUIRE(fields_a.size() == fields_b.size());
        for (size_t f = 0; f + 1 < fields_a.size(); ++f) CHECK(fields_a[f] == fields_b[f]);
    }
}

TEST_CASE("empty row lists produce a header-only CSV") {
    const std::string csv = rows_to_csv({});
    CHECK(csv ==
          "sweep_var,sweep_value,scenario,phase_source,mi_bits,holevo_bits,skr_raw,skr_clamped,"
          "wall_ms\n");
}

TEST_CASE("CSV round-trips row values at full precision") {
    SweepRow row;
    row.sweep_variable = "distance_m";
    row.sweep_value = 12.5;
    row.scenario = Scenario::alice_ris;
    row.phase_source = PhaseSource::optimized;
    row.mutual_information_bits = 0.12345678901234567;
    row.holevo_bits = 3.0000000001e-9;
    row.skr_raw = row.mutual_information_bits - row.holevo_bits;
    row.skr_clamped = row.skr_raw;
    row.wall_ms = 1.25;

    const std::string csv = rows_to_csv({row});
    const auto lines = split(csv, '\n');
    REQUIRE(lines.size() == 2);
    const auto fields = split(lines[1], ',');
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "distance_m");
    CHECK(fields[2] == "t");
    CHECK(fields[3] == "optimized");
    CHECK(std::stod(fields[4]) == row.mutual_information_bits);
    CHECK(std::stod(fields[5]) == row.holevo_bits);
    CHECK(std::stod(fields[6]) == row.skr_raw);
}

TEST_CASE("JSON emission mirrors rows and embeds the resolved config") {
    const ExperimentConfig config = small_config();
    std::vector<SweepRow> rows = run_sweep(config);
    const nlohmann::json doc = nlohmann::json::parse(rows_to_json(rows, config));
    REQUIRE(doc["rows"].size() == rows.size());
    CHECK(doc["rows"][0]["skr_raw"].get<double>() == rows[0].skr_raw);
    CHECK(doc["config"]["noise"]["vacuum_variance"].get<double>() ==
          doctest::Approx(1.1926377950079591).epsilon(1e-12));
}

TEST_CASE("secure distance is zero when the threshold is unreachable") {
    ExperimentConfig config = small_config();
    config.bracket_min_m = 5.0;
    config.bracket_max_m = 60.0;
    CHECK(max_secure_distance(config, Scenario::direct, 100.0) == 0.0);
}

TEST_CASE("secure distance agrees with a fine grid scan") {
    ExperimentConfig config = small_config();
    config.bracket_min_m = 2.0;
    config.bracket_max_m = 80.0;
    config.phase_source = PhaseSource::zero;
    const NoiseVariances noise = config.noise();

    auto skr_at = [&](double d) {
        const LinkRealization link = build_link(config, d);
        return evaluate_scenario(Scenario::direct, link.channels, link.dilations,
                                 RisPhaseConfig::zeros(
                                     static_cast<int>(link.channels.tx_ris.rows())),
                                 SplitterSettings{config.eta_a, config.eta_b}, noise)
            .skr_bits;
    };

    // a threshold that crosses inside the bracket
    const double threshold = skr_at(40.0);
    const double distance = max_secure_distance(config, Scenario::direct, threshold);

    // fine grid oracle: largest grid point with SKR >= threshold
    double oracle = 0.0;
    for (double d = config.bracket_min_m; d <= config.bracket_max_m; d += 0.05)
        if (skr_at(d) >= threshold) oracle = d;
    CHECK(std::abs(distance - oracle) <= 0.2);
}

TEST_CASE("non-bracketing secure-distance requests are diagnosed") {
    ExperimentConfig config = small_config();
    config.bracket_min_m = 1.0;
    config.bracket_max_m = 2.0;
    CHECK_THROWS_AS(max_secure_distance(config, Scenario::direct, 1e-300), contract_error);
}
