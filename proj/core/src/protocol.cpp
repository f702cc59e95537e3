// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/protocol.hpp"

#include <cmath>

#include "skrsim/constants.hpp"
#include "skrsim/error.hpp"

namespace skrsim {

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::direct: return "d";
        case Scenario::alice_ris: return "t";
        case Scenario::ris_bob: return "r";
        case Scenario::global: return "global";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "d") return Scenario::direct;
    if (name == "t") return Scenario::alice_ris;
    if (name == "r") return Scenario::ris_bob;
    if (name == "global") return Scenario::global;
    throw config_error("unknown scenario '" + name + "' (expected d, t, r, or global)");
}

double NoiseVariances::eve_variance(Segment segment) const {
    switch (segment) {
        case Segment::direct: return eve_variance_direct;
        case Segment::alice_ris: return eve_variance_alice_ris;
        case Segment::ris_bob: return eve_variance_ris_bob;
    }
    return 1.0;
}

double NoiseVariances::thermal_occupation(double carrier_frequency_hz, double temperature_k) {
    const double ratio = constants::planck * carrier_frequency_hz /
                         (constants::boltzmann * temperature_k);
    return 1.0 / std::expm1(ratio);
}

NoiseVariances NoiseVariances::standard(double signal_variance, double detector_noise,
                                        double carrier_frequency_hz, double temperature_k) {
    NoiseVariances noise;
    noise.signal_variance = signal_variance;
    noise.detector_noise = detector_noise;
    noise.temperature_k = temperature_k;
    noise.vacuum_variance = 2.0 * thermal_occupation(carrier_frequency_hz, temperature_k) + 1.0;
    return noise;
}

}  // namespace skrsim
