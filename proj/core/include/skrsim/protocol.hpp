// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Protocol-level scalar parameters shared by the localized and global SKR
// pipelines.

#ifndef SKRSIM_PROTOCOL_HPP
#define SKRSIM_PROTOCOL_HPP

#include <string>

namespace skrsim {

// Which propagation segment a localized eavesdropper taps.
enum class Segment { direct, alice_ris, ris_bob };

// Localized segments plus the channel-purification benchmark.
enum class Scenario { direct, alice_ris, ris_bob, global };

std::string to_string(Scenario scenario);  // "d", "t", "r", "global"
Scenario scenario_from_string(const std::string& name);
inline Scenario scenario_of(Segment segment) { return static_cast<Scenario>(segment); }

// Beam splitter transmissivities: BS_a splits Alice's signal between the
// direct and RIS routes, BS_b coherently recombines them at Bob.
struct SplitterSettings {
    double eta_a = 0.5;
    double eta_b = 0.5;
};

// Every scalar variance of the protocol, in vacuum-variance-1 units.
struct NoiseVariances {
    double signal_variance = 0.0;          // V_s
    double vacuum_variance = 1.0;          // V_0 = 2 nbar + 1
    double splitter_vacuum = 1.0;          // V_v0 at BS_a
    double eve_variance_direct = 1.0;      // V_e_d
    double eve_variance_alice_ris = 1.0;   // V_e_t
    double eve_variance_ris_bob = 1.0;     // V_e_r
    double eve_variance_global = 1.0;      // V_e
    double detector_noise = 0.0;           // sigma_b^2, trusted
    double temperature_k = 296.0;          // T_e

    double alice_variance() const { return signal_variance + vacuum_variance; }  // V_a
    double eve_variance(Segment segment) const;

    // Thermal occupation nbar = 1 / (exp(h f_c / (k_B T_e)) - 1).
    static double thermal_occupation(double carrier_frequency_hz, double temperature_k);
    // Populates vacuum_variance = 2 nbar + 1 from the carrier and temperature.
    static NoiseVariances standard(double signal_variance, double detector_noise,
                                   double carrier_frequency_hz, double temperature_k = 296.0);
};

// Mutual information, Holevo information, and their difference for one
// scenario at one operating point, all in bits per channel use.
struct SkrBreakdown {
    double mutual_information_bits = 0.0;
    double holevo_bits = 0.0;
    double skr_bits = 0.0;  // mutual_information_bits - holevo_bits, may be negative
    Scenario scenario = Scenario::direct;
};

}  // namespace skrsim

#endif  // SKRSIM_PROTOCOL_HPP
