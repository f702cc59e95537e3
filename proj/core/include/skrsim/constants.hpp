// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#ifndef SKRSIM_CONSTANTS_HPP
#define SKRSIM_CONSTANTS_HPP

namespace skrsim::constants {

inline constexpr double speed_of_light = 299792458.0;  // m/s (exact)
inline constexpr double planck = 6.62607015e-34;       // J s (exact, SI 2019)
inline constexpr double boltzmann = 1.380649e-23;      // J/K (exact, SI 2019)
inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace skrsim::constants

#endif  // SKRSIM_CONSTANTS_HPP
