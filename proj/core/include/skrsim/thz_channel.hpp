// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Deterministic multipath THz channel synthesis: steering vectors for the
// transceiver ULAs and the planar RIS, per-path link-budget gains, segment
// matrices, and the phase-configured composite channel.

#ifndef SKRSIM_THZ_CHANNEL_HPP
#define SKRSIM_THZ_CHANNEL_HPP

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "skrsim/constants.hpp"

namespace skrsim {

// Uniform linear array at Alice or Bob.
struct UlaGeometry {
    int element_count = 1;           // N
    double element_spacing_m = 0.0;  // d_a
    double carrier_frequency_hz = 0.0;

    double wavelength_m() const { return constants::speed_of_light / carrier_frequency_hz; }
};

// Planar RIS, elements on a K_X x K_Y grid.
struct RisGeometry {
    int elements_x = 1;  // K_X
    int elements_y = 1;  // K_Y
    double spacing_x_m = 0.0;
    double spacing_y_m = 0.0;
    double elevation_rad = 0.0;  // fixed elevation of the surface normal plane

    int element_count() const { return elements_x * elements_y; }
};

// One propagation path of a segment. The LoS component has path_index 1 and
// ignores the reflection factors.
struct PathComponent {
    int path_index = 1;
    double delay_s = 0.0;
    double aod_rad = 0.0;  // departure angle at the segment input array
    double aoa_rad = 0.0;  // arrival angle at the segment output array
    double path_length_m = 0.0;
    double fresnel_coeff = 1.0;  // xi, in [0,1]
    double roughness = 1.0;      // sigma (Rayleigh roughness), in [0,1]
    bool is_los = true;
};

// Endpoint gains and the atmospheric absorption figure for one segment.
// Conventions: tx/rx gains are linear; a ULA endpoint carries N*G_a, an RIS
// endpoint carries K.
struct LinkBudget {
    double absorption_db_per_km = 0.0;  // rho
    double element_gain = 1.0;          // G_a, linear
    double tx_gain = 1.0;               // G_Tx
    double rx_gain = 1.0;               // G_Rx
};

enum class SegmentTag { direct, alice_ris, ris_bob, composite };

// Complex gain matrix of one propagation segment (or the composite link);
// rows index receive modes, columns transmit modes.
struct ChannelMatrix {
    Eigen::MatrixXcd entries;
    SegmentTag tag = SegmentTag::composite;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

// Phase shift per RIS element, each in [-pi, pi].
struct RisPhaseConfig {
    Eigen::VectorXd phases;

    static RisPhaseConfig zeros(int element_count);
    // diag(exp(j phi_1), ..., exp(j phi_K))
    Eigen::VectorXcd unit_modulus() const;
};

using ArrayDescriptor = std::variant<UlaGeometry, RisGeometry>;

// Unit-norm ULA steering vector; element m carries phase
// (2 pi / lambda) * d_a * m * sin(angle), m = 0..N-1.
Eigen::VectorXcd ula_response(const UlaGeometry& geometry, double angle_rad);

// Unit-norm RIS steering vector over the (k_x, k_y) grid, k_x-major ordering;
// per-axis phase slopes are d_X cos(phi) sin(theta) and d_Y sin(phi) sin(theta).
Eigen::VectorXcd ris_response(const RisGeometry& geometry, double azimuthal_angle_rad,
                              double wavelength_m);

// Free-space path gain with atmospheric absorption (absorption exponent takes
// the path length in kilometers); NLoS paths are further scaled by the
// roughness and Fresnel factors.
double path_gain(const PathComponent& path, const LinkBudget& budget, double wavelength_m);

// Sum over paths of sqrt(gain) * exp(j 2 pi f_c tau) * rx_response * tx_response^H.
// Throws passivity_error if the synthesized matrix has a singular value > 1.
ChannelMatrix build_segment(const std::vector<PathComponent>& paths, const ArrayDescriptor& tx,
                            const ArrayDescriptor& rx, const LinkBudget& budget,
                            double carrier_frequency_hz, SegmentTag tag);

// H_d + H_r diag(exp(j phi)) H_t.
ChannelMatrix compose_effective(const ChannelMatrix& direct, const ChannelMatrix& tx_ris,
                                const ChannelMatrix& ris_rx, const RisPhaseConfig& phases);

// Largest singular value of a channel matrix.
double spectral_norm(const ChannelMatrix& channel);

}  // namespace skrsim

#endif  // SKRSIM_THZ_CHANNEL_HPP
