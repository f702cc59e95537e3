// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/thz_channel.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <string>

#include "skrsim/error.hpp"

namespace skrsim {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void check_ula(const UlaGeometry& geometry) {
    if (geometry.element_count < 1)
        throw invalid_geometry_error("ula_response: element_count must be >= 1, got " +
                                     std::to_string(geometry.element_count));
    if (geometry.element_spacing_m <= 0.0)
        throw invalid_geometry_error("ula_response: element_spacing_m must be > 0");
    if (geometry.carrier_frequency_hz <= 0.0)
        throw invalid_geometry_error("ula_response: carrier_frequency_hz must be > 0");
}

void check_ris(const RisGeometry& geometry) {
    if (geometry.elements_x < 1 || geometry.elements_y < 1)
        throw invalid_geometry_error("ris_response: element grid must be >= 1 per axis");
    if (geometry.spacing_x_m <= 0.0 || geometry.spacing_y_m <= 0.0)
        throw invalid_geometry_error("ris_response: element spacings must be > 0");
}

Eigen::VectorXcd endpoint_response(const ArrayDescriptor& endpoint, double angle_rad,
                                   double wavelength_m) {
    if (std::holds_alternative<UlaGeometry>(endpoint))
        return ula_response(std::get<UlaGeometry>(endpoint), angle_rad);
    return ris_response(std::get<RisGeometry>(endpoint), angle_rad, wavelength_m);
}

}  // namespace

RisPhaseConfig RisPhaseConfig::zeros(int element_count) {
    return {Eigen::VectorXd::Zero(element_count)};
}

Eigen::VectorXcd RisPhaseConfig::unit_modulus() const {
    Eigen::VectorXcd diag(phases.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) diag[k] = std::exp(kImag * phases[k]);
    return diag;
}

Eigen::VectorXcd ula_response(const UlaGeometry& geometry, double angle_rad) {
    check_ula(geometry);
    const int n = geometry.element_count;
    const double slope =
        2.0 * constants::pi / geometry.wavelength_m() * geometry.element_spacing_m *
        std::sin(angle_rad);
    Eigen::VectorXcd response(n);
    for (int m = 0; m < n; ++m) response[m] = std::exp(kImag * (slope * m));
    return response / std::sqrt(static_cast<double>(n));
}

Eigen::VectorXcd ris_response(const RisGeometry& geometry, double azimuthal_angle_rad,
                              double wavelength_m) {
    check_ris(geometry);
    const double sin_theta = std::sin(azimuthal_angle_rad);
    const double slope_x = 2.0 * constants::pi / wavelength_m * geometry.spacing_x_m *
                           std::cos(geometry.elevation_rad) * sin_theta;
    const double slope_y = 2.0 * constants::pi / wavelength_m * geometry.spacing_y_m *
                           std::sin(geometry.elevation_rad) * sin_theta;
    const int k = geometry.element_count();
    Eigen::VectorXcd response(k);
    int idx = 0;
    for (int kx = 0; kx < geometry.elements_x; ++kx)
        for (int ky = 0; ky < geometry.elements_y; ++ky)
            response[idx++] = std::exp(kImag * (slope_x * kx + slope_y * ky));
    return response / std::sqrt(static_cast<double>(k));
}

double path_gain(const PathComponent& path, const LinkBudget& budget, double wavelength_m) {
    if (path.path_length_m <= 0.0)
        throw invalid_geometry_error("path_gain: path_length_m must be > 0");
    const double free_space =
        std::pow(wavelength_m / (4.0 * constants::pi * path.path_length_m), 2.0);
    const double absorption =
        std::pow(10.0, -0.1 * budget.absorption_db_per_km * path.path_length_m / 1000.0);
    double gain = free_space * budget.tx_gain * budget.rx_gain * absorption;
    if (!path.is_los) gain *= path.roughness * path.fresnel_coeff;
    return gain;
}

ChannelMatrix build_segment(const std::vector<PathComponent>& paths, const ArrayDescriptor& tx,
                            const ArrayDescriptor& rx, const LinkBudget& budget,
                            double carrier_frequency_hz, SegmentTag tag) {
    if (paths.empty()) throw invalid_geometry_error("build_segment: at least one path required");
    if (carrier_frequency_hz <= 0.0)
        throw invalid_geometry_error("build_segment: carrier frequency must be > 0");
    const double wavelength = constants::speed_of_light / carrier_frequency_hz;

    ChannelMatrix channel;
    channel.tag = tag;
    for (const PathComponent& path : paths) {
        const Eigen::VectorXcd rx_vec = endpoint_response(rx, path.aoa_rad, wavelength);
        const Eigen::VectorXcd tx_vec = endpoint_response(tx, path.aod_rad, wavelength);
        const std::complex<double> rotation =
            std::exp(kImag * (2.0 * constants::pi * carrier_frequency_hz * path.delay_s));
        const double amplitude = std::sqrt(path_gain(path, budget, wavelength));
        if (channel.entries.size() == 0)
            channel.entries = Eigen::MatrixXcd::Zero(rx_vec.size(), tx_vec.size());
        else if (channel.entries.rows() != rx_vec.size() || channel.entries.cols() != tx_vec.size())
            throw invalid_geometry_error("build_segment: inconsistent endpoint dimensions");
        channel.entries.noalias() += amplitude * rotation * rx_vec * tx_vec.adjoint();
    }

    const double sigma_max = spectral_norm(channel);
    if (sigma_max > 1.0 + 1e-12)
        throw passivity_error("build_segment: largest singular value " +
                              std::to_string(sigma_max) +
                              " exceeds 1; segment is not a lossy channel");
    return channel;
}

ChannelMatrix compose_effective(const ChannelMatrix& direct, const ChannelMatrix& tx_ris,
                                const ChannelMatrix& ris_rx, const RisPhaseConfig& phases) {
    if (ris_rx.cols() != tx_ris.rows() || phases.phases.size() != tx_ris.rows())
        throw invalid_geometry_error("compose_effective: RIS dimension chain mismatch");
    if (direct.rows() != ris_rx.rows() || direct.cols() != tx_ris.cols())
        throw invalid_geometry_error("compose_effective: direct/RIS path dimension mismatch");
    ChannelMatrix composite;
    composite.tag = SegmentTag::composite;
    composite.entries = direct.entries +
                        ris_rx.entries * phases.unit_modulus().asDiagonal() * tx_ris.entries;
    return composite;
}

double spectral_norm(const ChannelMatrix& channel) {
    if (channel.entries.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channel.entries);
    return svd.singularValues()[0];
}

}  // namespace skrsim
