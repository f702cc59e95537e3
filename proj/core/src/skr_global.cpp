// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/skr_global.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "skrsim/error.hpp"

namespace skrsim {

namespace {

constexpr double kBetaFloor = 1e-14;

double clamp_unit(double x) { return std::min(1.0, std::max(0.0, x)); }

// Two-mode symplectic eigenvalues from the invariant Delta = detA + detB + 2 detC
// and the state determinant.
std::pair<double, double> two_mode_spectrum(double delta, double det, const char* who) {
    const double disc = delta * delta - 4.0 * det;
    if (disc < -1e-9)
        throw unphysical_state_error(std::string(who) + ": negative discriminant " +
                                     std::to_string(disc));
    const double root = std::sqrt(std::max(0.0, disc));
    const double hi = std::sqrt(std::max(0.0, 0.5 * (delta + root)));
    const double lo = std::sqrt(std::max(0.0, 0.5 * (delta - root)));
    return {hi, lo};
}

}  // namespace

std::vector<ParallelChannel> parallelize(const ChannelMatrix& channel) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channel.entries);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() > 0 && sv[0] > 1.0 + 1e-12)
        throw passivity_error("parallelize: singular value " + std::to_string(sv[0]) +
                              " exceeds 1");
    std::vector<ParallelChannel> channels;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double beta = clamp_unit(sv[i] * sv[i]);
        if (beta < kBetaFloor) continue;
        channels.push_back({static_cast<int>(channels.size()), beta});
    }
    return channels;
}

double mutual_information_i(double beta, const NoiseVariances& noise) {
    if (beta < 0.0 || beta > 1.0 + 1e-12)
        throw contract_error("mutual_information_i: beta outside [0,1]");
    beta = clamp_unit(beta);
    const double denom = beta * noise.vacuum_variance + (1.0 - beta) * noise.eve_variance_global +
                         noise.detector_noise;
    return 0.5 * std::log2(1.0 + beta * noise.signal_variance / denom);
}

EveTwoModeDiagnostics eve_two_mode(double beta, const NoiseVariances& noise) {
    beta = clamp_unit(beta);
    const double va = noise.alice_variance();
    const double ve = noise.eve_variance_global;
    const double s2 = noise.detector_noise;

    EveTwoModeDiagnostics diag;
    diag.v_eo = (1.0 - beta) * va + beta * ve;
    diag.cross = std::sqrt(std::max(0.0, beta * (ve * ve - 1.0)));
    diag.delta = diag.v_eo * diag.v_eo + ve * ve - 2.0 * beta * (ve * ve - 1.0);
    const double de = diag.v_eo * ve - beta * (ve * ve - 1.0);
    diag.det_e = de * de;
    diag.bob_variance = beta * va + (1.0 - beta) * ve + s2;

    // conditional blocks after x-homodyne at Bob
    const double a_x = (va * ve + s2 * diag.v_eo) / diag.bob_variance;
    const double a_p = diag.v_eo;
    const double b_x = (1.0 - beta + (beta * va + s2) * ve) / diag.bob_variance;
    const double b_p = ve;
    const double c_x = (va + s2) * diag.cross / diag.bob_variance;
    const double c_p = -diag.cross;

    diag.delta_cond = a_x * a_p + b_x * b_p + 2.0 * c_x * c_p;
    diag.det_cond = (a_x * b_x - c_x * c_x) * (a_p * b_p - c_p * c_p);

    diag.lambda_aux = (1.0 - beta) * va * ve + beta;
    const double lambda_swap = (1.0 - beta) + beta * va * ve;
    diag.xi_aux = lambda_swap * diag.v_eo + va * ve * ve - 2.0 * va * diag.cross * diag.cross;
    return diag;
}

std::pair<double, double> eve_spectrum_unconditional(double beta, const NoiseVariances& noise) {
    if (noise.eve_variance_global < 1.0 - 1e-9)
        throw contract_error("eve_spectrum_unconditional: V_e below 1");
    const EveTwoModeDiagnostics diag = eve_two_mode(beta, noise);
    return two_mode_spectrum(diag.delta, diag.det_e, "eve_spectrum_unconditional");
}

std::pair<double, double> eve_spectrum_conditional(double beta, const NoiseVariances& noise) {
    const EveTwoModeDiagnostics diag = eve_two_mode(beta, noise);
    return two_mode_spectrum(diag.delta_cond, diag.det_cond, "eve_spectrum_conditional");
}

QuadratureCovariance assemble_eve_state(double beta, const NoiseVariances& noise) {
    const EveTwoModeDiagnostics diag = eve_two_mode(beta, noise);
    QuadratureCovariance state;
    state.mat = Eigen::MatrixXd::Zero(4, 4);
    state.mat.topLeftCorner(2, 2) = diag.v_eo * Eigen::Matrix2d::Identity();
    state.mat.bottomRightCorner(2, 2) = noise.eve_variance_global * Eigen::Matrix2d::Identity();
    Eigen::Matrix2d z;
    z << 1.0, 0.0, 0.0, -1.0;
    state.mat.topRightCorner(2, 2) = diag.cross * z;
    state.mat.bottomLeftCorner(2, 2) = diag.cross * z;
    return state;
}

QuadratureCovariance assemble_eve_bob_joint(double beta, const NoiseVariances& noise) {
    beta = clamp_unit(beta);
    const EveTwoModeDiagnostics diag = eve_two_mode(beta, noise);
    const double va = noise.alice_variance();
    const double ve = noise.eve_variance_global;

    Eigen::Matrix2d z;
    z << 1.0, 0.0, 0.0, -1.0;
    QuadratureCovariance joint;
    joint.mat = Eigen::MatrixXd::Zero(6, 6);
    joint.mat.block<4, 4>(0, 0) = assemble_eve_state(beta, noise).mat;
    joint.mat.block<2, 2>(4, 4) = diag.bob_variance * Eigen::Matrix2d::Identity();
    // e_out with b: both see the signal (-sqrt(1-beta), +sqrt(beta)) and the
    // TMSV input (+sqrt(beta), +sqrt(1-beta))
    const double eo_b = std::sqrt(beta * (1.0 - beta)) * (ve - va);
    joint.mat.block<2, 2>(0, 4) = eo_b * Eigen::Matrix2d::Identity();
    joint.mat.block<2, 2>(4, 0) = eo_b * Eigen::Matrix2d::Identity();
    // idler with b through the injected mode
    const double eq_b = std::sqrt(std::max(0.0, (1.0 - beta) * (ve * ve - 1.0)));
    joint.mat.block<2, 2>(2, 4) = eq_b * z;
    joint.mat.block<2, 2>(4, 2) = eq_b * z;
    return joint;
}

GlobalSkrDetail skr_global(const ChannelMatrix& channel, const NoiseVariances& noise) {
    GlobalSkrDetail detail;
    detail.total.scenario = Scenario::global;
    for (const ParallelChannel& sub : parallelize(channel)) {
        SubchannelSkr entry;
        entry.channel = sub;
        entry.mutual_information_bits = mutual_information_i(sub.transmissivity, noise);
        const auto [l1, l2] = eve_spectrum_unconditional(sub.transmissivity, noise);
        const auto [l3, l4] = eve_spectrum_conditional(sub.transmissivity, noise);
        double chi = ho_entropy(l1) + ho_entropy(l2) - ho_entropy(l3) - ho_entropy(l4);
        if (chi < 0.0 && chi > -1e-9) chi = 0.0;
        entry.holevo_bits = chi;
        entry.skr_bits = entry.mutual_information_bits - entry.holevo_bits;
        detail.total.mutual_information_bits += entry.mutual_information_bits;
        detail.total.holevo_bits += entry.holevo_bits;
        detail.total.skr_bits += entry.skr_bits;
        detail.per_channel.push_back(entry);
    }
    return detail;
}

}  // namespace skrsim
