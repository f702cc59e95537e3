// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Global-purification benchmark: SVD parallelization into SISO subchannels,
// per-subchannel mutual information, closed-form two-mode symplectic spectra
// for Eve's (output, idler) pair before and after Bob's homodyne, and the
// aggregate secret key rate.

#ifndef SKRSIM_SKR_GLOBAL_HPP
#define SKRSIM_SKR_GLOBAL_HPP

#include <utility>
#include <vector>

#include "skrsim/gaussian.hpp"
#include "skrsim/protocol.hpp"
#include "skrsim/thz_channel.hpp"

namespace skrsim {

struct ParallelChannel {
    int index = 0;             // i, 0-based over retained subchannels
    double transmissivity = 0.0;  // beta_i in [0,1]
};

// Squared singular values of a passive channel, descending; entries below
// 1e-14 are dropped.
std::vector<ParallelChannel> parallelize(const ChannelMatrix& channel);

// (1/2) log2(1 + beta V_s / (beta V_0 + (1-beta) V_e + sigma_b^2)).
double mutual_information_i(double beta, const NoiseVariances& noise);

// Scalar diagnostics of Eve's two-mode state on one subchannel.
struct EveTwoModeDiagnostics {
    double v_eo = 0.0;          // (1-beta) V_a + beta V_e
    double cross = 0.0;         // sqrt(beta (V_e^2 - 1))
    double delta = 0.0;         // two-mode invariant of Sigma_E
    double det_e = 0.0;         // det Sigma_E
    double bob_variance = 0.0;  // beta V_a + (1-beta) V_e + sigma_b^2
    double delta_cond = 0.0;    // invariant of Sigma_E|B
    double det_cond = 0.0;      // det Sigma_E|B
    double lambda_aux = 0.0;    // (1-beta) V_a V_e + beta
    double xi_aux = 0.0;        // Xi term of the conditional determinant
};

EveTwoModeDiagnostics eve_two_mode(double beta, const NoiseVariances& noise);

// Symplectic eigenvalues (lambda_1, lambda_2) of Eve's unconditional state.
std::pair<double, double> eve_spectrum_unconditional(double beta, const NoiseVariances& noise);

// Symplectic eigenvalues (lambda_3, lambda_4) after x-homodyne at Bob.
std::pair<double, double> eve_spectrum_conditional(double beta, const NoiseVariances& noise);

// Generic-pipeline counterparts for cross-validation: the explicitly
// assembled covariances of (e_out, e_qm) and of the (e_out, e_qm, b) joint.
QuadratureCovariance assemble_eve_state(double beta, const NoiseVariances& noise);
QuadratureCovariance assemble_eve_bob_joint(double beta, const NoiseVariances& noise);

struct SubchannelSkr {
    ParallelChannel channel;
    double mutual_information_bits = 0.0;
    double holevo_bits = 0.0;
    double skr_bits = 0.0;
};

struct GlobalSkrDetail {
    std::vector<SubchannelSkr> per_channel;
    SkrBreakdown total;
};

// Sum over subchannels of I_i - chi_i.
GlobalSkrDetail skr_global(const ChannelMatrix& channel, const NoiseVariances& noise);

}  // namespace skrsim

#endif  // SKRSIM_SKR_GLOBAL_HPP
