// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Localized-eavesdropping pipeline: Bob's output covariances behind the SVD
// combiner, Alice-Bob mutual information, the per-segment Eve system
// (environment output + retained TMSV idlers), homodyne conditioning on Bob,
// and the resulting secret key rate for a tap on any single segment.

#ifndef SKRSIM_SKR_LOCALIZED_HPP
#define SKRSIM_SKR_LOCALIZED_HPP

#include <utility>

#include "skrsim/gaussian.hpp"
#include "skrsim/protocol.hpp"
#include "skrsim/thz_channel.hpp"

namespace skrsim {

// The three segment matrices of one link geometry.
struct LinkChannels {
    ChannelMatrix direct;   // N_R x N_T
    ChannelMatrix tx_ris;   // K x N_T
    ChannelMatrix ris_rx;   // N_R x K
};

// Phase-independent beam-splitter dilations of the three segments.
struct LinkDilations {
    ChannelDilation direct;
    ChannelDilation tx_ris;
    ChannelDilation ris_rx;

    const ChannelDilation& of(Segment segment) const;
};

LinkDilations dilate_segments(const LinkChannels& channels);

// (Sigma_b, Sigma_b|a): Bob's unconditional and Alice-conditioned quadrature
// covariances, assembled behind the composite-SVD combiner with trusted
// detector noise added last. Sigma_b - Sigma_b|a is PSD by construction.
std::pair<QuadratureCovariance, QuadratureCovariance> bob_covariances(
    const LinkChannels& channels, const LinkDilations& dilations, const RisPhaseConfig& phases,
    const SplitterSettings& splitters, const NoiseVariances& noise);

// Homodyne mutual information (1/2) log2 of the complex-covariance determinant
// ratio, evaluated as a quarter of the quadrature log-det ratio; inputs are
// truncated to the leading min(N_T, N_R, K) composite singular directions.
double mutual_information_ab(const QuadratureCovariance& sigma_b,
                             const QuadratureCovariance& sigma_b_given_a,
                             int mode_limit = 0);

// Eve's joint covariance over (e_out_j, e_qm_j) for a tap on the given segment.
QuadratureCovariance eve_output_covariance(Segment scenario, const LinkChannels& channels,
                                           const LinkDilations& dilations,
                                           const RisPhaseConfig& phases,
                                           const SplitterSettings& splitters,
                                           const NoiseVariances& noise);

// Cross-covariance block between Eve's modes (e_out_j stacked over e_qm_j) and
// Bob's combined output modes, in quadrature form.
Eigen::MatrixXd eve_bob_cross(Segment scenario, const LinkChannels& channels,
                              const LinkDilations& dilations, const RisPhaseConfig& phases,
                              const SplitterSettings& splitters, const NoiseVariances& noise);

// chi_j = S(E_j) - S(E_j | B), conditioning on x-homodyne of all Bob modes;
// values within tolerance below zero clamp to zero.
double holevo_localized(Segment scenario, const LinkChannels& channels,
                        const LinkDilations& dilations, const RisPhaseConfig& phases,
                        const SplitterSettings& splitters, const NoiseVariances& noise);

// SKR_j = I(A;B) - chi_j; the raw (possibly negative) value is kept.
SkrBreakdown skr_localized(Segment scenario, const LinkChannels& channels,
                           const LinkDilations& dilations, const RisPhaseConfig& phases,
                           const SplitterSettings& splitters, const NoiseVariances& noise);

// Every covariance the pipeline produced, for physicality audits.
struct LocalizedDetail {
    SkrBreakdown breakdown;
    QuadratureCovariance sigma_b;
    QuadratureCovariance sigma_b_given_a;
    QuadratureCovariance sigma_eve;
    QuadratureCovariance sigma_eve_given_b;
    QuadratureCovariance joint_eve_bob;
};

LocalizedDetail evaluate_localized(Segment scenario, const LinkChannels& channels,
                                   const LinkDilations& dilations, const RisPhaseConfig& phases,
                                   const SplitterSettings& splitters,
                                   const NoiseVariances& noise);

// sqrt(eta_a eta_b) H_d - sqrt((1-eta_a)(1-eta_b)) H_r Phi H_t: the signal
// route Alice's precoded modes actually traverse; also the matrix the global
// purification benchmark parallelizes.
ChannelMatrix effective_signal_channel(const LinkChannels& channels, const RisPhaseConfig& phases,
                                       const SplitterSettings& splitters);

}  // namespace skrsim

#endif  // SKRSIM_SKR_LOCALIZED_HPP
