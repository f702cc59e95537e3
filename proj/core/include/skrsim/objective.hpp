// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#ifndef SKRSIM_OBJECTIVE_HPP
#define SKRSIM_OBJECTIVE_HPP

#include "skrsim/pso.hpp"
#include "skrsim/protocol.hpp"
#include "skrsim/skr_localized.hpp"

namespace skrsim {

// SKR of the chosen scenario as a function of the stacked decision vector
// (phi_1..phi_K, eta_a, eta_b). The segment dilations are computed once and
// shared by every evaluation; only the composite SVD depends on the position.
// Evaluation failure inside the bounds maps to -infinity fitness.
Objective skr_objective(Scenario scenario, const LinkChannels& channels,
                        const LinkDilations& dilations, const NoiseVariances& noise);

// Decode helper shared with the CLI: splits a position into phases and
// splitter settings.
std::pair<RisPhaseConfig, SplitterSettings> decode_position(const Eigen::VectorXd& position);

// Evaluate one scenario at an explicit operating point.
SkrBreakdown evaluate_scenario(Scenario scenario, const LinkChannels& channels,
                               const LinkDilations& dilations, const RisPhaseConfig& phases,
                               const SplitterSettings& splitters, const NoiseVariances& noise);

}  // namespace skrsim

#endif  // SKRSIM_OBJECTIVE_HPP
