// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/objective.hpp"

#include "skrsim/error.hpp"
#include "skrsim/skr_global.hpp"

namespace skrsim {

std::pair<RisPhaseConfig, SplitterSettings> decode_position(const Eigen::VectorXd& position) {
    if (position.size() < 3)
        throw contract_error("decode_position: expected at least K=1 phases plus eta_a, eta_b");
    RisPhaseConfig phases{position.head(position.size() - 2)};
    SplitterSettings splitters{position[position.size() - 2], position[position.size() - 1]};
    return {phases, splitters};
}

SkrBreakdown evaluate_scenario(Scenario scenario, const LinkChannels& channels,
                               const LinkDilations& dilations, const RisPhaseConfig& phases,
                               const SplitterSettings& splitters, const NoiseVariances& noise) {
    if (scenario == Scenario::global) {
        const ChannelMatrix effective = effective_signal_channel(channels, phases, splitters);
        return skr_global(effective, noise).total;
    }
    return skr_localized(static_cast<Segment>(scenario), channels, dilations, phases, splitters,
                         noise);
}

Objective skr_objective(Scenario scenario, const LinkChannels& channels,
                        const LinkDilations& dilations, const NoiseVariances& noise) {
    // channels/dilations copied into the closure: one SVD per segment for the
    // whole optimization, only the composite decomposition tracks the phases.
    return [scenario, channels, dilations, noise](const Eigen::VectorXd& position) {
        const auto [phases, splitters] = decode_position(position);
        return evaluate_scenario(scenario, channels, dilations, phases, splitters, noise)
            .skr_bits;
    };
}

}  // namespace skrsim
