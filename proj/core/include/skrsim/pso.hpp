// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Seeded, box-constrained particle swarm maximizer with clip-and-zero bound
// handling and a monotone global-best history.

#ifndef SKRSIM_PSO_HPP
#define SKRSIM_PSO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace skrsim {

struct SwarmConfig {
    int particle_count = 40;
    int iteration_count = 150;
    double inertia = 0.72;
    double cognitive_weight = 1.49;
    double social_weight = 1.49;
    double velocity_clamp = 0.5;  // fraction of the per-coordinate range
    std::uint64_t seed = 0;
};

struct SearchSpace {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dimension() const { return static_cast<int>(lower.size()); }
    // K phases in [-pi, pi] followed by eta_a, eta_b in [0, 1].
    static SearchSpace ris_link(int ris_elements);
};

struct OptimizationResult {
    Eigen::VectorXd best_position;
    double best_value = 0.0;
    std::vector<double> history;  // global best after each iteration, non-decreasing
    long evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Maximize the objective over the box. An objective that throws marks the
// position as -inf fitness and the particle keeps moving. Deterministic for a
// fixed (seed, config, objective).
OptimizationResult optimize(const Objective& objective, const SearchSpace& space,
                            const SwarmConfig& config);

}  // namespace skrsim

#endif  // SKRSIM_PSO_HPP
