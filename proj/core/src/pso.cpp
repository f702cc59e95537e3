// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "skrsim/constants.hpp"
#include "skrsim/error.hpp"

namespace skrsim {

namespace {

double safe_eval(const Objective& objective, const Eigen::VectorXd& position) {
    try {
        const double value = objective(position);
        return std::isnan(value) ? -std::numeric_limits<double>::infinity() : value;
    } catch (...) {
        return -std::numeric_limits<double>::infinity();
    }
}

}  // namespace

SearchSpace SearchSpace::ris_link(int ris_elements) {
    SearchSpace space;
    space.lower.resize(ris_elements + 2);
    space.upper.resize(ris_elements + 2);
    space.lower.head(ris_elements).setConstant(-constants::pi);
    space.upper.head(ris_elements).setConstant(constants::pi);
    space.lower.tail(2).setConstant(0.0);
    space.upper.tail(2).setConstant(1.0);
    return space;
}

OptimizationResult optimize(const Objective& objective, const SearchSpace& space,
                            const SwarmConfig& config) {
    const int dim = space.dimension();
    if (dim < 1 || space.upper.size() != dim)
        throw contract_error("optimize: empty or mismatched search space");
    if ((space.upper - space.lower).minCoeff() <= 0.0)
        throw contract_error("optimize: lower bounds must be strictly below upper bounds");
    if (config.particle_count < 1 || config.iteration_count < 1)
        throw contract_error("optimize: particle and iteration counts must be >= 1");
    if (config.velocity_clamp <= 0.0 || config.velocity_clamp > 1.0)
        throw contract_error("optimize: velocity_clamp must be in (0, 1]");
    if (config.inertia < 0.0 || config.cognitive_weight < 0.0 || config.social_weight < 0.0)
        throw contract_error("optimize: weights must be non-negative");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::VectorXd range = space.upper - space.lower;
    const Eigen::VectorXd vmax = config.velocity_clamp * range;

    const int n = config.particle_count;
    std::vector<Eigen::VectorXd> position(n), velocity(n), best_position(n);
    std::vector<double> best_value(n, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        position[i].resize(dim);
        velocity[i].resize(dim);
        for (int d = 0; d < dim; ++d) {
            position[i][d] = space.lower[d] + unit(rng) * range[d];
            velocity[i][d] = (2.0 * unit(rng) - 1.0) * vmax[d];
        }
        best_position[i] = position[i];
    }

    OptimizationResult result;
    result.best_value = -std::numeric_limits<double>::infinity();
    result.history.reserve(config.iteration_count);

    for (int it = 0; it < config.iteration_count; ++it) {
        for (int i = 0; i < n; ++i) {
            const double value = safe_eval(objective, position[i]);
            ++result.evaluations;
            if (value > best_value[i]) {
                best_value[i] = value;
                best_position[i] = position[i];
            }
            if (value > result.best_value) {  // strict: first-found wins ties
                result.best_value = value;
                result.best_position = position[i];
            }
        }
        result.history.push_back(result.best_value);
        if (result.best_position.size() == 0) result.best_position = position[0];

        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < dim; ++d) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                double v = config.inertia * velocity[i][d] +
                           config.cognitive_weight * r1 * (best_position[i][d] - position[i][d]) +
                           config.social_weight * r2 * (result.best_position[d] - position[i][d]);
                v = std::clamp(v, -vmax[d], vmax[d]);
                double x = position[i][d] + v;
                if (x < space.lower[d]) {
                    x = space.lower[d];
                    v = 0.0;
                } else if (x > space.upper[d]) {
                    x = space.upper[d];
                    v = 0.0;
                }
                velocity[i][d] = v;
                position[i][d] = x;
            }
        }
    }
    return result;
}

}  // namespace skrsim
