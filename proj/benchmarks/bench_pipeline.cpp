// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Microbenchmarks for the hot paths of a sweep/optimization run: channel
// synthesis and composition, segment dilation, single localized and global
// SKR evaluations, and the generic Gaussian conditioning engine.

#include <benchmark/benchmark.h>

#include <random>

#include "skrsim/experiment.hpp"
#include "skrsim/objective.hpp"
#include "skrsim/skr_global.hpp"

namespace {

using namespace skrsim;

ExperimentConfig bench_config(int antennas) {
    ExperimentConfig config = parse_config("{}");
    config.n_tx = config.n_rx = antennas;
    config.seed = 99;
    return config;
}

RisPhaseConfig bench_phases(int ris_elements) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-constants::pi, constants::pi);
    RisPhaseConfig phases{Eigen::VectorXd(ris_elements)};
    for (int k = 0; k < ris_elements; ++k) phases.phases[k] = angle(rng);
    return phases;
}

void BM_BuildLink(benchmark::State& state) {
    const ExperimentConfig config = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_link(config, 20.0));
}
BENCHMARK(BM_BuildLink)->Arg(8)->Arg(16);

void BM_ComposeEffective(benchmark::State& state) {
    const ExperimentConfig config = bench_config(static_cast<int>(state.range(0)));
    const LinkRealization link = build_link(config, 20.0);
    const RisPhaseConfig phases = bench_phases(config.ris_elements());
    for (auto _ : state)
        benchmark::DoNotOptimize(
            compose_effective(link.channels.direct, link.channels.tx_ris, link.channels.ris_rx,
                              phases));
}
BENCHMARK(BM_ComposeEffective)->Arg(8)->Arg(16);

void BM_DilateSegments(benchmark::State& state) {
    const ExperimentConfig config = bench_config(static_cast<int>(state.range(0)));
    const LinkRealization link = build_link(config, 20.0);
    for (auto _ : state) benchmark::DoNotOptimize(dilate_segments(link.channels));
}
BENCHMARK(BM_DilateSegments)->Arg(8)->Arg(16);

void BM_LocalizedSkr(benchmark::State& state) {
    const ExperimentConfig config = bench_config(static_cast<int>(state.range(0)));
    const LinkRealization link = build_link(config, 20.0);
    const RisPhaseConfig phases = bench_phases(config.ris_elements());
    const SplitterSettings splitters{0.5, 0.5};
    const NoiseVariances noise = config.noise();
    const Segment scenario = static_cast<Segment>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            skr_localized(scenario, link.channels, link.dilations, phases, splitters, noise));
}
BENCHMARK(BM_LocalizedSkr)->Args({8, 0})->Args({8, 1})->Args({8, 2})->Args({16, 0});

void BM_GlobalSkr(benchmark::State& state) {
    const ExperimentConfig config = bench_config(static_cast<int>(state.range(0)));
    const LinkRealization link = build_link(config, 20.0);
    const RisPhaseConfig phases = bench_phases(config.ris_elements());
    const SplitterSettings splitters{0.5, 0.5};
    const NoiseVariances noise = config.noise();
    for (auto _ : state) {
        const ChannelMatrix effective =
            effective_signal_channel(link.channels, phases, splitters);
        benchmark::DoNotOptimize(skr_global(effective, noise));
    }
}
BENCHMARK(BM_GlobalSkr)->Arg(8)->Arg(16);

void BM_HomodyneCondition(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd seed(2 * modes, 2 * modes);
    for (int i = 0; i < 2 * modes; ++i)
        for (int j = 0; j < 2 * modes; ++j) seed(i, j) = gauss(rng);
    QuadratureCovariance joint{seed * seed.transpose() +
                               Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
    std::vector<int> kept, measured;
    for (int m = 0; m < modes; ++m) (m < modes / 2 ? kept : measured).push_back(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(homodyne_condition(joint, kept, measured));
}
BENCHMARK(BM_HomodyneCondition)->Arg(8)->Arg(24)->Arg(48);

void BM_SymplecticSpectrum(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd seed(2 * modes, 2 * modes);
    for (int i = 0; i < 2 * modes; ++i)
        for (int j = 0; j < 2 * modes; ++j) seed(i, j) = gauss(rng);
    QuadratureCovariance state_cov{seed * seed.transpose() +
                                   Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
    for (auto _ : state) benchmark::DoNotOptimize(symplectic_eigenvalues(state_cov));
}
BENCHMARK(BM_SymplecticSpectrum)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
