// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Every covariance here is assembled from one linear input-output model of
// the link. Sources are the precoded signal, the BS_a vacuum, and the three
// segment environment inputs; each output system (Bob's combined modes,
// Eve's environment output) is a complex transfer matrix per source. Blocks
// then follow mechanically: Sigma_XY = sum_s v_s R_{X,s} R_{Y,s}^H, embedded
// into quadrature form, with the TMSV idler pattern on Eve's retained modes.
// The printed per-case formulas contain sign slips that are inconsistent
// with the beam-splitter convention fixed by the SISO relations; deriving
// everything from the single model keeps all states physical.

#include "skrsim/skr_localized.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <numeric>

#include "skrsim/error.hpp"

namespace skrsim {

namespace {

struct SystemRoutes {
    // transfer matrices into this system from each source
    Eigen::MatrixXcd signal;  // precoded Alice modes (variance V_a or V_0)
    Eigen::MatrixXcd vacuum;  // BS_a vacuum (variance V_v0)
    std::array<Eigen::MatrixXcd, 3> env;  // e_d, e_t, e_r environment inputs

    Eigen::Index modes() const { return signal.rows(); }
};

struct LinkContext {
    Eigen::MatrixXcd combiner_adj;  // U^H of the composite channel
    Eigen::MatrixXcd precoder;      // V of the composite channel
    SystemRoutes bob;
};

constexpr double kHolevoClampTol = 1e-9;

Eigen::MatrixXcd hermitian_accumulate(const SystemRoutes& routes, double signal_variance,
                                      const NoiseVariances& noise) {
    Eigen::MatrixXcd sum = signal_variance * (routes.signal * routes.signal.adjoint());
    sum.noalias() += noise.splitter_vacuum * (routes.vacuum * routes.vacuum.adjoint());
    for (int j = 0; j < 3; ++j) {
        if (routes.env[j].size() == 0) continue;
        sum.noalias() +=
            noise.eve_variance(static_cast<Segment>(j)) * (routes.env[j] * routes.env[j].adjoint());
    }
    return 0.5 * (sum + Eigen::MatrixXcd(sum.adjoint()));  // guard Hermitian roundoff
}

Eigen::MatrixXcd cross_accumulate(const SystemRoutes& a, const SystemRoutes& b,
                                  double signal_variance, const NoiseVariances& noise) {
    Eigen::MatrixXcd sum = signal_variance * (a.signal * b.signal.adjoint());
    sum.noalias() += noise.splitter_vacuum * (a.vacuum * b.vacuum.adjoint());
    for (int j = 0; j < 3; ++j) {
        if (a.env[j].size() == 0 || b.env[j].size() == 0) continue;
        sum.noalias() +=
            noise.eve_variance(static_cast<Segment>(j)) * (a.env[j] * b.env[j].adjoint());
    }
    return sum;
}

LinkContext make_context(const LinkChannels& channels, const LinkDilations& dilations,
                         const RisPhaseConfig& phases, const SplitterSettings& splitters) {
    const Eigen::MatrixXcd& hd = channels.direct.entries;
    const Eigen::MatrixXcd& ht = channels.tx_ris.entries;
    const Eigen::MatrixXcd& hr = channels.ris_rx.entries;
    if (hr.cols() != ht.rows() || hd.rows() != hr.rows() || hd.cols() != ht.cols())
        throw invalid_geometry_error("localized pipeline: segment dimension mismatch");
    if (phases.phases.size() != ht.rows())
        throw invalid_geometry_error("localized pipeline: phase count != RIS elements");

    const ChannelMatrix composite = compose_effective(channels.direct, channels.tx_ris,
                                                      channels.ris_rx, phases);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(composite.entries,
                                           Eigen::ComputeFullU | Eigen::ComputeFullV);

    LinkContext ctx;
    ctx.combiner_adj = svd.matrixU().adjoint();
    ctx.precoder = svd.matrixV();

    const double eta_a = splitters.eta_a;
    const double eta_b = splitters.eta_b;
    const Eigen::MatrixXcd ris_path = hr * phases.unit_modulus().asDiagonal() * ht;
    const Eigen::MatrixXcd hr_phi = hr * phases.unit_modulus().asDiagonal();

    ctx.bob.signal = ctx.combiner_adj *
                     (std::sqrt(eta_a * eta_b) * hd -
                      std::sqrt((1.0 - eta_a) * (1.0 - eta_b)) * ris_path) *
                     ctx.precoder;
    ctx.bob.vacuum = ctx.combiner_adj * (std::sqrt((1.0 - eta_a) * eta_b) * hd +
                                         std::sqrt(eta_a * (1.0 - eta_b)) * ris_path);
    ctx.bob.env[0] = std::sqrt(eta_b) * ctx.combiner_adj * dilations.direct.coupling();
    ctx.bob.env[1] =
        std::sqrt(1.0 - eta_b) * ctx.combiner_adj * hr_phi * dilations.tx_ris.coupling();
    ctx.bob.env[2] = std::sqrt(1.0 - eta_b) * ctx.combiner_adj * dilations.ris_rx.coupling();
    return ctx;
}

// Eve's environment-output routes for a tap on one segment, truncated to the
// leading p = min(in, out) singular directions of that segment.
SystemRoutes make_eve_routes(Segment scenario, const LinkChannels& channels,
                             const LinkDilations& dilations, const RisPhaseConfig& phases,
                             const SplitterSettings& splitters, const LinkContext& ctx) {
    const double eta_a = splitters.eta_a;
    const double root_keep = std::sqrt(eta_a);
    const double root_leak = std::sqrt(1.0 - eta_a);

    const ChannelDilation& dil = dilations.of(scenario);
    const Eigen::Index p = dil.min_dim();
    const Eigen::Index m = dil.rows();

    Eigen::VectorXd reflect(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double beta = dil.singular_values[i] * dil.singular_values[i];
        reflect[i] = std::sqrt(std::max(0.0, 1.0 - beta));
    }
    // leading p rows of V_j^H, scaled by the reflection amplitudes
    const Eigen::MatrixXcd reflect_in =
        reflect.asDiagonal() * Eigen::MatrixXcd(dil.right_unitary.adjoint().topRows(p));
    Eigen::MatrixXcd transmit_env = Eigen::MatrixXcd::Zero(p, m);
    for (Eigen::Index i = 0; i < p; ++i) transmit_env(i, i) = dil.singular_values[i];

    SystemRoutes eve;
    const Eigen::Index n_rx = channels.direct.rows();
    const Eigen::Index ris = channels.tx_ris.rows();
    eve.env[0] = Eigen::MatrixXcd::Zero(p, n_rx);
    eve.env[1] = Eigen::MatrixXcd::Zero(p, ris);
    eve.env[2] = Eigen::MatrixXcd::Zero(p, n_rx);

    switch (scenario) {
        case Segment::direct: {
            // input to the segment: a_d = sqrt(eta_a) V a + sqrt(1-eta_a) v_0
            eve.signal = -root_keep * reflect_in * ctx.precoder;
            eve.vacuum = -root_leak * reflect_in;
            eve.env[0] = transmit_env;
            break;
        }
        case Segment::alice_ris: {
            // input: a_r = -sqrt(1-eta_a) V a + sqrt(eta_a) v_0
            eve.signal = root_leak * reflect_in * ctx.precoder;
            eve.vacuum = -root_keep * reflect_in;
            eve.env[1] = transmit_env;
            break;
        }
        case Segment::ris_bob: {
            // input: Phi (H_t a_r + N_t e_t)
            const Eigen::MatrixXcd into_ris =
                reflect_in * phases.unit_modulus().asDiagonal() * channels.tx_ris.entries;
            eve.signal = root_leak * into_ris * ctx.precoder;
            eve.vacuum = -root_keep * into_ris;
            eve.env[1] = -reflect_in * phases.unit_modulus().asDiagonal() *
                         dilations.tx_ris.coupling();
            eve.env[2] = transmit_env;
            break;
        }
    }
    return eve;
}

Eigen::MatrixXd idler_cross(const Eigen::MatrixXcd& env_route, double eve_variance,
                            Eigen::Index idlers) {
    const double strength = std::sqrt(std::max(0.0, eve_variance * eve_variance - 1.0));
    return strength * embed_complex(env_route.leftCols(idlers)) *
           tmsv_phase_flip(static_cast<int>(idlers));
}

struct EveState {
    QuadratureCovariance sigma_eve;   // (e_out, e_qm)
    Eigen::MatrixXd cross_with_bob;   // rows: Eve quadratures, cols: Bob quadratures
    Eigen::Index out_modes = 0;
};

EveState assemble_eve(Segment scenario, const LinkChannels& channels,
                      const LinkDilations& dilations, const RisPhaseConfig& phases,
                      const SplitterSettings& splitters, const NoiseVariances& noise,
                      const LinkContext& ctx) {
    const SystemRoutes eve = make_eve_routes(scenario, channels, dilations, phases, splitters, ctx);
    const Eigen::Index p = eve.modes();
    const double v_eve = noise.eve_variance(scenario);
    const int env_index = static_cast<int>(scenario);

    const Eigen::MatrixXd sigma_out =
        embed_complex(hermitian_accumulate(eve, noise.alice_variance(), noise));
    const Eigen::MatrixXd sigma_oq = idler_cross(eve.env[env_index], v_eve, p);

    EveState state;
    state.out_modes = p;
    state.sigma_eve.mat = Eigen::MatrixXd::Zero(4 * p, 4 * p);
    state.sigma_eve.mat.topLeftCorner(2 * p, 2 * p) = sigma_out;
    state.sigma_eve.mat.topRightCorner(2 * p, 2 * p) = sigma_oq;
    state.sigma_eve.mat.bottomLeftCorner(2 * p, 2 * p) = sigma_oq.transpose();
    state.sigma_eve.mat.bottomRightCorner(2 * p, 2 * p) =
        v_eve * Eigen::MatrixXd::Identity(2 * p, 2 * p);

    const Eigen::Index n_rx = ctx.bob.modes();
    state.cross_with_bob = Eigen::MatrixXd::Zero(4 * p, 2 * n_rx);
    state.cross_with_bob.topRows(2 * p) =
        embed_complex(cross_accumulate(eve, ctx.bob, noise.alice_variance(), noise));
    // idlers correlate with Bob through the environment input they purify
    state.cross_with_bob.bottomRows(2 * p) =
        idler_cross(ctx.bob.env[env_index], v_eve, p).transpose();
    return state;
}

QuadratureCovariance bob_covariance_from(const LinkContext& ctx, double signal_variance,
                                         const NoiseVariances& noise) {
    const Eigen::Index n = ctx.bob.modes();
    Eigen::MatrixXd sigma =
        embed_complex(hermitian_accumulate(ctx.bob, signal_variance, noise));
    sigma += noise.detector_noise * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    return {sigma};
}

int mode_limit_of(const LinkChannels& channels) {
    return static_cast<int>(std::min({channels.direct.cols(), channels.direct.rows(),
                                      channels.tx_ris.rows()}));
}

}  // namespace

const ChannelDilation& LinkDilations::of(Segment segment) const {
    switch (segment) {
        case Segment::direct: return direct;
        case Segment::alice_ris: return tx_ris;
        default: return ris_rx;
    }
}

LinkDilations dilate_segments(const LinkChannels& channels) {
    return {dilate(channels.direct), dilate(channels.tx_ris), dilate(channels.ris_rx)};
}

std::pair<QuadratureCovariance, QuadratureCovariance> bob_covariances(
    const LinkChannels& channels, const LinkDilations& dilations, const RisPhaseConfig& phases,
    const SplitterSettings& splitters, const NoiseVariances& noise) {
    const LinkContext ctx = make_context(channels, dilations, phases, splitters);
    return {bob_covariance_from(ctx, noise.alice_variance(), noise),
            bob_covariance_from(ctx, noise.vacuum_variance, noise)};
}

double mutual_information_ab(const QuadratureCovariance& sigma_b,
                             const QuadratureCovariance& sigma_b_given_a, int mode_limit) {
    if (sigma_b.mat.rows() != sigma_b_given_a.mat.rows())
        throw contract_error("mutual_information_ab: dimension mismatch");
    Eigen::Index take = sigma_b.mat.rows();
    if (mode_limit > 0 && 2 * mode_limit < take) take = 2 * mode_limit;
    const double num = logdet2_spd(sigma_b.mat.topLeftCorner(take, take));
    const double den = logdet2_spd(sigma_b_given_a.mat.topLeftCorner(take, take));
    return std::max(0.0, 0.25 * (num - den));
}

QuadratureCovariance eve_output_covariance(Segment scenario, const LinkChannels& channels,
                                           const LinkDilations& dilations,
                                           const RisPhaseConfig& phases,
                                           const SplitterSettings& splitters,
                                           const NoiseVariances& noise) {
    const LinkContext ctx = make_context(channels, dilations, phases, splitters);
    return assemble_eve(scenario, channels, dilations, phases, splitters, noise, ctx).sigma_eve;
}

Eigen::MatrixXd eve_bob_cross(Segment scenario, const LinkChannels& channels,
                              const LinkDilations& dilations, const RisPhaseConfig& phases,
                              const SplitterSettings& splitters, const NoiseVariances& noise) {
    const LinkContext ctx = make_context(channels, dilations, phases, splitters);
    return assemble_eve(scenario, channels, dilations, phases, splitters, noise, ctx)
        .cross_with_bob;
}

LocalizedDetail evaluate_localized(Segment scenario, const LinkChannels& channels,
                                   const LinkDilations& dilations, const RisPhaseConfig& phases,
                                   const SplitterSettings& splitters,
                                   const NoiseVariances& noise) {
    const LinkContext ctx = make_context(channels, dilations, phases, splitters);

    LocalizedDetail detail;
    detail.sigma_b = bob_covariance_from(ctx, noise.alice_variance(), noise);
    detail.sigma_b_given_a = bob_covariance_from(ctx, noise.vacuum_variance, noise);

    const EveState eve = assemble_eve(scenario, channels, dilations, phases, splitters, noise, ctx);
    detail.sigma_eve = eve.sigma_eve;

    const Eigen::Index eve_modes = 2 * eve.out_modes;
    const Eigen::Index bob_modes = ctx.bob.modes();
    const Eigen::Index total = eve_modes + bob_modes;
    detail.joint_eve_bob.mat = Eigen::MatrixXd::Zero(2 * total, 2 * total);
    detail.joint_eve_bob.mat.topLeftCorner(2 * eve_modes, 2 * eve_modes) = eve.sigma_eve.mat;
    detail.joint_eve_bob.mat.topRightCorner(2 * eve_modes, 2 * bob_modes) = eve.cross_with_bob;
    detail.joint_eve_bob.mat.bottomLeftCorner(2 * bob_modes, 2 * eve_modes) =
        eve.cross_with_bob.transpose();
    detail.joint_eve_bob.mat.bottomRightCorner(2 * bob_modes, 2 * bob_modes) = detail.sigma_b.mat;

    std::vector<int> kept(static_cast<size_t>(eve_modes));
    std::iota(kept.begin(), kept.end(), 0);
    std::vector<int> measured(static_cast<size_t>(bob_modes));
    std::iota(measured.begin(), measured.end(), static_cast<int>(eve_modes));
    detail.sigma_eve_given_b = homodyne_condition(detail.joint_eve_bob, kept, measured);

    double chi = von_neumann_entropy(detail.sigma_eve) -
                 von_neumann_entropy(detail.sigma_eve_given_b);
    if (chi < 0.0 && chi > -kHolevoClampTol) chi = 0.0;

    detail.breakdown.scenario = scenario_of(scenario);
    detail.breakdown.mutual_information_bits =
        mutual_information_ab(detail.sigma_b, detail.sigma_b_given_a, mode_limit_of(channels));
    detail.breakdown.holevo_bits = chi;
    detail.breakdown.skr_bits = detail.breakdown.mutual_information_bits - chi;
    return detail;
}

double holevo_localized(Segment scenario, const LinkChannels& channels,
                        const LinkDilations& dilations, const RisPhaseConfig& phases,
                        const SplitterSettings& splitters, const NoiseVariances& noise) {
    return evaluate_localized(scenario, channels, dilations, phases, splitters, noise)
        .breakdown.holevo_bits;
}

SkrBreakdown skr_localized(Segment scenario, const LinkChannels& channels,
                           const LinkDilations& dilations, const RisPhaseConfig& phases,
                           const SplitterSettings& splitters, const NoiseVariances& noise) {
    return evaluate_localized(scenario, channels, dilations, phases, splitters, noise).breakdown;
}

ChannelMatrix effective_signal_channel(const LinkChannels& channels, const RisPhaseConfig& phases,
                                       const SplitterSettings& splitters) {
    const Eigen::MatrixXcd ris_path =
        channels.ris_rx.entries * phases.unit_modulus().asDiagonal() * channels.tx_ris.entries;
    ChannelMatrix effective;
    effective.tag = SegmentTag::composite;
    effective.entries =
        std::sqrt(splitters.eta_a * splitters.eta_b) * channels.direct.entries -
        std::sqrt((1.0 - splitters.eta_a) * (1.0 - splitters.eta_b)) * ris_path;
    return effective;
}

}  // namespace skrsim
