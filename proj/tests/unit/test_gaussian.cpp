// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <doctest.h>
#include <random>

#include "skrsim/error.hpp"
#include "skrsim/gaussian.hpp"

using namespace skrsim;

namespace {

Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = std::complex<double>(gauss(rng), gauss(rng)) * scale;
    return m;
}

Eigen::MatrixXcd random_passive(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    Eigen::MatrixXcd m = random_complex(rows, cols, rng);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return m * (unit(rng) / svd.singularValues()[0]);
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    const Eigen::MatrixXcd m = random_complex(n, n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    return q;
}

// Random pure Gaussian state: squeeze the vacuum per mode, then rotate by a
// passive (embedded unitary) symplectic.
QuadratureCovariance random_pure_state(int modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
    Eigen::VectorXd diag(2 * modes);
    for (int m = 0; m < modes; ++m) {
        const double r = squeeze(rng);
        diag[2 * m] = std::exp(2.0 * r);
        diag[2 * m + 1] = std::exp(-2.0 * r);
    }
    const Eigen::MatrixXd rotation = embed_complex(random_unitary(modes, rng));
    QuadratureCovariance state;
    state.mat = rotation * diag.asDiagonal() * rotation.transpose();
    state.mat = 0.5 * (state.mat + state.mat.transpose());
    return state;
}

// Random physical mixed state: thermal spectrum through a random symplectic.
QuadratureCovariance random_physical_state(int modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> heat(1.0, 4.0);
    QuadratureCovariance pure = random_pure_state(modes, rng);
    Eigen::VectorXd thermal(2 * modes);
    for (int m = 0; m < modes; ++m) thermal[2 * m] = thermal[2 * m + 1] = heat(rng);
    // congruence with a symplectic S applied to a thermal diagonal: build from
    // the pure-state construction with the thermal factors folded in
    const Eigen::MatrixXd rotation = embed_complex(random_unitary(modes, rng));
    QuadratureCovariance state;
    state.mat = rotation * thermal.asDiagonal() * rotation.transpose() + 0.5 * pure.mat;
    // mixture of physical covariances plus a positive term stays physical only
    // if each piece is; use thermal-through-rotation plus half the pure state,
    // then renormalize the floor by adding vacuum margin
    state.mat += 0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    state.mat = 0.5 * (state.mat + state.mat.transpose());
    return state;
}

}  // namespace

TEST_CASE("dilate splits a scalar loss into transmit and reflect amplitudes") {
    ChannelMatrix channel{Eigen::MatrixXcd::Constant(1, 1, 0.6), SegmentTag::direct};
    const ChannelDilation dilation = dilate(channel);
    CHECK(dilation.singular_values[0] == doctest::Approx(0.6));
    CHECK(dilation.reflect_diag()(0, 0) == doctest::Approx(0.8));
    const double beta = 0.6 * 0.6;
    CHECK(beta + 0.8 * 0.8 == doctest::Approx(1.0));
}

TEST_CASE("dilate of a unitary channel has an all-zero leading reflect block") {
    std::mt19937_64 rng(31);
    ChannelMatrix channel{random_unitary(4, rng), SegmentTag::composite};
    const ChannelDilation dilation = dilate(channel);
    for (int i = 0; i < 4; ++i) CHECK(dilation.reflect_diag()(i, i) < 1e-7);
}

TEST_CASE("dilate satisfies the unitarity identity on random passive channels") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> dim(1, 9);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        ChannelMatrix channel{random_passive(rows, cols, rng), SegmentTag::composite};
        const ChannelDilation dilation = dilate(channel);
        const Eigen::MatrixXcd coupling = dilation.coupling();
        const Eigen::MatrixXcd residual = channel.entries * channel.entries.adjoint() +
                                          coupling * coupling.adjoint() -
                                          Eigen::MatrixXcd::Identity(rows, rows);
        CHECK(residual.norm() <= 1e-10);
        // D^2 + S^2 = I on the channel directions
        const Eigen::MatrixXd d = dilation.transmit_diag();
        const Eigen::MatrixXd s = dilation.reflect_diag();
        for (int i = 0; i < std::min(rows, cols); ++i)
            CHECK(d(i, i) * d(i, i) + s(i, i) * s(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dilate rejects active channels and names the singular value") {
    ChannelMatrix channel{Eigen::MatrixXcd::Constant(1, 1, 1.3), SegmentTag::composite};
    CHECK_THROWS_WITH_AS(dilate(channel), doctest::Contains("1.3"), passivity_error);
}

TEST_CASE("embed_complex basics") {
    CHECK((embed_complex(Eigen::MatrixXcd::Identity(3, 3)) -
           Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-15);

    Eigen::MatrixXcd quarter_turn(1, 1);
    quarter_turn(0, 0) = std::exp(std::complex<double>(0.0, skrsim::constants::pi / 2.0));
    Eigen::MatrixXd expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK((embed_complex(quarter_turn) - expected).norm() < 1e-15);
}

TEST_CASE("embed_complex is a homomorphism") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd a = random_complex(3, 4, rng);
        const Eigen::MatrixXcd b = random_complex(4, 2, rng);
        CHECK((embed_complex(a * b) - embed_complex(a) * embed_complex(b)).norm() < 1e-12);
        CHECK((embed_complex(a.adjoint()) - embed_complex(a).transpose()).norm() < 1e-14);
    }
}

TEST_CASE("ho_entropy pins the exact and frozen points") {
    CHECK(ho_entropy(1.0) == 0.0);
    CHECK(ho_entropy(3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ho_entropy(2.0) == doctest::Approx(1.3774437510817343).epsilon(1e-14));
    CHECK(ho_entropy(1.0 - 0.5e-9) == 0.0);  // clamp band
    CHECK_THROWS_AS(ho_entropy(0.9), unphysical_state_error);
}

TEST_CASE("ho_entropy is increasing and concave") {
    const double step = 0.35;
    double previous = ho_entropy(1.1);
    double previous_slope = std::numeric_limits<double>::infinity();
    for (double nu = 1.1 + step; nu < 40.0; nu += step) {
        const double value = ho_entropy(nu);
        CHECK(value > previous);
        const double slope = (value - previous) / step;
        CHECK(slope < previous_slope);
        previous = value;
        previous_slope = slope;
    }
}

TEST_CASE("symplectic_eigenvalues of simple states") {
    for (double nu : symplectic_eigenvalues(QuadratureCovariance::vacuum(3)).eigenvalues)
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-14));

    QuadratureCovariance thermal{4.5 * Eigen::MatrixXd::Identity(2, 2)};
    CHECK(symplectic_eigenvalues(thermal).eigenvalues[0] == doctest::Approx(4.5));

    // TMSV covariance is pure for any V_e >= 1
    for (double ve : {1.0, 1.7, 20.0}) {
        QuadratureCovariance epr{Eigen::MatrixXd::Zero(4, 4)};
        epr.mat.topLeftCorner(2, 2) = ve * Eigen::Matrix2d::Identity();
        epr.mat.bottomRightCorner(2, 2) = ve * Eigen::Matrix2d::Identity();
        Eigen::Matrix2d z;
        z << 1.0, 0.0, 0.0, -1.0;
        epr.mat.topRightCorner(2, 2) = std::sqrt(ve * ve - 1.0) * z;
        epr.mat.bottomLeftCorner(2, 2) = std::sqrt(ve * ve - 1.0) * z;
        const SymplecticSpectrum spectrum = symplectic_eigenvalues(epr);
        CHECK(spectrum.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(spectrum.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("symplectic transforms of the vacuum stay pure") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const QuadratureCovariance state = random_pure_state(1 + trial % 5, rng);
        for (double nu : symplectic_eigenvalues(state).eigenvalues)
            CHECK(std::abs(nu - 1.0) < 1e-8);
    }
}

TEST_CASE("symplectic_eigenvalues rejects non-symmetric input") {
    QuadratureCovariance bad{Eigen::MatrixXd::Identity(4, 4)};
    bad.mat(0, 1) = 0.5;
    CHECK_THROWS_AS(symplectic_eigenvalues(bad), contract_error);
}

TEST_CASE("von_neumann_entropy on product states is additive") {
    CHECK(von_neumann_entropy(QuadratureCovariance::vacuum(5)) == 0.0);

    QuadratureCovariance thermal{3.0 * Eigen::MatrixXd::Identity(2, 2)};
    CHECK(von_neumann_entropy(thermal) == doctest::Approx(2.0).epsilon(1e-12));

    QuadratureCovariance product{Eigen::VectorXd{{3.0, 3.0, 2.0, 2.0}}.asDiagonal()};
    CHECK(von_neumann_entropy(product) ==
          doctest::Approx(2.0 + 1.3774437510817343).epsilon(1e-12));
}

TEST_CASE("homodyne_condition leaves uncorrelated parties untouched") {
    QuadratureCovariance joint{Eigen::MatrixXd::Identity(6, 6)};
    joint.mat(0, 0) = joint.mat(1, 1) = 2.5;
    const QuadratureCovariance conditional = homodyne_condition(joint, {0}, {1, 2});
    CHECK((conditional.mat - 2.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("homodyne_condition on an EPR pair gives conditional variance 1/V") {
    for (double ve : {1.2, 2.5, 9.0}) {
        QuadratureCovariance epr{Eigen::MatrixXd::Zero(4, 4)};
        epr.mat.topLeftCorner(2, 2) = ve * Eigen::Matrix2d::Identity();
        epr.mat.bottomRightCorner(2, 2) = ve * Eigen::Matrix2d::Identity();
        Eigen::Matrix2d z;
        z << 1.0, 0.0, 0.0, -1.0;
        epr.mat.topRightCorner(2, 2) = std::sqrt(ve * ve - 1.0) * z;
        epr.mat.bottomLeftCorner(2, 2) = std::sqrt(ve * ve - 1.0) * z;
        const QuadratureCovariance conditional = homodyne_condition(epr, {0}, {1});
        // x: V - (V^2-1)/V = 1/V, p untouched by an x measurement
        CHECK(conditional.mat(0, 0) == doctest::Approx(1.0 / ve).epsilon(1e-12));
        CHECK(conditional.mat(1, 1) == doctest::Approx(ve).epsilon(1e-12));
    }
}

TEST_CASE("homodyne_condition returns the kept marginal for an empty measurement") {
    std::mt19937_64 rng(10);
    const QuadratureCovariance state = random_physical_state(3, rng);
    const QuadratureCovariance untouched = homodyne_condition(state, {0, 1, 2}, {});
    CHECK((untouched.mat - state.mat).norm() < 1e-14);
}

TEST_CASE("homodyne_condition validates the partition") {
    QuadratureCovariance joint{Eigen::MatrixXd::Identity(6, 6)};
    CHECK_THROWS_AS(homodyne_condition(joint, {0, 1}, {1, 2}), contract_error);
    CHECK_THROWS_AS(homodyne_condition(joint, {0}, {2}), contract_error);
    CHECK_THROWS_AS(homodyne_condition(joint, {0, 1}, {5}), contract_error);
}

TEST_CASE("conditioning never increases the entropy of the kept party") {
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> dim(2, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const int modes = dim(rng);
        const QuadratureCovariance joint = random_physical_state(modes, rng);
        std::vector<int> kept, measured;
        for (int m = 0; m < modes; ++m)
            (m < modes / 2 ? kept : measured).push_back(m);
        if (measured.empty() || kept.empty()) continue;
        const QuadratureCovariance marginal = joint.marginal(kept);
        const QuadratureCovariance conditional = homodyne_condition(joint, kept, measured);
        CHECK(von_neumann_entropy(conditional) <= von_neumann_entropy(marginal) + 1e-8);
        // conditional state remains physical
        for (double nu : symplectic_eigenvalues(conditional).eigenvalues)
            CHECK(nu >= 1.0 - 1e-8);
    }
}
