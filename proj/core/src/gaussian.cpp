// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#include "skrsim/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "skrsim/error.hpp"

namespace skrsim {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kUnphysicalTol = 1e-9;

void check_symmetric(const Eigen::MatrixXd& mat, const char* who) {
    if (mat.rows() != mat.cols() || mat.rows() % 2 != 0)
        throw contract_error(std::string(who) + ": covariance must be square with even size");
    const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
    if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
        throw contract_error(std::string(who) + ": covariance is not symmetric");
}

// Symmetric pseudo-inverse with relative singular-value cutoff 1e-12.
Eigen::MatrixXd pseudo_inverse_spd(const Eigen::MatrixXd& mat) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values[i] > cutoff) inv[i] = 1.0 / values[i];
    return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

QuadratureCovariance QuadratureCovariance::vacuum(int modes) {
    return {Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

QuadratureCovariance QuadratureCovariance::marginal(const std::vector<int>& modes) const {
    const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXd out(2 * k, 2 * k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            out.block<2, 2>(2 * a, 2 * b) = mat.block<2, 2>(2 * modes[a], 2 * modes[b]);
    return {out};
}

ChannelDilation dilate(const ChannelMatrix& channel) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channel.entries,
                                           Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() > 0 && sv[0] > 1.0 + 1e-12)
        throw passivity_error("dilate: singular value " + std::to_string(sv[0]) +
                              " exceeds 1; channel is not passive");

    ChannelDilation dilation;
    dilation.left_unitary = svd.matrixU();
    dilation.right_unitary = svd.matrixV();
    dilation.singular_values = sv.cwiseMin(1.0);  // clip 1 + eps roundoff
    const double threshold = 1e-12 * std::max(sv.size() > 0 ? sv[0] : 0.0, 1.0);
    dilation.rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++dilation.rank;
    return dilation;
}

Eigen::MatrixXd ChannelDilation::transmit_diag() const {
    const Eigen::Index m = rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) d(i, i) = singular_values[i];
    return d;
}

Eigen::MatrixXd ChannelDilation::reflect_diag() const {
    const Eigen::Index m = rows();
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        const double beta = singular_values[i] * singular_values[i];
        s(i, i) = std::sqrt(std::max(0.0, 1.0 - beta));
    }
    return s;
}

Eigen::MatrixXcd ChannelDilation::coupling() const {
    return left_unitary * reflect_diag();
}

Eigen::MatrixXd embed_complex(const Eigen::MatrixXcd& map) {
    Eigen::MatrixXd out(2 * map.rows(), 2 * map.cols());
    for (Eigen::Index i = 0; i < map.rows(); ++i)
        for (Eigen::Index j = 0; j < map.cols(); ++j) {
            const double re = map(i, j).real();
            const double im = map(i, j).imag();
            out(2 * i, 2 * j) = re;
            out(2 * i, 2 * j + 1) = -im;
            out(2 * i + 1, 2 * j) = im;
            out(2 * i + 1, 2 * j + 1) = re;
        }
    return out;
}

Eigen::MatrixXd tmsv_phase_flip(int modes) {
    Eigen::VectorXd diag(2 * modes);
    for (int m = 0; m < modes; ++m) {
        diag[2 * m] = 1.0;
        diag[2 * m + 1] = -1.0;
    }
    return diag.asDiagonal();
}

double ho_entropy(double nu) {
    if (nu < 1.0 - kUnphysicalTol)
        throw unphysical_state_error("ho_entropy: symplectic eigenvalue " + std::to_string(nu) +
                                     " below 1");
    if (nu <= 1.0) return 0.0;
    const double up = (nu + 1.0) / 2.0;
    const double dn = (nu - 1.0) / 2.0;
    double result = up * std::log2(up);
    if (dn > 0.0) result -= dn * std::log2(dn);
    return result;
}

SymplecticSpectrum symplectic_eigenvalues(const QuadratureCovariance& state) {
    check_symmetric(state.mat, "symplectic_eigenvalues");
    const Eigen::Index modes = state.mat.rows() / 2;

    // The spectrum of Omega Sigma equals that of M = Sigma^(1/2) Omega
    // Sigma^(1/2), which is antisymmetric and hence normal, so everything
    // reduces to well-conditioned symmetric eigenproblems: the eigenvalues of
    // -M^2 = M^T M are the nu_k^2, each doubled.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_sigma(state.mat);
    const Eigen::VectorXd root = eig_sigma.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd sqrt_sigma =
        eig_sigma.eigenvectors() * root.asDiagonal() * eig_sigma.eigenvectors().transpose();

    Eigen::MatrixXd omega_half(state.mat.rows(), state.mat.cols());  // Omega * sqrt_sigma
    for (Eigen::Index m = 0; m < modes; ++m) {
        omega_half.row(2 * m) = sqrt_sigma.row(2 * m + 1);
        omega_half.row(2 * m + 1) = -sqrt_sigma.row(2 * m);
    }
    const Eigen::MatrixXd skew = sqrt_sigma * omega_half;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_sq(skew.transpose() * skew);

    std::vector<double> moduli(static_cast<size_t>(2 * modes));
    for (Eigen::Index i = 0; i < 2 * modes; ++i)
        moduli[i] = std::sqrt(std::max(0.0, eig_sq.eigenvalues()[i]));
    std::sort(moduli.begin(), moduli.end(), std::greater<double>());

    SymplecticSpectrum spectrum;
    spectrum.eigenvalues.reserve(static_cast<size_t>(modes));
    for (Eigen::Index m = 0; m < modes; ++m) {
        const double a = moduli[2 * m];
        const double b = moduli[2 * m + 1];
        // eigenvalues of Omega Sigma come in +/- i nu pairs
        if (std::abs(a - b) > 1e-8 * std::max(1.0, a))
            throw unphysical_state_error(
                "symplectic_eigenvalues: unpaired spectrum, moduli " + std::to_string(a) + " vs " +
                std::to_string(b));
        spectrum.eigenvalues.push_back(0.5 * (a + b));
    }
    return spectrum;
}

double von_neumann_entropy(const QuadratureCovariance& state) {
    double total = 0.0;
    for (double nu : symplectic_eigenvalues(state).eigenvalues) total += ho_entropy(nu);
    return total;
}

QuadratureCovariance homodyne_condition(const QuadratureCovariance& joint,
                                        const std::vector<int>& kept_modes,
                                        const std::vector<int>& measured_modes) {
    check_symmetric(joint.mat, "homodyne_condition");
    const int modes = joint.mode_count();
    std::vector<bool> seen(static_cast<size_t>(modes), false);
    for (int m : kept_modes) {
        if (m < 0 || m >= modes || seen[static_cast<size_t>(m)])
            throw contract_error("homodyne_condition: bad kept index " + std::to_string(m));
        seen[static_cast<size_t>(m)] = true;
    }
    for (int m : measured_modes) {
        if (m < 0 || m >= modes || seen[static_cast<size_t>(m)])
            throw contract_error("homodyne_condition: bad measured index " + std::to_string(m));
        seen[static_cast<size_t>(m)] = true;
    }
    if (kept_modes.size() + measured_modes.size() != static_cast<size_t>(modes))
        throw contract_error("homodyne_condition: index sets must partition the joint state");

    QuadratureCovariance kept = joint.marginal(kept_modes);
    if (measured_modes.empty()) return kept;

    const Eigen::Index nk = static_cast<Eigen::Index>(kept_modes.size());
    const Eigen::Index nm = static_cast<Eigen::Index>(measured_modes.size());

    // x-quadrature block of the measured modes and the kept-to-measured-x cross.
    Eigen::MatrixXd meas_xx(nm, nm);
    for (Eigen::Index a = 0; a < nm; ++a)
        for (Eigen::Index b = 0; b < nm; ++b)
            meas_xx(a, b) = joint.mat(2 * measured_modes[a], 2 * measured_modes[b]);
    Eigen::MatrixXd cross(2 * nk, nm);
    for (Eigen::Index a = 0; a < nk; ++a)
        for (Eigen::Index b = 0; b < nm; ++b) {
            cross(2 * a, b) = joint.mat(2 * kept_modes[a], 2 * measured_modes[b]);
            cross(2 * a + 1, b) = joint.mat(2 * kept_modes[a] + 1, 2 * measured_modes[b]);
        }

    Eigen::MatrixXd conditional = kept.mat - cross * pseudo_inverse_spd(meas_xx) * cross.transpose();
    conditional = 0.5 * (conditional + conditional.transpose());
    return {conditional};
}

double logdet2_spd(const Eigen::MatrixXd& mat) {
    Eigen::LLT<Eigen::MatrixXd> llt(mat);
    if (llt.info() != Eigen::Success)
        throw contract_error("logdet2_spd: matrix is not positive definite");
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
        logdet += std::log2(llt.matrixLLT()(i, i));
    return 2.0 * logdet;
}

}  // namespace skrsim
