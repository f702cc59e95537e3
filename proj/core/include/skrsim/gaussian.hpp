// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD
//
// Gaussian quantum-information engine. States are real 2M x 2M quadrature
// covariance matrices in mode-interleaved ordering (x_1, p_1, ..., x_M, p_M)
// with vacuum variance 1 per quadrature. Complex mode-operator maps enter
// only through embed_complex.

#ifndef SKRSIM_GAUSSIAN_HPP
#define SKRSIM_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <vector>

#include "skrsim/thz_channel.hpp"

namespace skrsim {

struct QuadratureCovariance {
    Eigen::MatrixXd mat;  // 2M x 2M, symmetric

    int mode_count() const { return static_cast<int>(mat.rows() / 2); }

    static QuadratureCovariance vacuum(int modes);
    // Marginal over a subset of modes (indices into 0..M-1, kept order).
    QuadratureCovariance marginal(const std::vector<int>& modes) const;
};

// SVD-derived beam-splitter dilation of a passive channel H (m x n):
// H = U diag(s) V^H with s_i = sqrt(beta_i). The environment couples on the
// output space, so S and N = U S are m x m and H H^H + N N^H = I_m.
struct ChannelDilation {
    Eigen::MatrixXcd left_unitary;    // U, m x m
    Eigen::MatrixXcd right_unitary;   // V, n x n
    Eigen::VectorXd singular_values;  // sqrt(beta_i), descending, length min(m, n)
    int rank = 0;                     // r_H: count of singular values above threshold

    Eigen::Index rows() const { return left_unitary.rows(); }
    Eigen::Index cols() const { return right_unitary.rows(); }
    Eigen::Index min_dim() const { return std::min(rows(), cols()); }

    // D: m x m, leading diagonal sqrt(beta_i), zero elsewhere.
    Eigen::MatrixXd transmit_diag() const;
    // S: m x m diagonal, sqrt(1 - beta_i) on channel directions, 1 beyond.
    Eigen::MatrixXd reflect_diag() const;
    // N = U S: environmental coupling on the output space.
    Eigen::MatrixXcd coupling() const;
};

// Dilate a passive channel; throws passivity_error (naming the offending
// singular value) if sigma_max > 1 beyond tolerance.
ChannelDilation dilate(const ChannelMatrix& channel);

// Complex entry a+jb acting on a mode becomes the 2x2 block [[a, -b], [b, a]]
// at the corresponding quadrature pair. Homomorphism: embed(AB) = embed(A)embed(B),
// embed(A^H) = embed(A)^T.
Eigen::MatrixXd embed_complex(const Eigen::MatrixXcd& map);

// Block-diagonal diag(1, -1) per mode: the TMSV x/p sign pattern. A mode set
// reached from a TMSV input through complex map M correlates with the retained
// idlers as sqrt(V^2-1) * embed(M) * tmsv_phase_flip.
Eigen::MatrixXd tmsv_phase_flip(int modes);

// Gaussian thermal-state entropy term h_o(nu), in bits; h_o(1) = 0.
// Input below 1 - 1e-9 raises unphysical_state_error; [1 - 1e-9, 1) clamps to 1.
double ho_entropy(double nu);

struct SymplecticSpectrum {
    std::vector<double> eigenvalues;  // sorted descending, one per mode
};

// Moduli of the eigenvalues of i Omega Sigma, one per conjugate pair.
SymplecticSpectrum symplectic_eigenvalues(const QuadratureCovariance& state);

// Sum of h_o over the symplectic spectrum, in bits.
double von_neumann_entropy(const QuadratureCovariance& state);

// Covariance of the kept modes conditioned on homodyne (x-quadrature)
// measurement of every measured mode: the Schur complement through the
// pseudo-inverse of the measured x-block. The two index sets must partition
// the joint state's modes. An empty measured set returns the kept marginal.
QuadratureCovariance homodyne_condition(const QuadratureCovariance& joint,
                                        const std::vector<int>& kept_modes,
                                        const std::vector<int>& measured_modes);

// log2 det of a symmetric positive-definite matrix (shared by the MI path).
double logdet2_spd(const Eigen::MatrixXd& mat);

}  // namespace skrsim

#endif  // SKRSIM_GAUSSIAN_HPP
