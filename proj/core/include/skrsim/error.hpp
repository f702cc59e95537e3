// SPDX-License-Identifier: Apache-2.0
//
// skrsim - secret key rate simulation for RIS-assisted THz MIMO CV-QKD

#ifndef SKRSIM_ERROR_HPP
#define SKRSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace skrsim {

// Bad array/RIS/path geometry or mismatched matrix dimensions.
class invalid_geometry_error : public std::invalid_argument {
public:
    explicit invalid_geometry_error(const std::string& what)
        : std::invalid_argument(what) {}
};

// A channel whose largest singular value exceeds 1: not a lossy
// (trace-non-increasing) Gaussian channel, so no unitary dilation exists.
class passivity_error : public std::runtime_error {
public:
    explicit passivity_error(const std::string& what)
        : std::runtime_error(what) {}
};

// A covariance matrix with a symplectic eigenvalue below 1, or a
// state-assembly step that produced one.
class unphysical_state_error : public std::runtime_error {
public:
    explicit unphysical_state_error(const std::string& what)
        : std::runtime_error(what) {}
};

// A caller violated an operation precondition (non-symmetric covariance,
// bad index partition, singular conditional covariance, ...).
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what)
        : std::logic_error(what) {}
};

// Experiment configuration problems; message carries the offending field path.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace skrsim

#endif  // SKRSIM_ERROR_HPP
