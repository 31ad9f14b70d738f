/**
 * @file errors.hpp
 * @brief Exception types shared by the groundsound library.
 *
 * ConfigError covers malformed input and physical-invariant violations,
 * NumericalError covers solver failures (quadrature non-convergence, FDTD
 * blow-up), UnsupportedRegime marks inputs the closed form cannot evaluate.
 */

#ifndef GROUNDSOUND_ERRORS_HPP
#define GROUNDSOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace groundsound {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedRegime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace groundsound

#endif
