/**
 * @file lamb.hpp
 * @brief Exact vertical surface displacement for Lamb's problem (a unit
 *        normal point load switched on at t = 0 and held), in the
 *        Pekeris/Kausel form valid for every Poisson ratio in [0, 0.5).
 */

#ifndef GROUNDSOUND_LAMB_HPP
#define GROUNDSOUND_LAMB_HPP

#include <complex>
#include <stdexcept>

#include "material.hpp"

namespace groundsound {

struct WavefrontTimes {
    double t_p = 0.0; // r a / c_s
    double t_s = 0.0; // r / c_s
    double t_r = 0.0; // r gamma / c_s
};

inline WavefrontTimes wavefront_times(const HalfspaceParams& hs, double r)
{
    if (!(r > 0.0))
        throw std::domain_error("wavefront_times: r must be positive");
    const double t_s = r / hs.c_s;
    return {hs.speed_ratio * t_s, t_s, hs.gamma * t_s};
}

/**
 * Normalised displacement G(tau) so that u_n = static_prefactor / r * G.
 * tau = c_s t / r. Boundaries follow the closed side of each inequality:
 * tau <= a gives 0 and tau >= gamma gives the static value 1.
 */
inline double pekeris_shape(const HalfspaceParams& hs, double tau)
{
    const double a = hs.speed_ratio;
    if (tau <= a)
        return 0.0;
    if (tau >= hs.gamma)
        return 1.0;
    const cplx tau2(tau * tau, 0.0);
    if (tau < 1.0) {
        cplx sum(0.0);
        for (int j = 0; j < 3; ++j)
            sum += hs.coeffs[j] / std::sqrt(tau2 - hs.kappa_sq[j]);
        return 0.5 * (1.0 - sum).real();
    }
    return (1.0 - hs.coeffs[0] / std::sqrt(tau2 - hs.kappa_sq[0])).real();
}

/// Vertical surface displacement u_n(r, t) in metres per newton.
inline double pekeris_displacement(const HalfspaceParams& hs, double r, double t)
{
    if (!(r > 0.0))
        throw std::domain_error("pekeris_displacement: r must be positive (the load point is singular)");
    return hs.static_prefactor() / r * pekeris_shape(hs, hs.c_s * t / r);
}

} // namespace groundsound

#endif
