/**
 * @file oracle.hpp
 * @brief Brute-force reference for the regularized response: numerical
 *        convolution of f_eps with the exact displacement.
 *
 * Works for every Poisson ratio in [0, 0.5), so it also serves as reference
 * data where the closed form is unsupported. Integration is split at the three
 * wavefronts and around the kernel peak; the inverse-square-root singularity
 * at the Rayleigh arrival is removed by the substitution s = gamma - u^2.
 */

#ifndef GROUNDSOUND_ORACLE_HPP
#define GROUNDSOUND_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"
#include "lamb.hpp"
#include "material.hpp"
#include "regularized.hpp"

namespace groundsound {

struct OracleResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

/// Integrate fn over [lo, hi], splitting at the given interior points.
template <class F>
OracleResult integrate_split(F&& fn, double lo, double hi, std::vector<double> cuts, double rel_tol)
{
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Boost reports the adaptive error on the rescaled interval, so the
    // estimate used here is the spread between two independent rules.
    OracleResult out;
    using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;
    using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto piece = [&](auto&& g, double a, double b) {
        const double hi_order = GK61::integrate(g, a, b, 15, rel_tol);
        const double lo_order = GK31::integrate(g, a, b, 15, rel_tol);
        out.value += hi_order;
        out.error_estimate += std::abs(hi_order - lo_order) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi_order);
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = std::max(lo, cuts[k]);
        const double b = std::min(hi, cuts[k + 1]);
        if (!(b > a))
            continue;
        piece(fn, a, b);
    }
    return out;
}

} // namespace detail

/**
 * (f_eps * u_n)(r, t) by adaptive quadrature. Throws NumericalError when the
 * achieved error estimate exceeds `abs_tol` in units of the static
 * displacement (1-nu)/(2 pi mu r).
 */
inline OracleResult convolution_oracle_detailed(const HalfspaceParams& hs, double eps, double r, double t,
                                                double abs_tol = 1e-8)
{
    if (!(r > 0.0))
        throw std::domain_error("convolution_oracle: r must be positive");
    if (!(eps > 0.0))
        throw std::domain_error("convolution_oracle: eps must be positive");

    // Work in tau = c_s t / r: u_n = static * G(tau); kernel width in tau is eps / r.
    const double tau = hs.c_s * t / r;
    const double e = eps / r;
    const double a = hs.speed_ratio;
    const double g = hs.gamma;

    auto f_tau = [&](double x) {
        // f_eps as a density in tau: (6 e^3 / pi) / ((x^2 + e^2)(x^2 + 4 e^2)).
        const double x2 = x * x;
        return 6.0 * e * e * e / (std::numbers::pi * (x2 + e * e) * (x2 + 4.0 * e * e));
    };
    auto integrand = [&](double s) { return f_tau(tau - s) * pekeris_shape(hs, s); };

    std::vector<double> cuts;
    for (double k : {0.0, 1.0, 4.0, 16.0, 64.0}) {
        cuts.push_back(tau - k * e);
        cuts.push_back(tau + k * e);
    }
    const double rel = 1e-12;

    // [a, 1]: kinks only at the ends.
    std::vector<double> in1;
    for (double c : cuts)
        if (c > a && c < 1.0)
            in1.push_back(c);
    auto part1 = detail::integrate_split(integrand, a, 1.0, in1, rel);

    // [1, gamma): substitute s = gamma - u^2. With tau^2 - gamma^2 = -u^2 (2 gamma - u^2)
    // the (gamma - s)^(-1/2) factor cancels analytically:
    // 2u G = 2u - Re(2 A_1 / (i sqrt(2 gamma - u^2))).
    const cplx a1 = hs.coeffs[0];
    auto integrand_u = [&](double u) {
        const double s = g - u * u;
        const cplx sing = 2.0 * a1 / (cplx(0.0, 1.0) * std::sqrt(2.0 * g - u * u));
        return f_tau(tau - s) * (2.0 * u - sing.real());
    };
    std::vector<double> in2;
    for (double c : cuts)
        if (c > 1.0 && c < g)
            in2.push_back(std::sqrt(g - c));
    auto part2 = detail::integrate_split(integrand_u, 0.0, std::sqrt(g - 1.0), in2, rel);

    // [gamma, inf): G = 1, so the integral is the kernel CDF at tau - gamma.
    const double tail = 0.5 + (2.0 * std::atan((tau - g) / e) - std::atan((tau - g) / (2.0 * e))) / std::numbers::pi;

    OracleResult res;
    res.value = hs.static_prefactor() / r * (part1.value + part2.value + tail);
    res.error_estimate = hs.static_prefactor() / r * (part1.error_estimate + part2.error_estimate);
    const double scale = hs.static_prefactor() / r;
    if (!(res.error_estimate <= abs_tol * scale) || !std::isfinite(res.value)) {
        std::ostringstream msg;
        msg << "convolution_oracle: quadrature did not converge at r = " << r << ", t = " << t
            << " (error estimate " << res.error_estimate / scale << " of static, tolerance " << abs_tol << ")";
        throw NumericalError(msg.str());
    }
    return res;
}

inline double convolution_oracle(const HalfspaceParams& hs, double eps, double r, double t)
{
    return convolution_oracle_detailed(hs, eps, r, t).value;
}

inline double convolution_oracle(const RegularizedField& f, double r, double t)
{
    return convolution_oracle(f.halfspace, f.epsilon, r, t);
}

/**
 * Late-time slope of the exact volume displacement: D(t) = slope * t for
 * t > 0, slope = 2 pi (1-nu)/(2 pi mu) c_s (int_a^gamma G(tau)/tau^2 dtau + 1/gamma).
 * Obtained from the change of variables r = c_s t / tau.
 */
inline double pekeris_volume_slope(const HalfspaceParams& hs)
{
    auto fn = [&](double s) { return pekeris_shape(hs, s) / (s * s); };
    const double g = hs.gamma;
    const cplx a1 = hs.coeffs[0];
    auto fn_u = [&](double u) {
        const double s = g - u * u;
        const cplx sing = 2.0 * a1 / (cplx(0.0, 1.0) * std::sqrt(2.0 * g - u * u));
        return (2.0 * u - sing.real()) / (s * s);
    };
    auto lower = detail::integrate_split(fn, hs.speed_ratio, 1.0, {}, 1e-13);
    auto upper = detail::integrate_split(fn_u, 0.0, std::sqrt(g - 1.0), {}, 1e-13);
    const double shape_integral = lower.value + upper.value + 1.0 / hs.gamma;
    return 2.0 * std::numbers::pi * hs.static_prefactor() * hs.c_s * shape_integral;
}

inline double pekeris_volume_displacement(const HalfspaceParams& hs, double t)
{
    return t > 0.0 ? pekeris_volume_slope(hs) * t : 0.0;
}

} // namespace groundsound

#endif
