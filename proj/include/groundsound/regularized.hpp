/**
 * @file regularized.hpp
 * @brief Temporally regularized Lamb's-problem response.
 *
 * The held point load is smoothed in time by the fourth-order kernel
 * f_eps = 2 g_eps - g_2eps (g_eps a Cauchy kernel of length eps in c_s t).
 * Convolving the exact displacement with g_eps has a closed form built from
 * arctangents, complex logarithms and one complex square root; the fourth-order
 * response is u_eps = 2 k_eps - k_2eps. The impulse displacement w_eps = du/dt
 * and impulse acceleration a_eps = d^3u/dt^3 come from propagating Taylor jets
 * through the same closed form, so they are exact derivatives, not differences.
 *
 * Internally time is carried as t' = c_s t (metres); every public entry point
 * takes seconds.
 *
 * The closed form only stays on principal branches when all three Rayleigh
 * roots are real and kappa_2, kappa_3 < a, which holds for Poisson ratios below
 * 0.2631. Outside that range the evaluators throw UnsupportedRegime.
 */

#ifndef GROUNDSOUND_REGULARIZED_HPP
#define GROUNDSOUND_REGULARIZED_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "jet.hpp"
#include "material.hpp"

namespace groundsound {

/// Smallest radius at which the response is evaluated; the load point is singular.
inline constexpr double kMinEvalRadius = 1e-6;

// ---------------------------------------------------------------------------
// Smoothing kernels (seconds in, 1/seconds out)
// ---------------------------------------------------------------------------

inline double kernel_g(double t, double eps, double c_s)
{
    const double x = c_s * t;
    return c_s * eps / (std::numbers::pi * (x * x + eps * eps));
}

inline double kernel_f(double t, double eps, double c_s)
{
    return 2.0 * kernel_g(t, eps, c_s) - kernel_g(t, 2.0 * eps, c_s);
}

/// d f_eps / dt.
inline double kernel_f_derivative(double t, double eps, double c_s)
{
    auto dg = [&](double e) {
        const double x = c_s * t;
        const double d = x * x + e * e;
        return -2.0 * c_s * c_s * c_s * e * t / (std::numbers::pi * d * d);
    };
    return 2.0 * dg(eps) - dg(2.0 * eps);
}

/// f_eps and its first N time derivatives at t, as a jet in seconds.
template <int N>
Jet<double, N> kernel_f_jet(double t, double eps, double c_s)
{
    const auto x = Jet<double, N>::variable(t) * c_s;
    auto g = [&](double e) { return (c_s * e / std::numbers::pi) / (x * x + e * e); };
    return g(eps) * 2.0 - g(2.0 * eps);
}

/// Running integral of f_eps from -infinity to t (a smoothed Heaviside step).
inline double kernel_f_cumulative(double t, double eps, double c_s)
{
    const double x = c_s * t;
    return 0.5 + (2.0 * std::atan(x / eps) - std::atan(x / (2.0 * eps))) / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Closed-form building blocks in t' = c_s t
// ---------------------------------------------------------------------------

namespace detail {

template <int N>
using RJet = Jet<double, N>;
template <int N>
using CJet = Jet<cplx, N>;

template <int N>
RJet<N> U(const RJet<N>& tp, double sigma, double eps, double r)
{
    return 1.0 / (2.0 * r) + atan((tp - sigma) / eps) * (1.0 / (std::numbers::pi * r));
}

template <int N>
CJet<N> Z(const CJet<N>& tp, double alpha, double eps)
{
    const cplx i(0.0, 1.0);
    const auto e = cplx(eps) - i * tp;
    return sqrt(cplx(alpha * alpha) + e * e);
}

/// log(eps - i (t' - s))
template <int N>
CJet<N> first_log(const CJet<N>& tp, double s, double eps)
{
    const cplx i(0.0, 1.0);
    return log(cplx(eps) - i * (tp - cplx(s)));
}

/// log(alpha^2 - (t' + i eps) s - i Z sqrt(s^2 - alpha^2)), s >= alpha.
template <int N>
CJet<N> v_second_log(const CJet<N>& tp, const CJet<N>& z, double s, double alpha, double eps)
{
    const cplx i(0.0, 1.0);
    const double root = std::sqrt(std::max(0.0, s * s - alpha * alpha));
    return log(cplx(alpha * alpha) - (tp + cplx(0.0, eps)) * cplx(s) - z * (i * root));
}

/// log(alpha^2 - (t' + i eps) s + Z sqrt(alpha^2 - s^2)), s <= alpha.
template <int N>
CJet<N> w_second_log(const CJet<N>& tp, const CJet<N>& z, double s, double alpha, double eps)
{
    const double root = std::sqrt(std::max(0.0, alpha * alpha - s * s));
    return log(cplx(alpha * alpha) - (tp + cplx(0.0, eps)) * cplx(s) + z * cplx(root));
}

template <int N>
RJet<N> V(const RJet<N>& tp_real, double s, double alpha, double eps)
{
    const auto tp = to_complex(tp_real);
    const auto z = Z(tp, alpha, eps);
    const auto m = v_second_log(tp, z, s, alpha, eps) - first_log(tp, s, eps);
    return real(m / (z * cplx(std::numbers::pi)));
}

template <int N>
RJet<N> W(const RJet<N>& tp_real, double s, double alpha, double eps)
{
    const auto tp = to_complex(tp_real);
    const auto z = Z(tp, alpha, eps);
    const auto m = w_second_log(tp, z, s, alpha, eps) - first_log(tp, s, eps);
    return imag(-m / (z * cplx(std::numbers::pi)));
}

/**
 * k'_eps(r, t') = (1-nu)/(4 pi mu) [ U(ar) + U(r)
 *     - A1' (2 W(gr, gr) - W(r, gr) - W(ar, gr))
 *     - sum_{j=2,3} A_j (V(r, k_j r) - V(ar, k_j r)) ],
 * with A_1 = i A1' and g = gamma. Differences of antiderivatives are formed
 * before dividing by Z.
 */
template <int N>
RJet<N> k_prime(const HalfspaceParams& hs, double r, const RJet<N>& tp_real, double eps)
{
    const double a = hs.speed_ratio;
    const double ar = a * r;
    const double gr = hs.gamma * r;
    const auto tp = to_complex(tp_real);

    const auto l_ar = first_log(tp, ar, eps);
    const auto l_r = first_log(tp, r, eps);
    const auto l_gr = first_log(tp, gr, eps);

    auto sum = U(tp_real, ar, eps, r) + U(tp_real, r, eps, r);

    {
        const auto zg = Z(tp, gr, eps);
        const auto comb = cplx(2.0) * (w_second_log(tp, zg, gr, gr, eps) - l_gr)
                        - (w_second_log(tp, zg, r, gr, eps) - l_r)
                        - (w_second_log(tp, zg, ar, gr, eps) - l_ar);
        const auto w_comb = imag(-comb / (zg * cplx(std::numbers::pi)));
        sum -= w_comb * hs.coeffs[0].imag();
    }
    for (int j = 1; j < 3; ++j) {
        const double kr = std::sqrt(hs.kappa_sq[j].real()) * r;
        const auto zk = Z(tp, kr, eps);
        const auto comb = (v_second_log(tp, zk, r, kr, eps) - l_r) - (v_second_log(tp, zk, ar, kr, eps) - l_ar);
        const auto v_comb = real(comb / (zk * cplx(std::numbers::pi)));
        sum -= v_comb * hs.coeffs[j].real();
    }
    return sum * (0.5 * hs.static_prefactor());
}

} // namespace detail

inline double closed_form_U(double tprime, double sigma, double eps, double r)
{
    if (!(eps > 0.0) || !(r > 0.0))
        throw std::domain_error("closed_form_U: eps and r must be positive");
    return detail::U<0>(detail::RJet<0>::constant(tprime), sigma, eps, r).value();
}

inline cplx closed_form_Z(double tprime, double alpha, double eps)
{
    if (!(eps > 0.0) || !(alpha > 0.0))
        throw std::domain_error("closed_form_Z: eps and alpha must be positive");
    return detail::Z<0>(detail::CJet<0>::constant(tprime), alpha, eps).value();
}

/// Antiderivative in s of g_eps(t' - s) / sqrt(s^2 - alpha^2); requires s >= alpha.
inline double closed_form_V(double tprime, double s, double alpha, double eps)
{
    if (!(eps > 0.0) || !(alpha > 0.0))
        throw std::domain_error("closed_form_V: eps and alpha must be positive");
    if (s < alpha)
        throw std::domain_error("closed_form_V: requires s >= alpha");
    return detail::V<0>(detail::RJet<0>::constant(tprime), s, alpha, eps).value();
}

/// Antiderivative in s of g_eps(t' - s) / sqrt(alpha^2 - s^2); requires 0 < s <= alpha.
inline double closed_form_W(double tprime, double s, double alpha, double eps)
{
    if (!(eps > 0.0) || !(alpha > 0.0))
        throw std::domain_error("closed_form_W: eps and alpha must be positive");
    if (!(s > 0.0) || s > alpha)
        throw std::domain_error("closed_form_W: requires 0 < s <= alpha");
    return detail::W<0>(detail::RJet<0>::constant(tprime), s, alpha, eps).value();
}

/// True when the closed form is free of branch-cut crossings for this halfspace.
inline bool closed_form_supported(const HalfspaceParams& hs)
{
    if (hs.poisson >= kRealRootPoissonBound || !hs.all_real_roots)
        return false;
    const double a2 = hs.speed_ratio * hs.speed_ratio;
    return hs.kappa_sq[1].real() < a2 && hs.kappa_sq[2].real() < a2;
}

inline void require_closed_form(const HalfspaceParams& hs)
{
    if (!closed_form_supported(hs))
        throw UnsupportedRegime("regularized closed form requires Poisson ratio below 0.2631 (all Rayleigh roots "
                                "real, no branch-cut crossings); got nu = " + std::to_string(hs.poisson));
}

struct RegularizedField {
    HalfspaceParams halfspace;
    double epsilon = 0.0; // smoothing length in c_s t, metres

    RegularizedField() = default;
    RegularizedField(HalfspaceParams hs, double eps) : halfspace(std::move(hs)), epsilon(eps)
    {
        if (!(epsilon > 0.0))
            throw std::domain_error("RegularizedField: epsilon must be positive");
        require_closed_form(halfspace);
    }
};

struct KernelEval {
    double u = 0.0; // push-load displacement, m/N
    double w = 0.0; // impulse displacement, m/(N s)
    double v = 0.0; // impulse velocity dw/dt, m/(N s^2)
    double a = 0.0; // impulse acceleration, m/(N s^3)
};

namespace detail {

inline void check_radius(double r)
{
    if (!(r >= kMinEvalRadius))
        throw std::domain_error("regularized response: r below the 1e-6 m guard (load point is singular)");
}

/// 2 k_eps - k_2eps as a jet in t'.
template <int N>
RJet<N> u_jet(const RegularizedField& f, double r, double t)
{
    check_radius(r);
    const auto tp = RJet<N>::variable(f.halfspace.c_s * t);
    return detail::k_prime<N>(f.halfspace, r, tp, f.epsilon) * 2.0
         - detail::k_prime<N>(f.halfspace, r, tp, 2.0 * f.epsilon);
}

} // namespace detail

inline double u_eps(const RegularizedField& f, double r, double t)
{
    return detail::u_jet<0>(f, r, t).value();
}

inline double w_eps(const RegularizedField& f, double r, double t)
{
    return detail::u_jet<1>(f, r, t).derivative(1) * f.halfspace.c_s;
}

inline double a_eps(const RegularizedField& f, double r, double t)
{
    const double c = f.halfspace.c_s;
    return detail::u_jet<3>(f, r, t).derivative(3) * c * c * c;
}

inline KernelEval evaluate(const RegularizedField& f, double r, double t)
{
    const auto j = detail::u_jet<3>(f, r, t);
    const double c = f.halfspace.c_s;
    return {j.value(), j.derivative(1) * c, j.derivative(2) * c * c, j.derivative(3) * c * c * c};
}

} // namespace groundsound

#endif
