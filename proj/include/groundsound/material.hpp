/**
 * @file material.hpp
 * @brief Elastic materials and the derived halfspace parameters used by the
 *        Lamb's-problem solution: wave speeds, Rayleigh-cubic roots, and the
 *        A_j coefficients.
 */

#ifndef GROUNDSOUND_MATERIAL_HPP
#define GROUNDSOUND_MATERIAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace groundsound {

using cplx = std::complex<double>;

/// Poisson ratio above which the Rayleigh cubic has a complex-conjugate pair.
inline constexpr double kRealRootPoissonBound = 0.2631;

struct Material {
    std::string name;
    double youngs_modulus = 0.0; // Pa
    double poisson = 0.0;        // dimensionless
    double density = 0.0;        // kg/m^3

    double shear_modulus() const { return youngs_modulus / (2.0 * (1.0 + poisson)); }
    double shear_speed() const { return std::sqrt(shear_modulus() / density); }

    void validate() const
    {
        const std::string who = name.empty() ? std::string("material") : "material '" + name + "'";
        if (!(youngs_modulus > 0.0) || !std::isfinite(youngs_modulus))
            throw ConfigError(who + ": Young's modulus must be positive (got " + std::to_string(youngs_modulus) + ")");
        if (!(poisson >= 0.0 && poisson < 0.5))
            throw ConfigError(who + ": Poisson ratio must lie in [0, 0.5) (got " + std::to_string(poisson) + ")");
        if (!(density > 0.0) || !std::isfinite(density))
            throw ConfigError(who + ": density must be positive (got " + std::to_string(density) + ")");
    }
};

/// Roots x = kappa^2 of 16(1-a^2)x^3 - 8(3-2a^2)x^2 + 8x - 1 = 0.
struct RayleighRoots {
    std::array<cplx, 3> kappa_sq; // kappa_sq[0] is the largest real root (gamma^2)
    bool all_real = true;
};

/// Coefficients of the Rayleigh cubic, highest power first.
inline std::array<double, 4> rayleigh_cubic(double a)
{
    const double a2 = a * a;
    return {16.0 * (1.0 - a2), -8.0 * (3.0 - 2.0 * a2), 8.0, -1.0};
}

namespace detail {

inline cplx horner(const std::array<double, 4>& c, cplx x)
{
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

inline cplx horner_derivative(const std::array<double, 4>& c, cplx x)
{
    return (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
}

inline cplx newton_polish(const std::array<double, 4>& c, cplx x)
{
    for (int it = 0; it < 6; ++it) {
        const cplx d = horner_derivative(c, x);
        if (d == cplx(0.0))
            break;
        const cplx step = horner(c, x) / d;
        x -= step;
        if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(x)))
            break;
    }
    return x;
}

} // namespace detail

/**
 * Solve the Rayleigh cubic for a given speed ratio a = c_s/c_p.
 *
 * Closed-form (trigonometric or Cardano) seeds are refined with Newton steps.
 * Real roots are returned with an exactly zero imaginary part, sorted in
 * descending order; in the complex regime the single real root comes first and
 * the conjugate pair follows with the positive imaginary part first.
 */
inline RayleighRoots rayleigh_roots(double a)
{
    if (!(a > 0.0 && a <= std::sqrt(0.5) + 1e-15))
        throw std::domain_error("rayleigh_roots: speed ratio must lie in (0, 1/sqrt(2)]");

    const auto c = rayleigh_cubic(a);
    // Monic form x^3 + b x^2 + p x + q.
    const double b = c[1] / c[0];
    const double p = c[2] / c[0];
    const double q = c[3] / c[0];
    // Depressed cubic y^3 + P y + Q with x = y - b/3.
    const double P = p - b * b / 3.0;
    const double Q = 2.0 * b * b * b / 27.0 - b * p / 3.0 + q;
    const double disc = -(4.0 * P * P * P + 27.0 * Q * Q); // > 0: three distinct real roots

    RayleighRoots out;
    std::array<cplx, 3> seeds;
    if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-P / 3.0);
        const double arg = std::clamp(3.0 * Q / (P * m) , -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            seeds[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - b / 3.0;
        out.all_real = true;
    } else {
        const double s = std::sqrt(std::max(0.0, Q * Q / 4.0 + P * P * P / 27.0));
        const double u = std::cbrt(-Q / 2.0 + s);
        const double v = std::cbrt(-Q / 2.0 - s);
        const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
        seeds[0] = u + v - b / 3.0;
        seeds[1] = u * omega + v * std::conj(omega) - b / 3.0;
        seeds[2] = std::conj(seeds[1]);
        out.all_real = false;
    }

    for (auto& r : seeds)
        r = detail::newton_polish(c, r);

    if (out.all_real) {
        for (auto& r : seeds)
            r = cplx(r.real(), 0.0);
        std::sort(seeds.begin(), seeds.end(), [](cplx l, cplx r) { return l.real() > r.real(); });
    } else {
        seeds[0] = cplx(seeds[0].real(), 0.0);
        if (seeds[1].imag() < 0.0)
            std::swap(seeds[1], seeds[2]);
        seeds[2] = std::conj(seeds[1]);
    }
    out.kappa_sq = seeds;
    return out;
}

/**
 * A_j = (k_j^2 - 1/2)^2 sqrt(a^2 - k_j^2) / ((k_j^2 - k_i^2)(k_j^2 - k_k^2)).
 * Principal complex square root throughout; j is zero-based.
 */
inline cplx coeff_A(int j, const std::array<cplx, 3>& kappa_sq, double a)
{
    if (j < 0 || j > 2)
        throw std::out_of_range("coeff_A: index must be 0, 1 or 2");
    const cplx kj = kappa_sq[j];
    const cplx ki = kappa_sq[(j + 1) % 3];
    const cplx kk = kappa_sq[(j + 2) % 3];
    const double scale = std::max({std::abs(kj), std::abs(ki), std::abs(kk), 1.0});
    if (std::abs(kj - ki) < 1e-12 * scale || std::abs(kj - kk) < 1e-12 * scale)
        throw NumericalError("coeff_A: repeated Rayleigh roots, coefficients are undefined");
    const cplx half_gap = kj - 0.5;
    return half_gap * half_gap * std::sqrt(cplx(a * a, 0.0) - kj) / ((kj - ki) * (kj - kk));
}

struct HalfspaceParams {
    double poisson = 0.0;       // nu
    double shear_modulus = 0.0; // mu, Pa
    double c_p = 0.0;           // m/s
    double c_s = 0.0;           // m/s
    double speed_ratio = 0.0;   // a = c_s / c_p
    std::array<cplx, 3> kappa_sq{};
    double gamma = 0.0; // sqrt(kappa_sq[0]) = c_s / c_r
    std::array<cplx, 3> coeffs{};
    bool all_real_roots = true;

    double c_r() const { return c_s / gamma; }
    /// (1 - nu) / (2 pi mu): static displacement times r for a unit load.
    double static_prefactor() const { return (1.0 - poisson) / (2.0 * std::numbers::pi * shear_modulus); }
};

inline double speed_ratio_for(double poisson)
{
    return std::sqrt((1.0 - 2.0 * poisson) / (2.0 - 2.0 * poisson));
}

/// Halfspace from (mu, nu, c_s) directly; used where the density is implied.
inline HalfspaceParams halfspace_from_moduli(double shear_modulus, double poisson, double c_s)
{
    if (!(poisson >= 0.0 && poisson < 0.5))
        throw ConfigError("halfspace: Poisson ratio must lie in [0, 0.5)");
    if (!(shear_modulus > 0.0) || !(c_s > 0.0))
        throw ConfigError("halfspace: shear modulus and shear speed must be positive");
    HalfspaceParams hs;
    hs.poisson = poisson;
    hs.shear_modulus = shear_modulus;
    hs.c_s = c_s;
    hs.speed_ratio = speed_ratio_for(poisson);
    hs.c_p = c_s / hs.speed_ratio;
    const auto roots = rayleigh_roots(hs.speed_ratio);
    hs.kappa_sq = roots.kappa_sq;
    hs.all_real_roots = roots.all_real;
    hs.gamma = std::sqrt(roots.kappa_sq[0].real());
    for (int j = 0; j < 3; ++j)
        hs.coeffs[j] = coeff_A(j, hs.kappa_sq, hs.speed_ratio);
    return hs;
}

inline HalfspaceParams derive_halfspace(const Material& m)
{
    m.validate();
    return halfspace_from_moduli(m.shear_modulus(), m.poisson, m.shear_speed());
}

} // namespace groundsound

#endif
