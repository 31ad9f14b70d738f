/**
 * @file branch_scan.hpp
 * @brief Test instrument that checks the quadrant conditions keeping every
 *        complex square root and logarithm of the closed form away from the
 *        principal branch cut (the negative real axis).
 *
 * Conditions checked at each (t', s, alpha):
 *   Z radicand alpha^2 + (eps - i t')^2 is not on the closed negative real axis;
 *   the first log argument eps - i (t' - s) has positive real part;
 *   V's second log argument has negative imaginary part (s > alpha);
 *   W's second log argument is not in the open second quadrant (s < alpha).
 */

#ifndef GROUNDSOUND_BRANCH_SCAN_HPP
#define GROUNDSOUND_BRANCH_SCAN_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "material.hpp"
#include "regularized.hpp"

namespace groundsound {

enum class BranchCondition { ZRadicand, FirstLog, VSecondLog, WSecondLog };

inline const char* to_string(BranchCondition c)
{
    switch (c) {
    case BranchCondition::ZRadicand: return "Z radicand on negative real axis";
    case BranchCondition::FirstLog: return "first log argument has non-positive real part";
    case BranchCondition::VSecondLog: return "V second log argument has non-negative imaginary part";
    case BranchCondition::WSecondLog: return "W second log argument in second quadrant";
    }
    return "unknown";
}

struct BranchViolation {
    BranchCondition condition;
    double tprime;
    double s;
    double alpha;
    double eps;
};

struct BranchScanReport {
    bool applicable = true; // false: complex Rayleigh roots, closed form unsupported
    std::size_t points = 0;
    std::size_t violations = 0;
    std::vector<BranchViolation> examples; // first few violations
};

struct BranchCheck {
    bool z_ok = true;
    bool first_ok = true;
    bool second_ok = true;
};

/// Check one (t', s, alpha) point. V conditions apply when s > alpha, W when s <= alpha.
inline BranchCheck check_branch_point(double tprime, double s, double alpha, double eps)
{
    BranchCheck out;
    const cplx i(0.0, 1.0);
    const cplx e = cplx(eps) - i * tprime;
    const cplx radicand = alpha * alpha + e * e;
    out.z_ok = !(radicand.imag() == 0.0 && radicand.real() <= 0.0);
    const cplx z = std::sqrt(radicand);

    const cplx first = cplx(eps) - i * (tprime - s);
    out.first_ok = first.real() > 0.0;

    if (s > alpha) {
        const cplx arg = alpha * alpha - (tprime + i * eps) * s - i * z * std::sqrt(s * s - alpha * alpha);
        out.second_ok = arg.imag() < 0.0;
    } else {
        const cplx arg = alpha * alpha - (tprime + i * eps) * s + z * std::sqrt(alpha * alpha - s * s);
        out.second_ok = !(arg.real() < 0.0 && arg.imag() > 0.0);
    }
    return out;
}

/**
 * Scan every (s, alpha) pair the closed form uses, for each radius in `radii`
 * and each t' in `tprimes`, at both eps and 2 eps.
 */
inline BranchScanReport branch_safety_scan(const HalfspaceParams& hs, double eps, const std::vector<double>& radii,
                                           const std::vector<double>& tprimes, std::size_t keep_examples = 16)
{
    BranchScanReport rep;
    if (!closed_form_supported(hs)) {
        rep.applicable = false;
        return rep;
    }
    const double a = hs.speed_ratio;
    const double g = hs.gamma;
    const double k2 = std::sqrt(hs.kappa_sq[1].real());
    const double k3 = std::sqrt(hs.kappa_sq[2].real());

    auto record = [&](BranchCondition c, double tp, double s, double al, double e) {
        ++rep.violations;
        if (rep.examples.size() < keep_examples)
            rep.examples.push_back({c, tp, s, al, e});
    };

    for (double r : radii) {
        const double pairs[7][2] = {{g * r, g * r}, {r, g * r},      {a * r, g * r}, {r, k2 * r},
                                    {a * r, k2 * r}, {r, k3 * r}, {a * r, k3 * r}};
        for (double e : {eps, 2.0 * eps}) {
            for (double tp : tprimes) {
                for (const auto& p : pairs) {
                    const double s = p[0];
                    const double al = p[1];
                    ++rep.points;
                    const auto chk = check_branch_point(tp, s, al, e);
                    if (!chk.z_ok)
                        record(BranchCondition::ZRadicand, tp, s, al, e);
                    if (!chk.first_ok)
                        record(BranchCondition::FirstLog, tp, s, al, e);
                    if (!chk.second_ok)
                        record(s > al ? BranchCondition::VSecondLog : BranchCondition::WSecondLog, tp, s, al, e);
                }
            }
        }
    }
    return rep;
}

/// Log-spaced radii and symmetric t' samples giving roughly `target_points` checks.
inline BranchScanReport branch_safety_scan(const HalfspaceParams& hs, double eps, std::size_t target_points = 1000000)
{
    const std::size_t per_radius = 14; // 7 pairs x 2 eps
    const std::size_t n_r = 100;
    const std::size_t n_t = std::max<std::size_t>(2, target_points / (n_r * per_radius));
    std::vector<double> radii(n_r);
    for (std::size_t k = 0; k < n_r; ++k)
        radii[k] = 1e-4 * std::pow(1e5, double(k) / double(n_r - 1));
    std::vector<double> tprimes(n_t);
    // t' over [-10, 10] x (largest radius scale), denser near zero via sinh mapping.
    for (std::size_t k = 0; k < n_t; ++k) {
        const double x = -1.0 + 2.0 * double(k) / double(n_t - 1);
        tprimes[k] = 10.0 * std::sinh(8.0 * x) / std::sinh(8.0);
    }
    return branch_safety_scan(hs, eps, radii, tprimes);
}

} // namespace groundsound

#endif
