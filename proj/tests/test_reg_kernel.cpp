/**
 * @file test_reg_kernel.cpp
 * @brief Smoothing kernels, closed-form pieces, regularized response and its
 *        derivatives, the convolution oracle and the branch scan.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "groundsound/branch_scan.hpp"
#include "groundsound/lamb.hpp"
#include "groundsound/oracle.hpp"
#include "groundsound/regularized.hpp"
#include "groundsound/scenario.hpp"

using namespace groundsound;

namespace {

HalfspaceParams wood()
{
    return derive_halfspace(MaterialDb::builtin().at("wood"));
}

double static_disp(const HalfspaceParams& hs, double r)
{
    return hs.static_prefactor() / r;
}

/// 6th-order central difference of fn at t with step h.
template <class F>
double fd1(F&& fn, double t, double h)
{
    return (-fn(t - 3 * h) + 9 * fn(t - 2 * h) - 45 * fn(t - h) + 45 * fn(t + h) - 9 * fn(t + 2 * h) + fn(t + 3 * h))
         / (60 * h);
}

} // namespace

TEST(Kernel, UnitMassAndPeak)
{
    const double c = 2422.0, eps = 0.1;
    EXPECT_NEAR(kernel_f(0.0, eps, c), 3.0 * c / (2.0 * std::numbers::pi * eps), 1e-9);
    for (double e : {0.01, 0.1, 1.0}) {
        auto f = [&](double t) { return kernel_f(t, e, c); };
        const double h = e / c;
        // t = h tan(theta) maps the real line onto (-pi/2, pi/2).
        auto g = [&](double th) { return f(h * std::tan(th)) * h / (std::cos(th) * std::cos(th)); };
        const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            g, -std::numbers::pi / 2, std::numbers::pi / 2, 15, 1e-13);
        EXPECT_NEAR(total, 1.0, 1e-9) << e;
        EXPECT_NEAR(kernel_f_cumulative(1e6 * h, e, c) - kernel_f_cumulative(-1e6 * h, e, c), 1.0, 1e-12);
    }
}

TEST(Kernel, FourthOrderTail)
{
    const double c = 1000.0, eps = 0.05, h = eps / c;
    const double t1 = 10 * h, t2 = 1000 * h;
    const double slope = std::log(kernel_f(t2, eps, c) / kernel_f(t1, eps, c)) / std::log(t2 / t1);
    EXPECT_NEAR(slope, -4.0, 0.05);
    EXPECT_GT(kernel_f(t2, eps, c), 0.0);
}

TEST(Kernel, JetMatchesScalarForms)
{
    const double c = 1500.0, eps = 0.03;
    for (double t : {-3e-5, 0.0, 1e-5, 4e-4}) {
        const auto j = kernel_f_jet<2>(t, eps, c);
        EXPECT_NEAR(j.value(), kernel_f(t, eps, c), 1e-12 * kernel_f(0, eps, c));
        EXPECT_NEAR(j.derivative(1), kernel_f_derivative(t, eps, c), 1e-9 * std::abs(kernel_f_derivative(1e-5, eps, c)));
    }
}

TEST(ClosedForm, TrivialValues)
{
    EXPECT_DOUBLE_EQ(closed_form_U(0.3, 0.3, 0.05, 2.0), 0.25);
    const cplx z = closed_form_Z(0.0, 0.3, 0.4);
    EXPECT_DOUBLE_EQ(z.real(), 0.5);
    EXPECT_EQ(z.imag(), 0.0);
}

TEST(ClosedForm, ArgumentOrderingEnforced)
{
    EXPECT_THROW(closed_form_V(0.1, 0.2, 0.3, 0.01), std::domain_error);
    EXPECT_THROW(closed_form_W(0.1, 0.4, 0.3, 0.01), std::domain_error);
    EXPECT_THROW(closed_form_Z(0.1, 0.3, 0.0), std::domain_error);
}

TEST(ClosedForm, VAndWMatchQuadrature)
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        const double eps = 0.005 + 0.1 * U01(rng);
        const double alpha = 0.1 + U01(rng);
        const double tp = -0.5 + 3.0 * U01(rng);
        auto g = [&](double s) { return eps / (std::numbers::pi * ((tp - s) * (tp - s) + eps * eps)); };
        {
            const double s1 = alpha * (1.0 + 0.5 * U01(rng));
            const double s2 = s1 + 1.5 * U01(rng) + 1e-3;
            auto fv = [&](double s) { return g(s) / std::sqrt(s * s - alpha * alpha); };
            const double ref = ts.integrate(fv, s1, s2);
            const double got = closed_form_V(tp, s2, alpha, eps) - closed_form_V(tp, s1, alpha, eps);
            EXPECT_NEAR(got, ref, 1e-6 * std::abs(ref) + 1e-12) << "V at k=" << k;
        }
        {
            const double s1 = alpha * U01(rng) * 0.99 + 1e-3;
            const double s2 = s1 + (alpha - s1) * U01(rng);
            auto fw = [&](double s) { return g(s) / std::sqrt(alpha * alpha - s * s); };
            const double ref = ts.integrate(fw, s1, s2);
            const double got = closed_form_W(tp, s2, alpha, eps) - closed_form_W(tp, s1, alpha, eps);
            EXPECT_NEAR(got, ref, 1e-6 * std::abs(ref) + 1e-12) << "W at k=" << k;
        }
        ++checked;
    }
    EXPECT_EQ(checked, 100);
}

TEST(Regularized, FrozenReferenceValuesWood)
{
    // 30-digit quadrature of f_eps * u_n.
    const RegularizedField f(wood(), 0.0989);
    struct Ref { double t, u; };
    for (const Ref& ref : {Ref{5e-4, 2.03737683575996827e-11}, Ref{4e-4, -5.73281509088291234e-12},
                           Ref{3e-4, -8.91142409821520760e-13}, Ref{1e-3, 2.71196825326117539e-11}}) {
        EXPECT_NEAR(u_eps(f, 1.0, ref.t), ref.u, 1e-4 * 2.7e-11) << ref.t;
        EXPECT_NEAR(u_eps(f, 1.0, ref.t), ref.u, 1e-8 * 2.7e-11) << ref.t;
    }
    const RegularizedField g(wood(), 0.02);
    EXPECT_NEAR(u_eps(g, 0.3, 1.3e-4), -4.69694449812161165e-11, 1e-8 * static_disp(wood(), 0.3));
}

TEST(Regularized, MatchesConvolutionOracle)
{
    const auto hs = wood();
    const RegularizedField f(hs, 0.0989);
    for (double r : {0.05, 0.3, 1.0, 3.0}) {
        for (double tau : {-0.5, 0.4, 0.6, 0.9, 1.0, 1.05, 1.09, 1.3, 3.0}) {
            const double t = tau * r / hs.c_s;
            const double ref = convolution_oracle(f, r, t);
            EXPECT_NEAR(u_eps(f, r, t), ref, 1e-7 * static_disp(hs, r)) << "r=" << r << " tau=" << tau;
        }
    }
}

TEST(Regularized, Limits)
{
    const auto hs = wood();
    const RegularizedField f(hs, 0.05);
    const double r = 0.5;
    EXPECT_NEAR(u_eps(f, r, -1.0), 0.0, 1e-8 * static_disp(hs, r));
    EXPECT_NEAR(u_eps(f, r, 10.0), static_disp(hs, r), 1e-8 * static_disp(hs, r));
    EXPECT_NEAR(w_eps(f, r, -1.0), 0.0, 1e-6 * static_disp(hs, r));
    EXPECT_NEAR(w_eps(f, r, 10.0), 0.0, 1e-6 * static_disp(hs, r));
}

TEST(Regularized, ImpulseDisplacementIntegratesToStaticStep)
{
    const auto hs = wood();
    const RegularizedField f(hs, 0.05);
    const double r = 0.4;
    auto w = [&](double t) { return w_eps(f, r, t); };
    const double t0 = -2.0, t1 = 2.0;
    std::vector<double> cuts = {t0, -1e-3, 0.0, 0.5 * r / hs.c_s, r / hs.c_s, 1.1 * r / hs.c_s, 1e-3, t1};
    double total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(w, cuts[k], cuts[k + 1], 15, 1e-12);
    EXPECT_NEAR(total, u_eps(f, r, t1) - u_eps(f, r, t0), 1e-8 * static_disp(hs, r));
    EXPECT_NEAR(total, static_disp(hs, r), 1e-5 * static_disp(hs, r));
}

TEST(Regularized, DerivativesMatchFiniteDifferences)
{
    const auto hs = wood();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const double eps = 0.02 + 0.1 * U01(rng);
        const RegularizedField f(hs, eps);
        const double r = 0.01 + 2.0 * U01(rng);
        const double t = (-0.2 + 1.6 * U01(rng)) * r / hs.c_s;
        const double h = 0.05 * eps / hs.c_s;
        auto u = [&](double s) { return u_eps(f, r, s); };
        auto w = [&](double s) { return w_eps(f, r, s); };
        auto v = [&](double s) { return evaluate(f, r, s).v; };
        const double w_fd = fd1(u, t, h);
        const double a_fd = fd1(v, t, h);
        const auto ev = evaluate(f, r, t);
        const double w_scale = std::max(std::abs(ev.w), 1e-3 * static_disp(hs, r) * hs.c_s / eps);
        const double a_scale = std::max(std::abs(ev.a), 1e-3 * static_disp(hs, r) * std::pow(hs.c_s / eps, 3));
        EXPECT_NEAR(ev.w, w_fd, 1e-6 * w_scale) << "r=" << r << " t=" << t;
        EXPECT_NEAR(ev.a, a_fd, 1e-4 * a_scale) << "r=" << r << " t=" << t;
        EXPECT_EQ(ev.w, w(t));
        EXPECT_EQ(ev.a, a_eps(f, r, t));
    }
}

TEST(Regularized, NoJumpsAlongTraces)
{
    // Smooth traces: second differences stay small against the local
    // curvature bound set by eps.
    const auto hs = wood();
    for (double eps : {0.01, 0.0989}) {
        const RegularizedField f(hs, eps);
        for (double r : {0.003, 0.1, 1.0, 5.0}) {
            const double dt = eps / hs.c_s / 40.0;
            const double t_end = 1.5 * r / hs.c_s + 40 * eps / hs.c_s;
            double prev2 = u_eps(f, r, -20 * eps / hs.c_s);
            double prev1 = u_eps(f, r, -20 * eps / hs.c_s + dt);
            const double bound = 0.05 * static_disp(hs, r) * std::max(1.0, r / eps);
            for (double t = -20 * eps / hs.c_s + 2 * dt; t < t_end; t += dt) {
                const double cur = u_eps(f, r, t);
                ASSERT_TRUE(std::isfinite(cur));
                ASSERT_LT(std::abs(cur - 2 * prev1 + prev2), bound) << "eps=" << eps << " r=" << r << " t=" << t;
                prev2 = prev1;
                prev1 = cur;
            }
        }
    }
}

TEST(Regularized, UnsupportedRegimeAndRadiusGuard)
{
    const auto hs30 = halfspace_from_moduli(1e9, 0.30, 1000.0);
    try {
        RegularizedField f(hs30, 0.1);
        FAIL();
    } catch (const UnsupportedRegime& e) {
        EXPECT_NE(std::string(e.what()).find("0.2631"), std::string::npos);
    }
    const RegularizedField f(wood(), 0.1);
    EXPECT_THROW(u_eps(f, 0.0, 1e-4), std::domain_error);
    EXPECT_THROW(u_eps(f, 1e-7, 1e-4), std::domain_error);
    EXPECT_NO_THROW(u_eps(f, 1e-6, 1e-4));
    EXPECT_THROW(RegularizedField(wood(), 0.0), std::domain_error);
}

TEST(Oracle, ConvergesToPekerisAsEpsShrinks)
{
    const auto hs = wood();
    const double r = 1.0;
    for (double tau : {0.5, 0.75, 0.95, 1.04, 1.2}) {
        const double t = tau * r / hs.c_s;
        const double eps = 1e-3 * r;
        const double exact = pekeris_displacement(hs, r, t);
        EXPECT_NEAR(convolution_oracle(hs, eps, r, t), exact, 0.01 * std::abs(exact) + 1e-6 * static_disp(hs, r))
            << tau;
    }
}

TEST(Oracle, ComplexRootRegimeFiniteAndSmooth)
{
    const auto hs = halfspace_from_moduli(1e9, 0.30, 1000.0);
    const double r = 1.0, eps = 0.05, dt = 2e-6;
    std::vector<double> u;
    for (int k = 0; k <= 600; ++k) {
        u.push_back(convolution_oracle(hs, eps, r, k * dt));
        ASSERT_TRUE(std::isfinite(u.back()));
    }
    for (std::size_t k = 2; k < u.size(); ++k)
        EXPECT_LT(std::abs(u[k] - 2 * u[k - 1] + u[k - 2]), 0.05 * static_disp(hs, r)) << k * dt;
}

TEST(BranchScan, QuarterPoissonClean)
{
    const auto hs = wood();
    const auto rep = branch_safety_scan(hs, 0.0989, 100000);
    EXPECT_TRUE(rep.applicable);
    EXPECT_GE(rep.points, 90000u);
    EXPECT_EQ(rep.violations, 0u);
}

TEST(BranchScan, RadicandPositiveRealAtZeroTime)
{
    const cplx z = closed_form_Z(0.0, 0.7, 0.1);
    EXPECT_GT(z.real(), 0.0);
    EXPECT_EQ(z.imag(), 0.0);
    EXPECT_TRUE(check_branch_point(0.0, 1.0, 0.7, 0.1).z_ok);
}

TEST(BranchScan, ComplexRegimeNotApplicable)
{
    const auto rep = branch_safety_scan(halfspace_from_moduli(1e9, 0.30, 1000.0), 0.1, 1000);
    EXPECT_FALSE(rep.applicable);
    EXPECT_EQ(rep.points, 0u);
}
